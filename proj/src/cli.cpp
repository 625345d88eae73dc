// Command-line front end.  Subcommands map one-to-one onto the library
// surface: count (table cells and cache building), law (exact height and
// root-degree laws as CSV), zfun (partition function with its closed-form
// regime values), sample (tree generation), asym (scalar predictions),
// exp (verification experiments), cache (list/verify/purge).
//
// Exit codes: 0 success, 1 usage or validation error, 2 a gated experiment
// row failed.  All errors are a single "error: ..." line on the error
// stream.  Numeric output is locale-independent; quantities held in
// log-magnitude form print a decimal value plus their base-10 log.

#include "treelab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "treelab/asymptotics.hpp"
#include "treelab/counting.hpp"
#include "treelab/experiments.hpp"
#include "treelab/lattice_path.hpp"
#include "treelab/partition.hpp"
#include "treelab/plane_tree.hpp"
#include "treelab/rng.hpp"
#include "treelab/sampler.hpp"

namespace treelab {

namespace {

// desk-scale ceilings; raise with --max-n at your own patience
constexpr int kExactCeiling = 1500;
constexpr int kLogCeiling = 30000;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// decimal rendering: integer-valued quantities as integers (snapped within
// the log backend's own cell noise, ~1e-13 relative), ordinary magnitudes
// as plain doubles, everything else in scientific mantissa-exponent form
std::string lr_decimal(const LogReal& x) {
  if (x.is_zero()) return "0";
  double v = x.to_double();
  if (std::isfinite(v)) {
    if (std::fabs(v) >= 0.5 && std::fabs(v) < 9.0e15 &&
        std::fabs(v - std::rint(v)) <= 1e-12 * std::fabs(v)) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.0f", std::rint(v));
      return buf;
    }
    return fmt(v);
  }
  return x.to_string();
}

std::string lr_with_log10(const LogReal& x) {
  if (x.is_zero()) return "0 log10=-inf";
  return lr_decimal(x) + " log10=" + fmt(x.log10());
}

Backend backend_from(const std::string& s) {
  if (s == "exact") return Backend::exact;
  if (s == "log") return Backend::log_approx;
  throw std::invalid_argument("backend must be 'exact' or 'log'");
}

void check_ceiling(int n, Backend b, int max_n) {
  int ceil_n = max_n > 0 ? max_n : (b == Backend::exact ? kExactCeiling : kLogCeiling);
  if (n > ceil_n)
    throw std::invalid_argument(
        "n=" + std::to_string(n) + " exceeds the ceiling " +
        std::to_string(ceil_n) +
        (max_n > 0 ? "" : " for this backend; raise it with --max-n"));
}

// ---------- count ----------

struct CountArgs {
  int n = 0;
  int m = -1;
  int height = -1;
  std::string backend = "exact";
  std::string verify_tree;
  bool build = false;
  std::string cache_dir;
  int max_n = 0;
};

int run_count(const CountArgs& a, std::ostream& out) {
  if (!a.verify_tree.empty()) {
    PlaneTree t = from_parens(a.verify_tree);
    TreeStats st = stats(t);
    out << "valid size=" << t.size() << " height=" << st.height
        << " width=" << st.width << " root_degree=" << st.root_degree << "\n";
    return 0;
  }
  if (a.n < 1) throw std::invalid_argument("count: need --n >= 1");
  Backend b = backend_from(a.backend);
  if (a.build) {
    if (a.m < 2) throw std::invalid_argument("count --build: need --m >= 2");
    check_ceiling(a.n, b, a.max_n);
    CountTable table = build_counts(a.n, a.m, b);
    std::string dir = a.cache_dir.empty() ? default_cache_dir() : a.cache_dir;
    std::string path = dir + "/" + cache_file_name(a.n, a.m, b);
    save_table(table, path);
    out << "saved " << path << " n_max=" << a.n << " m_max=" << a.m
        << " backend=" << a.backend << "\n";
    return 0;
  }
  if (a.m >= 0 && a.height >= 0)
    throw std::invalid_argument("count: give only one of --m and --height");
  if (a.m >= 0) {
    if (b == Backend::exact) {
      out << "H(" << a.n << "," << a.m << ")="
          << trig_count_exact(a.n, a.m).get_str() << "\n";
    } else {
      double lg = trig_log_H(a.n, a.m);
      LogReal h = std::isfinite(lg) ? LogReal::exp_of(dd(lg), +1) : LogReal::zero();
      out << "H(" << a.n << "," << a.m << ")=" << lr_with_log10(h) << "\n";
    }
    return 0;
  }
  if (a.height >= 0) {
    int h = a.height;
    mpz_class e = h > a.n - 1 ? mpz_class(0)
                              : trig_count_exact(a.n, h + 1) - trig_count_exact(a.n, h);
    if (b == Backend::exact) {
      out << "E(" << a.n << "," << h << ")=" << e.get_str() << "\n";
    } else {
      out << "E(" << a.n << "," << h << ")=" << lr_with_log10(logreal_from_mpz(e))
          << "\n";
    }
    return 0;
  }
  out << "trees(" << a.n << ")=" << catalan(a.n - 1).get_str() << "\n";
  return 0;
}

// ---------- law ----------

struct LawArgs {
  std::string kind;
  int n = 0;
  double mu = 0.0;
  std::string backend = "log";
  int r_max = 0;
  int max_n = 0;
  std::string out_path;
};

int run_law(const LawArgs& a, std::ostream& out) {
  if (a.n < 2) throw std::invalid_argument("law: need --n >= 2");
  if (a.mu < 0) throw std::invalid_argument("law: need --mu >= 0");
  Backend b = backend_from(a.backend);
  check_ceiling(a.n, b, a.max_n);
  CountTable table = CountTable::closed_form(a.n, a.n, b);
  std::ostringstream csv;
  if (a.kind == "height") {
    HeightLaw law = height_law(a.n, a.mu, table);
    csv << "h,p\n";
    for (int h = 0; h < a.n; ++h) csv << h << "," << fmt(law.p(h)) << "\n";
  } else if (a.kind == "root-degree") {
    int r_max = a.r_max > 0
                    ? a.r_max
                    : std::min(a.n - 1,
                               static_cast<int>(2.0 * a.mu +
                                                8.0 * std::sqrt(6.0 * a.mu + 1.0)) +
                                   10);
    RootDegreeLaw law = root_degree_law(a.n, a.mu, table, r_max);
    csv << "r,p\n";
    for (int r = 1; r <= law.r_max; ++r) csv << r << "," << fmt(law.p(r)) << "\n";
  } else {
    throw std::invalid_argument("law: --kind must be 'height' or 'root-degree'");
  }
  if (a.out_path.empty()) {
    out << csv.str();
  } else {
    std::ofstream f(a.out_path, std::ios::trunc);
    if (!f) throw std::runtime_error("law: cannot write " + a.out_path);
    f << csv.str();
  }
  return 0;
}

// ---------- zfun ----------

struct ZfunArgs {
  int n = 0;
  double mu = 0.0;
  std::string backend = "log";
  int max_n = 0;
};

int run_zfun(const ZfunArgs& a, std::ostream& out) {
  if (a.n < 2) throw std::invalid_argument("zfun: need --n >= 2");
  if (a.mu < 0) throw std::invalid_argument("zfun: need --mu >= 0");
  Backend b = backend_from(a.backend);
  check_ceiling(a.n, b, a.max_n);
  CountTable table = CountTable::closed_form(a.n, a.n, b);
  LogReal z = partition_function(a.n, a.mu, table);
  out << "Z=" << lr_with_log10(z) << "\n";
  if (a.n >= 3)
    out << "W=" << lr_with_log10(w_sum(a.n, a.mu, table)) << "\n";
  out << "regime=" << regime_name(classify_regime(a.n, a.mu)) << "\n";
  if (a.mu > 0 && a.n >= 3) {
    for (const RegimeValue& rv : partition_asymptotic(a.n, a.mu)) {
      out << "asym[" << regime_name(rv.regime) << "]=" << lr_with_log10(rv.value)
          << " ratio=" << fmt((z / rv.value).to_double()) << "\n";
    }
  }
  return 0;
}

// ---------- sample ----------

struct SampleArgs {
  int n = 0;
  double mu = -1.0;
  int m = -1;
  int height = -1;
  long count = 1;
  std::uint64_t seed = 20260823;
  std::string format = "parens";
  std::string backend = "log";
  int max_n = 0;
};

int run_sample(const SampleArgs& a, std::ostream& out) {
  if (a.n < 1) throw std::invalid_argument("sample: need --n >= 1");
  if (a.count < 1) throw std::invalid_argument("sample: need --count >= 1");
  if (a.format != "parens" && a.format != "contour")
    throw std::invalid_argument("sample: --format must be 'parens' or 'contour'");
  int modes = (a.mu >= 0) + (a.m >= 0) + (a.height >= 0);
  if (modes > 1)
    throw std::invalid_argument("sample: give at most one of --mu, --m, --height");
  Backend b = backend_from(a.backend);
  RngStream rng(a.seed, 0);

  auto emit = [&](const PlaneTree& t) {
    if (a.format == "parens") {
      out << to_parens(t) << "\n";
    } else {
      out << to_ud_string(to_contour(t)) << "\n";
    }
  };

  if (modes == 0) {
    for (long i = 0; i < a.count; ++i) emit(sample_uniform_tree(a.n, rng));
    return 0;
  }
  check_ceiling(a.n, b, a.max_n);
  CountTable table = CountTable::closed_form(a.n, a.n, b);
  if (a.m >= 0) {
    if (a.m < 2 && a.n > 1)
      throw std::invalid_argument("sample: trees with n >= 2 nodes have height >= 1");
    for (long i = 0; i < a.count; ++i)
      emit(sample_uniform_bounded(a.n, a.m, table, rng));
    return 0;
  }
  if (a.height >= 0) {
    if (a.height > a.n - 1 || (a.n >= 2 && a.height < 1) ||
        (a.n == 1 && a.height != 0))
      throw std::invalid_argument("sample: no trees with this exact height");
    for (long i = 0; i < a.count; ++i)
      emit(sample_uniform_exact_height(a.n, a.height, table, rng));
    return 0;
  }
  // biased: build the height law once, then draw height + conditional tree
  HeightLaw law = height_law(a.n, a.mu, table);
  for (long i = 0; i < a.count; ++i) {
    int h = a.n == 1 ? 0 : sample_height(law, rng);
    emit(a.n == 1 ? single_node() : sample_uniform_exact_height(a.n, h, table, rng));
  }
  return 0;
}

// ---------- asym ----------

struct AsymArgs {
  int n = 0;
  double mu = 0.0;
  double x = -1.0;
  std::string ball;
};

int run_asym(const AsymArgs& a, std::ostream& out) {
  if (a.n < 2) throw std::invalid_argument("asym: need --n >= 2");
  if (a.mu <= 0) throw std::invalid_argument("asym: need --mu > 0");
  PredictionSet p = height_predictions(a.n, a.mu);
  out << "n=" << p.n << "\n";
  out << "mu=" << fmt(p.mu) << "\n";
  out << "x=" << fmt(p.x) << "\n";
  out << "t_x=" << fmt(p.t_x) << "\n";
  out << "regime=" << regime_name(p.regime) << "\n";
  out << "lln_height=" << fmt(p.lln_height) << "\n";
  out << "clt_sd=" << fmt(p.clt_sd) << "\n";
  out << "m_x=" << p.m_x << "\n";
  out << "delta_n=" << fmt(p.delta_n) << "\n";
  out << "bernoulli_p=" << fmt(p.bernoulli_p) << "\n";
  out << "width_scale=" << fmt(p.width_scale) << "\n";
  out << "concentration_applies=" << (p.concentration_applies ? 1 : 0) << "\n";
  if (a.x > 0) out << "ldp_rate(" << fmt(a.x) << ")=" << fmt(ldp_rate(a.x)) << "\n";
  if (!a.ball.empty())
    out << "kesten_ball_mass=" << fmt(kesten_ball_mass(from_parens(a.ball)))
        << "\n";
  return 0;
}

// ---------- exp ----------

struct ExpArgs {
  std::string name;
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 20260823;
  int workers = 0;
  int n = 0;
  long samples = 0;
  bool list = false;
};

int run_exp(const ExpArgs& a, std::ostream& out) {
  if (a.list) {
    for (const std::string& name : experiment_names()) out << name << "\n";
    return 0;
  }
  if (a.name.empty())
    throw std::invalid_argument("exp: give an experiment name or --list");
  ExperimentConfig cfg;
  cfg.seed = a.seed;
  cfg.workers = a.workers;
  if (!a.config_path.empty()) {
    std::ifstream f(a.config_path);
    if (!f) throw std::invalid_argument("exp: cannot read " + a.config_path);
    try {
      cfg.overrides = nlohmann::json::parse(f);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::invalid_argument("exp: bad JSON in " + a.config_path + ": " +
                                  e.what());
    }
    if (!cfg.overrides.is_object())
      throw std::invalid_argument("exp: config must be a JSON object");
  }
  if (a.n > 0) cfg.overrides["n"] = a.n;
  if (a.samples > 0) cfg.overrides["samples"] = a.samples;
  ExperimentReport rep = run_experiment(a.name, cfg);
  std::string body = (a.out_path.size() >= 5 &&
                      a.out_path.substr(a.out_path.size() - 5) == ".json")
                         ? rep.to_json()
                         : rep.to_csv();
  if (a.out_path.empty()) {
    out << rep.to_csv();
  } else {
    std::ofstream f(a.out_path, std::ios::trunc);
    if (!f) throw std::runtime_error("exp: cannot write " + a.out_path);
    f << body;
  }
  return rep.all_passed() ? 0 : 2;
}

// ---------- cache ----------

struct CacheArgs {
  std::string action;
  std::string dir;
};

int run_cache(const CacheArgs& a, std::ostream& out, std::ostream& err) {
  std::string dir = a.dir.empty() ? default_cache_dir() : a.dir;
  if (a.action == "list" || a.action == "verify") {
    std::vector<CacheEntryInfo> entries = list_cache(dir);
    bool all_ok = true;
    for (const CacheEntryInfo& e : entries) {
      out << e.path << " format=" << e.format << " n_max=" << e.n_max
          << " m_max=" << e.m_max << " backend=" << e.backend
          << " records=" << e.records << " hash=" << (e.hash_ok ? "ok" : "bad")
          << "\n";
      all_ok = all_ok && e.hash_ok;
    }
    if (a.action == "verify" && !all_ok) {
      err << "error: cache directory " << dir << " has corrupt files\n";
      return 1;
    }
    return 0;
  }
  if (a.action == "purge") {
    out << "purged " << purge_cache(dir) << " files\n";
    return 0;
  }
  throw std::invalid_argument("cache: action must be list, verify, or purge");
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"exact laws, samplers, and asymptotic checks for height-tilted plane trees"};
  app.require_subcommand(0, 1);

  CountArgs ca;
  CLI::App* count = app.add_subcommand("count", "tree counts and count-table caching");
  count->add_option("--n", ca.n, "number of nodes");
  count->add_option("--m", ca.m, "height bound (counts trees of height < m)");
  count->add_option("--height", ca.height, "exact height (counts trees of that height)");
  count->add_option("--backend", ca.backend, "exact | log")->default_str("exact");
  count->add_option("--verify-tree", ca.verify_tree, "parse a parenthesis word and print its stats");
  count->add_flag("--build", ca.build, "build a dense table and save it to the cache");
  count->add_option("--cache-dir", ca.cache_dir, "cache directory (default: TREELAB_CACHE or ./treelab-cache)");
  count->add_option("--max-n", ca.max_n, "raise the size ceiling");

  LawArgs la;
  CLI::App* law = app.add_subcommand("law", "exact height or root-degree law as CSV");
  law->add_option("--kind", la.kind, "height | root-degree")->required();
  law->add_option("--n", la.n, "number of nodes")->required();
  law->add_option("--mu", la.mu, "tilt strength (>= 0)");
  law->add_option("--backend", la.backend, "exact | log")->default_str("log");
  law->add_option("--r-max", la.r_max, "truncation for the root-degree law");
  law->add_option("--max-n", la.max_n, "raise the size ceiling");
  law->add_option("--out", la.out_path, "write CSV here instead of standard output");

  ZfunArgs za;
  CLI::App* zfun = app.add_subcommand("zfun", "partition function, its height-bound transform, and regime closed forms");
  zfun->add_option("--n", za.n, "number of nodes")->required();
  zfun->add_option("--mu", za.mu, "tilt strength (>= 0)");
  zfun->add_option("--backend", za.backend, "exact | log")->default_str("log");
  zfun->add_option("--max-n", za.max_n, "raise the size ceiling");

  SampleArgs sa;
  CLI::App* sample = app.add_subcommand("sample", "draw random trees (uniform, height-bounded, exact-height, or tilted)");
  sample->add_option("--n", sa.n, "number of nodes")->required();
  sample->add_option("--mu", sa.mu, "tilt strength; tilted law e^{-mu height}");
  sample->add_option("--m", sa.m, "uniform over trees of height < m");
  sample->add_option("--height", sa.height, "uniform over trees of exactly this height");
  sample->add_option("--count", sa.count, "number of trees");
  sample->add_option("--seed", sa.seed, "RNG seed");
  sample->add_option("--format", sa.format, "parens | contour")->default_str("parens");
  sample->add_option("--backend", sa.backend, "exact | log")->default_str("log");
  sample->add_option("--max-n", sa.max_n, "raise the size ceiling");

  AsymArgs aa;
  CLI::App* asym = app.add_subcommand("asym", "scalar predictions for one (n, mu)");
  asym->add_option("--n", aa.n, "number of nodes")->required();
  asym->add_option("--mu", aa.mu, "tilt strength (> 0)")->required();
  asym->add_option("--x", aa.x, "also print the large-deviation rate at x");
  asym->add_option("--ball", aa.ball, "also print the local limit mass of this tree (parens)");

  ExpArgs ea;
  CLI::App* exp = app.add_subcommand("exp", "run a verification experiment");
  exp->add_option("name", ea.name, "experiment name (see --list)");
  exp->add_flag("--list", ea.list, "print the experiment catalogue");
  exp->add_option("--config", ea.config_path, "JSON file with parameter overrides");
  exp->add_option("--out", ea.out_path, "write the report here (.json for JSON, else CSV)");
  exp->add_option("--seed", ea.seed, "RNG seed");
  exp->add_option("--workers", ea.workers, "thread count (0 = hardware); results identical for any value");
  exp->add_option("--n", ea.n, "shorthand for the n override");
  exp->add_option("--samples", ea.samples, "shorthand for the samples override");

  CacheArgs ka;
  CLI::App* cache = app.add_subcommand("cache", "manage saved count tables");
  cache->add_option("action", ka.action, "list | verify | purge")->required();
  cache->add_option("--dir", ka.dir, "cache directory (default: TREELAB_CACHE or ./treelab-cache)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* deepest = &app;
    while (!deepest->get_subcommands().empty())
      deepest = deepest->get_subcommands().front();
    out << deepest->help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (count->parsed()) return run_count(ca, out);
    if (law->parsed()) return run_law(la, out);
    if (zfun->parsed()) return run_zfun(za, out);
    if (sample->parsed()) return run_sample(sa, out);
    if (asym->parsed()) return run_asym(aa, out);
    if (exp->parsed()) return run_exp(ea, out);
    if (cache->parsed()) return run_cache(ka, out, err);
    out << app.help();
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace treelab
