// JSON-lines cache for dense count tables.
//
// File layout: a header line, one line per stored cell, and a hash trailer.
//   {"format":1,"kind":"treelab-count-table","n_max":..,"m_max":..,
//    "backend":"exact"|"log","source":"dp"}
//   {"H":"<decimal>","m":..,"n":..}            exact H cell
//   {"E":"<decimal>","h":..,"n":..}            exact E cell
//   {"log10":"<str>","m":..,"n":..,"sign":..}  log-backend H cell
//   {"log10":"<str>","h":..,"n":..,"sign":..}  log-backend E cell
//   {"fnv64":"<hex16>","kind":"treelab-hash"}
// The trailer hash is FNV-1a over every preceding byte, newline included.
// Only dense (dp-built) tables are cached; lazy closed-form tables recompute
// cells faster than a disk round-trip would.

#include "treelab/counting.hpp"

#include "json.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace treelab {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kCacheFormat = 1;
constexpr const char* kTableKind = "treelab-count-table";
constexpr const char* kHashKind = "treelab-hash";

uint64_t fnv1a(uint64_t h, const std::string& line) {
  for (unsigned char c : line) {
    h ^= c;
    h *= 1099511628211ull;
  }
  h ^= static_cast<unsigned char>('\n');
  h *= 1099511628211ull;
  return h;
}
constexpr uint64_t kFnvInit = 14695981039346656037ull;

std::string hex16(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// dd round-trips through ~40 decimal digits
std::string dd_to_string(dd v) {
  mpfr_t t;
  mpfr_init2(t, 160);
  mpfr_set_d(t, v.hi, MPFR_RNDN);
  mpfr_add_d(t, t, v.lo, MPFR_RNDN);
  char* s = nullptr;
  mpfr_asprintf(&s, "%.40Re", t);
  std::string out = s;
  mpfr_free_str(s);
  mpfr_clear(t);
  return out;
}

dd dd_from_string(const std::string& s) {
  mpfr_t t;
  mpfr_init2(t, 160);
  if (mpfr_set_str(t, s.c_str(), 10, MPFR_RNDN) != 0) {
    mpfr_clear(t);
    throw std::runtime_error("cache: bad decimal value '" + s + "'");
  }
  double hi = mpfr_get_d(t, MPFR_RNDN);
  mpfr_sub_d(t, t, hi, MPFR_RNDN);
  double lo = mpfr_get_d(t, MPFR_RNDN);
  mpfr_clear(t);
  return dd{hi, lo};
}

json log_record(const LogReal& v) {
  json j;
  j["sign"] = v.sign();
  j["log10"] = v.is_zero() ? std::string("0") : dd_to_string(v.log10_dd());
  return j;
}

LogReal log_from_record(const json& j) {
  int sgn = j.at("sign").get<int>();
  if (sgn == 0) return LogReal::zero();
  return LogReal::exp10_of(dd_from_string(j.at("log10").get<std::string>()), sgn);
}

}  // namespace

std::string cache_file_name(int n_max, int m_max, Backend backend) {
  return "treelab-counts-n" + std::to_string(n_max) + "-m" + std::to_string(m_max) +
         (backend == Backend::exact ? "-exact" : "-log") + "-v" +
         std::to_string(kCacheFormat) + ".jsonl";
}

std::string default_cache_dir() {
  if (const char* env = std::getenv("TREELAB_CACHE"); env && *env) return env;
  return "treelab-cache";
}

void save_table(const CountTable& table, const std::string& path) {
  // probing a lazy table for all cells would force-certify everything; the
  // id() tag distinguishes the sources
  if (table.id().rfind("dp-", 0) != 0)
    throw std::invalid_argument("save_table: only dense dp tables are cached");

  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cache: cannot write " + path);

  const bool exact = table.backend() == Backend::exact;
  json header;
  header["format"] = kCacheFormat;
  header["kind"] = kTableKind;
  header["n_max"] = table.n_max();
  header["m_max"] = table.m_max();
  header["backend"] = exact ? "exact" : "log";
  header["source"] = "dp";

  uint64_t h = kFnvInit;
  auto emit = [&](const json& j) {
    std::string line = j.dump();
    h = fnv1a(h, line);
    out << line << '\n';
  };
  emit(header);

  for (int n = 1; n <= table.n_max(); ++n) {
    int cap = std::min(n, table.m_max());
    for (int m = 0; m <= cap; ++m) {
      json j;
      if (exact) {
        j["H"] = table.H_int(n, m).get_str();
      } else {
        j = log_record(table.H(n, m));
      }
      j["n"] = n;
      j["m"] = m;
      emit(j);
    }
    int ecap = std::min(n - 1, table.m_max() - 1);
    for (int hh = 0; hh <= ecap; ++hh) {
      json j;
      if (exact) {
        j["E"] = table.E_int(n, hh).get_str();
      } else {
        j = log_record(table.E(n, hh));
      }
      j["n"] = n;
      j["h"] = hh;
      emit(j);
    }
  }

  json trailer;
  trailer["kind"] = kHashKind;
  trailer["fnv64"] = hex16(h);
  out << trailer.dump() << '\n';
  if (!out) throw std::runtime_error("cache: write failed for " + path);
}

CountTable load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cache: cannot read " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("cache: empty file " + path);
  json header = json::parse(line);
  if (header.value("kind", "") != kTableKind)
    throw std::runtime_error("cache: not a count table: " + path);
  if (header.value("format", 0) != kCacheFormat)
    throw std::runtime_error("cache: unsupported format in " + path);
  int n_max = header.at("n_max").get<int>();
  int m_max = header.at("m_max").get<int>();
  bool exact = header.at("backend").get<std::string>() == "exact";
  uint64_t h = fnv1a(kFnvInit, line);

  std::vector<std::vector<mpz_class>> hz, ez;
  std::vector<std::vector<LogReal>> hl, el;
  auto resize_all = [&](auto& hcells, auto& ecells) {
    hcells.resize(static_cast<size_t>(n_max) + 1);
    ecells.resize(static_cast<size_t>(n_max) + 1);
    for (int n = 1; n <= n_max; ++n) {
      hcells[static_cast<size_t>(n)].resize(static_cast<size_t>(std::min(n, m_max)) + 1);
      ecells[static_cast<size_t>(n)].resize(static_cast<size_t>(std::min(n - 1, m_max - 1)) + 1);
    }
  };
  if (exact)
    resize_all(hz, ez);
  else
    resize_all(hl, el);

  long expected = 0;
  for (int n = 1; n <= n_max; ++n)
    expected += (std::min(n, m_max) + 1) + (std::min(n - 1, m_max - 1) + 1);

  long seen = 0;
  bool closed = false;
  while (std::getline(in, line)) {
    json j = json::parse(line);
    if (j.value("kind", "") == kHashKind) {
      if (j.at("fnv64").get<std::string>() != hex16(h))
        throw std::runtime_error("cache: hash mismatch in " + path);
      closed = true;
      break;
    }
    h = fnv1a(h, line);
    int n = j.at("n").get<int>();
    if (n < 1 || n > n_max) throw std::runtime_error("cache: cell out of range in " + path);
    if (j.contains("m")) {
      int m = j.at("m").get<int>();
      if (m < 0 || m > std::min(n, m_max))
        throw std::runtime_error("cache: cell out of range in " + path);
      if (exact)
        hz[static_cast<size_t>(n)][static_cast<size_t>(m)] = mpz_class(j.at("H").get<std::string>());
      else
        hl[static_cast<size_t>(n)][static_cast<size_t>(m)] = log_from_record(j);
    } else {
      int hh = j.at("h").get<int>();
      if (hh < 0 || hh > std::min(n - 1, m_max - 1))
        throw std::runtime_error("cache: cell out of range in " + path);
      if (exact)
        ez[static_cast<size_t>(n)][static_cast<size_t>(hh)] = mpz_class(j.at("E").get<std::string>());
      else
        el[static_cast<size_t>(n)][static_cast<size_t>(hh)] = log_from_record(j);
    }
    ++seen;
  }
  if (!closed) throw std::runtime_error("cache: missing hash trailer in " + path);
  if (seen != expected)
    throw std::runtime_error("cache: expected " + std::to_string(expected) + " cells, found " +
                             std::to_string(seen) + " in " + path);

  return CountTable::from_cells(n_max, m_max, exact ? Backend::exact : Backend::log_approx,
                                std::move(hz), std::move(ez), std::move(hl), std::move(el));
}

CacheEntryInfo inspect_cache_file(const std::string& path) {
  CacheEntryInfo info;
  info.path = path;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cache: cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("cache: empty file " + path);
  json header = json::parse(line);
  if (header.value("kind", "") != kTableKind)
    throw std::runtime_error("cache: not a count table: " + path);
  info.format = header.value("format", 0);
  info.n_max = header.value("n_max", 0);
  info.m_max = header.value("m_max", 0);
  info.backend = header.value("backend", "");
  info.source = header.value("source", "");
  uint64_t h = fnv1a(kFnvInit, line);
  while (std::getline(in, line)) {
    json j = json::parse(line);
    if (j.value("kind", "") == kHashKind) {
      info.hash_ok = j.at("fnv64").get<std::string>() == hex16(h);
      return info;
    }
    h = fnv1a(h, line);
    ++info.records;
  }
  info.hash_ok = false;  // no trailer
  return info;
}

std::vector<CacheEntryInfo> list_cache(const std::string& dir) {
  std::vector<CacheEntryInfo> out;
  fs::path d(dir);
  if (!fs::exists(d)) return out;
  for (const auto& entry : fs::directory_iterator(d)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".jsonl") continue;
    try {
      out.push_back(inspect_cache_file(entry.path().string()));
    } catch (const std::exception&) {
      CacheEntryInfo bad;
      bad.path = entry.path().string();
      bad.hash_ok = false;
      bad.records = -1;
      out.push_back(bad);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const CacheEntryInfo& a, const CacheEntryInfo& b) { return a.path < b.path; });
  return out;
}

int purge_cache(const std::string& dir) {
  fs::path d(dir);
  if (!fs::exists(d)) return 0;
  int removed = 0;
  std::vector<fs::path> victims;
  for (const auto& entry : fs::directory_iterator(d)) {
    if (!entry.is_regular_file()) continue;
    std::string name = entry.path().filename().string();
    if (name.rfind("treelab-counts-", 0) == 0 && entry.path().extension() == ".jsonl")
      victims.push_back(entry.path());
  }
  for (const auto& v : victims) {
    fs::remove(v);
    ++removed;
  }
  return removed;
}

}  // namespace treelab
