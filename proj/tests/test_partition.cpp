// Tilted tree laws against the enumeration oracle: partition function,
// height and root-degree marginals, tail curve, and the rescaled tail sum.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <utility>
#include <vector>

#include "treelab/counting.hpp"
#include "treelab/partition.hpp"
#include "treelab/plane_tree.hpp"

using namespace treelab;

namespace {

struct OracleLaw {
  double z = 0.0;
  std::vector<double> height_pmf;  // h = 0..n-1
  std::vector<double> degree_pmf;  // r = 0..n-1
};

OracleLaw oracle(int n, double mu) {
  OracleLaw o;
  o.height_pmf.assign(static_cast<size_t>(n), 0.0);
  o.degree_pmf.assign(static_cast<size_t>(n), 0.0);
  for (const PlaneTree& t : enumerate_trees(n)) {
    TreeStats st = stats(t);
    double w = std::exp(-mu * st.height);
    o.z += w;
    o.height_pmf[static_cast<size_t>(st.height)] += w;
    o.degree_pmf[static_cast<size_t>(st.root_degree)] += w;
  }
  for (double& p : o.height_pmf) p /= o.z;
  for (double& p : o.degree_pmf) p /= o.z;
  return o;
}

}  // namespace

TEST_CASE("laws match the enumeration oracle on both backends") {
  const int cap = 8;
  CountTable exact = build_counts(cap, cap, Backend::exact);
  CountTable logt = build_counts(cap, cap, Backend::log_approx);
  for (int n = 2; n <= cap; ++n)
    for (double mu : {0.0, 0.5, 1.0, 3.0}) {
      OracleLaw want = oracle(n, mu);
      for (const CountTable* table : {&exact, &logt}) {
        double tol = table->backend() == Backend::exact ? 1e-12 : 1e-10;
        LogReal z = partition_function(n, mu, *table);
        CHECK(std::fabs(z.to_double() / want.z - 1.0) < tol);
        HeightLaw hl = height_law(n, mu, *table);
        REQUIRE(hl.pmf.size() == static_cast<size_t>(n));
        for (int h = 0; h < n; ++h) {
          double w = want.height_pmf[static_cast<size_t>(h)];
          if (w == 0.0)
            CHECK(hl.p(h) == 0.0);
          else
            CHECK(std::fabs(hl.p(h) / w - 1.0) < tol);
        }
        RootDegreeLaw rl = root_degree_law(n, mu, *table, n - 1);
        CHECK(rl.p(0) == 0.0);
        for (int r = 1; r < n; ++r) {
          double w = want.degree_pmf[static_cast<size_t>(r)];
          if (w == 0.0)
            CHECK(rl.p(r) == 0.0);
          else
            CHECK(std::fabs(rl.p(r) / w - 1.0) < tol);
        }
        CHECK(std::fabs(rl.mass() - 1.0) < 1e-12);
      }
    }
}

TEST_CASE("oracle moments transfer to the law accessors") {
  CountTable t = build_counts(8, 8, Backend::exact);
  for (double mu : {0.0, 0.7}) {
    OracleLaw want = oracle(8, mu);
    double mean = 0.0, var = 0.0;
    for (int h = 0; h < 8; ++h) mean += h * want.height_pmf[static_cast<size_t>(h)];
    for (int h = 0; h < 8; ++h) {
      double d = h - mean;
      var += d * d * want.height_pmf[static_cast<size_t>(h)];
    }
    HeightLaw hl = height_law(8, mu, t);
    CHECK(hl.mean() == doctest::Approx(mean).epsilon(1e-12));
    CHECK(hl.variance() == doctest::Approx(var).epsilon(1e-12));
    double dmean = 0.0, dvar = 0.0;
    for (int r = 0; r < 8; ++r) dmean += r * want.degree_pmf[static_cast<size_t>(r)];
    for (int r = 0; r < 8; ++r) {
      double d = r - dmean;
      dvar += d * d * want.degree_pmf[static_cast<size_t>(r)];
    }
    RootDegreeLaw rl = root_degree_law(8, mu, t, 7);
    CHECK(rl.mean() == doctest::Approx(dmean).epsilon(1e-12));
    CHECK(rl.variance() == doctest::Approx(dvar).epsilon(1e-12));
  }
}

TEST_CASE("untilted partition function is the Catalan number") {
  CountTable t = build_counts(30, 30, Backend::exact);
  for (int n : {2, 5, 12, 30}) {
    LogReal z = partition_function(n, 0.0, t);
    CHECK(std::fabs(z.log() - logreal_from_mpz(catalan(n - 1)).log()) < 1e-12);
  }
  CHECK_THROWS(partition_function(1, 0.5, t));
}

TEST_CASE("height pmf sums to one, small and large") {
  CountTable small = build_counts(40, 40, Backend::exact);
  HeightLaw hl = height_law(40, 1.0, small);
  double total = 0.0;
  for (int h = 0; h < 40; ++h) total += hl.p(h);
  CHECK(std::fabs(total - 1.0) < 1e-12);
  CHECK(hl.cdf(39) == doctest::Approx(1.0).epsilon(1e-12));

  CountTable big = CountTable::closed_form(500, 500, Backend::log_approx);
  for (double mu : {0.0, 0.2}) {
    HeightLaw large = height_law(500, mu, big);
    double sum = 0.0;
    for (int h = 0; h < 500; ++h) sum += large.p(h);
    CHECK(std::fabs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("stronger tilt pushes height stochastically lower") {
  CountTable t = build_counts(40, 40, Backend::exact);
  const double mus[] = {0.0, 0.5, 1.0, 2.0};
  for (size_t i = 0; i + 1 < 4; ++i) {
    HeightLaw lo = height_law(40, mus[i], t);
    HeightLaw hi = height_law(40, mus[i + 1], t);
    for (int h = 0; h < 40; ++h) CHECK(hi.cdf(h) >= lo.cdf(h) - 1e-12);
    CHECK(hi.mean() < lo.mean());
  }
}

TEST_CASE("support window holds the requested mass and is minimal") {
  CountTable t = build_counts(60, 60, Backend::exact);
  HeightLaw hl = height_law(60, 0.5, t);
  auto [lo, hi] = hl.support_window(1e-6);
  REQUIRE(0 <= lo);
  REQUIRE(lo <= hi);
  REQUIRE(hi < 60);
  auto mass = [&](int a, int b) {
    double s = 0.0;
    for (int h = a; h <= b; ++h) s += hl.p(h);
    return s;
  };
  CHECK(mass(lo, hi) >= 1.0 - 1e-6);
  if (lo < hi) {
    CHECK(mass(lo + 1, hi) < 1.0 - 1e-6);
    CHECK(mass(lo, hi - 1) < 1.0 - 1e-6);
  }
}

TEST_CASE("rescaled tail sum reassembles the partition function") {
  const int n = 10;
  const double mu = 0.7;
  CountTable t = build_counts(n, n, Backend::exact);
  LogReal z = partition_function(n, mu, t);
  LogReal w = w_sum(n, mu, t);
  LogReal main_term = LogReal::from_double(std::expm1(mu)) *
                      LogReal::exp_of(dd(mu)) *
                      LogReal::exp_of(dd_mul(kDdLn2, 2.0 * n)) * w;
  LogReal star_term = logreal_from_mpz(catalan(n - 1)) *
                      LogReal::exp_of(dd(-mu * (n - 1)));
  // both pieces carry real mass at this scale, so the identity is a genuine
  // two-term check
  CHECK(main_term.to_double() / z.to_double() > 1e-3);
  CHECK(star_term.to_double() / z.to_double() > 1e-3);
  LogReal sum = main_term + star_term;
  CHECK(std::fabs(sum.log() - z.log()) < 1e-12);
  CHECK_THROWS(w_sum(2, mu, t));
}

TEST_CASE("root degree law contracts") {
  CountTable t = build_counts(10, 10, Backend::exact);
  RootDegreeLaw rl = root_degree_law(10, 0.4, t, 9);
  // the only tree with root degree n-1 is the star, at height 1
  CHECK(rl.p(9) == doctest::Approx(std::exp(-0.4) / partition_function(10, 0.4, t).to_double())
                       .epsilon(1e-12));
  RootDegreeLaw part = root_degree_law(10, 0.4, t, 4);
  CHECK(part.mass() < 1.0);
  for (int r = 1; r <= 4; ++r) CHECK(part.p(r) == doctest::Approx(rl.p(r)).epsilon(1e-12));
  CHECK_THROWS(root_degree_law(10, 0.4, t, 0));
  CHECK_THROWS(root_degree_law(10, 0.4, t, 10));
}

TEST_CASE("tail curve values") {
  CountTable t = CountTable::closed_form(200, 200, Backend::log_approx);
  std::vector<double> grid = {0.8, 1.2, 20.0};
  auto curve = ldp_curve(200, 1.0, grid, t);
  REQUIRE(curve.size() == 3);
  CHECK(curve[0].first == 0.8);
  CHECK(curve[1].first == 1.2);
  CHECK(curve[0].second > 0.0);
  CHECK(std::isfinite(curve[0].second));
  CHECK(curve[1].second > 0.0);
  CHECK(std::isfinite(curve[1].second));
  // x = 20 asks for heights past n-1: empty tail
  CHECK(std::isinf(curve[2].second));
}

TEST_CASE("frozen large-scale partition value") {
  CountTable t = CountTable::closed_form(2000, 2000, Backend::log_approx);
  LogReal z = partition_function(2000, 2.0, t);
  CHECK(z.log() == doctest::Approx(2689.384929).epsilon(1e-6));
}
