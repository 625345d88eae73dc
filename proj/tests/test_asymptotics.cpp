// Closed-form prediction kit: the variational function and its minimizer,
// the small-x expansions, regime classification, partition closed forms,
// the two-point and star limits, the rate function, and ball masses.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "treelab/asymptotics.hpp"
#include "treelab/counting.hpp"
#include "treelab/partition.hpp"
#include "treelab/plane_tree.hpp"

using namespace treelab;

namespace {
constexpr double kPi = 3.14159265358979323846;
// tilt-per-node value whose minimizer sits exactly at t = 3
const double kXAtT3 = (2.0 * kPi / 9.0) * std::tan(kPi / 3.0);
}  // namespace

TEST_CASE("derivative matches a finite difference") {
  for (double x : {0.01, 0.5, 2.0})
    for (double t : {2.5, 3.7, 10.0}) {
      const double eps = 1e-6;
      double fd = (lambda(x, t + eps) - lambda(x, t - eps)) / (2.0 * eps);
      CHECK(lambda_prime(x, t) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("minimizer is stationary and locally minimal") {
  for (double x : {1e-6, 1e-3, 0.1, 1.0, 5.0}) {
    double t = t_min(x);
    CHECK(t > 2.0);
    CHECK(std::fabs(lambda_prime(x, t)) < 1e-12 * x);
    double at = lambda(x, t);
    CHECK(lambda(x, t * (1.0 + 1e-4)) > at);
    CHECK(lambda(x, t * (1.0 - 1e-4)) > at);
  }
  CHECK(t_min(kXAtT3) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("small-x expansion of the minimizer") {
  CHECK_THROWS(lambda_expansion(0.0));
  CHECK_THROWS(lambda_expansion(-1.0));
  CHECK_THROWS(lambda_expansion(0.11));
  lambda_expansion(0.1);   // boundary is inside
  lambda_expansion(1e-9);  // and so is the deep tail

  const double lead_coeff_theory = std::pow(kPi / 2.0, 2.0 / 3.0) / 9.0;  // 0.150566...
  for (double x : {1e-4, 1e-5, 1e-6}) {
    LambdaExpansion ex = lambda_expansion(x);
    double t = t_min(x);
    double x23 = std::pow(x, 2.0 / 3.0);

    // two-term minimizer: relative error far inside 0.2 x^{2/3}
    CHECK(std::fabs(ex.t_approx / t - 1.0) < 2e-4 * x23);

    // correction to the leading cube-root term carries the predicted
    // coefficient (1/9)(pi/2)^{2/3} up to its own higher-order drift
    double lead = std::cbrt(2.0 * kPi * kPi / x);
    double coeff = (t - lead) / (t * x23);
    CHECK(std::fabs(coeff / lead_coeff_theory - 1.0) < 0.005);

    // minimum value: frozen second-order residual and absolute closeness
    double resid = (lambda(x, t) - ex.min_approx) / (x * x);
    CHECK(resid > 0.0182);
    CHECK(resid < 0.0183);
    CHECK(std::fabs(lambda(x, t) - ex.min_approx) < 1e-7);

    // curvature coefficient matches a symmetric second difference
    const double eps = 3e-3;
    double curv = (lambda(x, t * (1 + eps)) + lambda(x, t * (1 - eps)) - 2.0 * lambda(x, t)) /
                  (2.0 * eps * eps);
    CHECK(curv == doctest::Approx(ex.curvature_coeff).epsilon(0.02));
  }
}

TEST_CASE("regime classification windows") {
  CHECK(classify_regime(400, 0.5) == Regime::brownian);  // mu sqrt(n) = 10 exactly
  CHECK(classify_regime(10000, 0.05) == Regime::brownian);
  CHECK(classify_regime(10000, 1.0) == Regime::intermediate_gaussian);
  CHECK(classify_regime(10000, 3.0) == Regime::intermediate_discrete);
  CHECK(classify_regime(100, 10.0) == Regime::extreme);  // mu/n = 0.1 exactly
  CHECK(classify_regime(100, 50.0) == Regime::extreme);
  CHECK_THROWS(classify_regime(0, 1.0));
  CHECK_THROWS(classify_regime(10, -0.5));

  CHECK(regime_name(Regime::brownian) == "brownian");
  CHECK(regime_name(Regime::intermediate_gaussian) == "intermediate-gaussian");
  CHECK(regime_name(Regime::intermediate_discrete) == "intermediate-discrete");
  CHECK(regime_name(Regime::extreme) == "extreme");
}

TEST_CASE("partition closed forms appear exactly where their windows allow") {
  // boundary mu sqrt(n) = 10 is inside the gaussian window even though the
  // classifier calls the point brownian
  auto rows = partition_asymptotic(400, 0.5);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].regime == Regime::intermediate_gaussian);
  CountTable t = CountTable::closed_form(400, 400, Backend::log_approx);
  LogReal z = partition_function(400, 0.5, t);
  CHECK(std::fabs(rows[0].value.log() - z.log()) < 0.02);

  CHECK(partition_asymptotic(400, 0.1).empty());  // brownian: no closed form

  std::set<Regime> seen;
  for (const RegimeValue& rv : partition_asymptotic(2000, std::pow(2000.0, 0.4))) seen.insert(rv.regime);
  CHECK(seen == std::set<Regime>{Regime::intermediate_gaussian, Regime::intermediate_discrete,
                                 Regime::extreme});

  CHECK_THROWS(partition_asymptotic(2, 1.0));
  CHECK_THROWS(partition_asymptotic(400, 0.0));
}

TEST_CASE("discrete limit pmf") {
  DiscreteCltPmf base = discrete_clt_pmf(1.0, 0.3);
  double total = 0.0;
  for (double p : base.pmf) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(base.c_norm > 0.0);
  // peak sits at the integer nearest delta
  for (int k = base.k_min; k < base.k_min + static_cast<int>(base.pmf.size()); ++k)
    CHECK(base.p(0) >= base.p(k));
  CHECK(discrete_clt_pmf(1.0, 0.8).p(1) >= discrete_clt_pmf(1.0, 0.8).p(0));
  // outside the stored window the pmf reads zero
  CHECK(base.p(base.k_min - 1) == 0.0);
  CHECK(base.p(base.k_min + static_cast<int>(base.pmf.size())) == 0.0);

  DiscreteCltPmf wide = discrete_clt_pmf(1.0, 0.3, 30);
  CHECK(wide.pmf.size() == 61);  // window widened to at least +-30 around the peak
  CHECK(wide.pmf.size() >= base.pmf.size() + 8);
  for (int k : {-1, 0, 1}) CHECK(wide.p(k) == doctest::Approx(base.p(k)).epsilon(1e-12));
}

TEST_CASE("crossover offset vanishes at the tuned tilt") {
  const double mu = 300.0 * std::log(2.0);
  CHECK(m_x(300, mu) == 3);
  CHECK(std::fabs(delta_n(300, mu)) < 1e-9);
  // above the t = 3 collapse point the offset is mu itself
  CHECK(delta_n(4, 4.0 * 2.0) == doctest::Approx(8.0));
}

TEST_CASE("two-point and star limit parameters") {
  // at c = log 2 the competing weights are A = 3 tan^2(pi/4) = 3 and
  // B = 4 tan^2(pi/3) = 12, so the balanced point gives 3/15
  CHECK(bernoulli_param(std::log(2.0), 0.0) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(bernoulli_param(0.5, 1e9) == 0.0);
  CHECK(bernoulli_param(0.5, -1e9) == 1.0);
  CHECK_THROWS(bernoulli_param(-0.1, 0.0));
  // weak-tilt branch degenerates to the symmetric two-point law
  for (double d : {-1.0, 0.0, 1.5}) {
    double sym = std::exp(-d) / (1.0 + std::exp(-d));
    CHECK(std::fabs(bernoulli_param(1e-9, d) - sym) < 1e-3);
  }

  CHECK(star_probability(0.0) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(star_probability(50.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(star_probability(-50.0) < 1e-20);
  // at the m = 3 crossover the star and the height-2 class split all mass
  for (double d : {-2.0, 0.0, 3.0})
    CHECK(star_probability(d) + bernoulli_param(std::log(2.0), d) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rate function") {
  CHECK(ldp_rate(1.0) == 0.0);
  CHECK(ldp_rate(1.3) == doctest::Approx(0.25906270165105655).epsilon(1e-12));
  CHECK(std::isinf(ldp_rate(0.0)));
  CHECK(std::isinf(ldp_rate(-2.0)));
  CHECK(ldp_rate(0.5) > 0.0);
  CHECK(ldp_rate(2.0) > 0.0);
}

TEST_CASE("ball mass limits") {
  CHECK(kesten_ball_mass(single_node()) == 1.0);
  CHECK(kesten_ball_mass(from_parens("(())")) == 0.25);
  CHECK(kesten_ball_mass(from_parens("(()())")) == 0.25);
  CHECK(kesten_ball_mass(from_parens("((()))")) == 0.0625);
}

TEST_CASE("prediction set is internally consistent") {
  PredictionSet ps = height_predictions(2000, 0.3);
  CHECK(ps.n == 2000);
  CHECK(ps.mu == 0.3);
  CHECK(ps.x == doctest::Approx(0.3 / 2000.0).epsilon(1e-15));
  CHECK(ps.t_x == doctest::Approx(t_min(ps.x)).epsilon(1e-15));
  CHECK(ps.regime == classify_regime(2000, 0.3));
  CHECK(ps.regime == Regime::intermediate_gaussian);
  CHECK(ps.concentration_applies);
  CHECK(ps.lln_height == doctest::Approx(lln_height(2000, 0.3)).epsilon(1e-15));
  CHECK(ps.lln_height == doctest::Approx(std::cbrt(2.0 * kPi * kPi * 2000.0 / 0.3)).epsilon(1e-14));
  CHECK(ps.clt_sd == doctest::Approx(clt_sd(2000, 0.3)).epsilon(1e-15));
  CHECK(ps.m_x == static_cast<int>(std::floor(ps.t_x)));
  CHECK(ps.delta_n == doctest::Approx(delta_n(2000, 0.3)).epsilon(1e-15));
  CHECK(ps.bernoulli_p == doctest::Approx(bernoulli_param(ps.x, ps.delta_n)).epsilon(1e-15));
  CHECK(ps.width_scale == doctest::Approx(std::cbrt(0.3 * 2000.0 * 2000.0)).epsilon(1e-14));

  PredictionSet weak = height_predictions(400, 0.1);
  CHECK(weak.regime == Regime::brownian);
  CHECK(!weak.concentration_applies);
  // width never exceeds the node count
  PredictionSet strong = height_predictions(50, 60.0);
  CHECK(strong.width_scale == 50.0);
  CHECK_THROWS(height_predictions(1, 0.5));
  CHECK_THROWS(height_predictions(100, 0.0));
}