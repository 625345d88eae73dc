// Exact samplers for uniform, height-bounded, and height-tilted plane trees.
//
// All samplers draw from the stated law exactly, up to two quantified
// approximations that are documented where they occur:
//   * real-valued stages (inverse-CDF over exp(-mu h) weights, log-backend
//     descent) compare 106-bit uniforms against compensated cumulative sums
//     of total-rescaled weights, so each decision carries relative error
//     ~1e-16 (budget 1e-15);
//   * on the log-approximate count backend the descent weights themselves
//     are accurate to ~1e-9 relative, giving total variation distance at
//     most ~n * 1e-9 from the target law.
// On the exact backend every integer-weighted decision uses GMP integers
// and rejection-sampled uniform integers, with no rounding anywhere.
//
// The height-exact sampler asserts the height of every tree it returns and
// throws std::logic_error on a mismatch rather than resampling.

#pragma once

#include <gmpxx.h>

#include <vector>

#include "treelab/counting.hpp"
#include "treelab/partition.hpp"
#include "treelab/plane_tree.hpp"
#include "treelab/rng.hpp"

namespace treelab {

// Uniform integer in [0, bound) via bit-length rejection; bound >= 1.
mpz_class mpz_uniform_below(const mpz_class& bound, RngStream& rng);

// Uniform over the C_{n-1} plane trees on n nodes (cycle-lemma route:
// uniform bridge, rotate to an excursion, read off the tree).
PlaneTree sample_uniform_tree(int n, RngStream& rng);

// Uniform over n-node trees of height < m.  Requires H(n, m) > 0, i.e.
// m >= 2 for n >= 2, and a table covering the cells it visits.
PlaneTree sample_uniform_bounded(int n, int m, const CountTable& table,
                                 RngStream& rng);

// Uniform over n-node trees of height exactly h (E(n, h) > 0 required,
// i.e. 1 <= h <= n-1 for n >= 2, or h = 0 for n = 1).
PlaneTree sample_uniform_exact_height(int n, int h, const CountTable& table,
                                      RngStream& rng);

// Height-tilted law P(T) = exp(-mu height(T)) / Z(n, mu), sampled in two
// stages: the height from its exact marginal, then a uniform tree of that
// exact height.
PlaneTree sample_biased_tree(int n, double mu, const CountTable& table,
                             RngStream& rng);

// First stage of sample_biased_tree, exposed for tests: inverse-CDF draw
// from a height law using a 106-bit uniform.
int sample_height(const HeightLaw& law, RngStream& rng);

}  // namespace treelab
