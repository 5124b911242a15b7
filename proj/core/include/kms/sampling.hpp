#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "kms/scenario.hpp"
#include "kms/subinvariance.hpp"
#include "kms/toeplitz_algebra.hpp"
#include "kms/torus_measure.hpp"

namespace kms {

/// Bounds for random words: p, q in {0..max_p}^k, n in {-max_n..max_n}^d.
struct WordBounds {
  int max_p = 3;
  int max_n = 3;
};

Word random_word(std::mt19937_64& rng, Dimensions dims, int level = 1, WordBounds bounds = {});

/// A combination of `terms` random words with coefficients in the unit square.
AlgebraElement random_element(std::mt19937_64& rng, Dimensions dims, int terms, int level = 1,
                              WordBounds bounds = {});

/// Probability measure with `atoms` uniformly placed atoms and positive weights.
TorusMeasure random_probability_measure(std::mt19937_64& rng, int dim, int atoms);

/// theta entries in [0, 2), r in [0.25, 2), beta in [0.5, 2).
BlockParams random_block_params(std::mt19937_64& rng, Dimensions dims);

/// A d = 2, k = 2 scenario with D_m = diag(3, 2) and E_m = diag(2, 3).
Scenario example_scenario_2x2(double beta = 1.0, int depth = 3);

}  // namespace kms
