#pragma once

#include <random>

#include "qsobp/simplex.hpp"

namespace qsobp {

/// Uniform point of S^{dim-1} (normalized exponential draws).
Distribution random_distribution(std::size_t dim, std::mt19937_64& rng);

PopulationState random_state(std::size_t n, std::size_t nu, std::mt19937_64& rng);

/// Uniform draw from the open interval (lo, hi).
double uniform_open(double lo, double hi, std::mt19937_64& rng);

}  // namespace qsobp
