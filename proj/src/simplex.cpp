#include "qsobp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qsobp/error.hpp"

namespace qsobp {

void Tolerance::validate() const {
  if (!(abs_eps > 0.0) || !(iter_eps > 0.0) || max_iters == 0) {
    throw Error(ErrorCode::InvalidParameter, "tolerance fields must be strictly positive");
  }
}

Distribution Distribution::make(std::span<const double> values) {
  if (values.empty()) {
    throw Error(ErrorCode::InvalidParameter, "distribution needs at least one entry");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::InvalidParameter, "non-finite entry at index " + std::to_string(i));
    }
    if (v < -kNegativeTol) {
      throw Error(ErrorCode::NegativeEntry,
                  "entry " + std::to_string(i) + " = " + std::to_string(v));
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kNormalizationTol) {
    throw Error(ErrorCode::NotNormalized, "entries sum to " + std::to_string(sum));
  }
  return Distribution(std::vector<double>(values.begin(), values.end()));
}

Distribution Distribution::normalized(std::span<const double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "weights must have positive total");
  }
  std::vector<double> p(weights.begin(), weights.end());
  for (double& v : p) v /= total;
  return make(p);
}

Distribution Distribution::vertex(std::size_t dim, std::size_t index) {
  if (index >= dim) {
    throw Error(ErrorCode::InvalidParameter, "vertex index out of range");
  }
  std::vector<double> p(dim, 0.0);
  p[index] = 1.0;
  return Distribution(std::move(p));
}

PopulationState make_state(std::span<const double> x, std::span<const double> y) {
  return PopulationState{Distribution::make(x), Distribution::make(y)};
}

double state_distance(const PopulationState& s1, const PopulationState& s2) {
  if (s1.n() != s2.n() || s1.nu() != s2.nu()) {
    throw Error(ErrorCode::DimensionMismatch, "states live on different simplex products");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < s1.n(); ++i) {
    d = std::max(d, std::abs(s1.female[i] - s2.female[i]));
  }
  for (std::size_t k = 0; k < s1.nu(); ++k) {
    d = std::max(d, std::abs(s1.male[k] - s2.male[k]));
  }
  return d;
}

}  // namespace qsobp
