#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qsobp {

inline constexpr double kNormalizationTol = 1e-9;
inline constexpr double kNegativeTol = 1e-12;

/// Numerical knobs shared by iteration, classification and fixed-point search.
struct Tolerance {
  double abs_eps = 1e-9;
  double iter_eps = 1e-12;
  std::size_t max_iters = 1'000'000;

  /// Throws InvalidParameter unless every field is strictly positive.
  void validate() const;
};

/// A point of the standard simplex: nonnegative entries summing to one.
///
/// Construction validates; nothing in the library renormalizes silently, so a
/// conservation bug in an operator surfaces as NotNormalized instead of being
/// absorbed.
class Distribution {
 public:
  /// Throws NegativeEntry (entry < -1e-12), NotNormalized (|sum-1| > 1e-9) or
  /// InvalidParameter (empty input).
  static Distribution make(std::span<const double> values);
  static Distribution make(std::initializer_list<double> values) {
    return make(std::span<const double>(values.begin(), values.size()));
  }

  /// Explicit renormalization for callers that start from raw weights.
  static Distribution normalized(std::span<const double> weights);

  /// Vertex e_index of the simplex of dimension dim.
  static Distribution vertex(std::size_t dim, std::size_t index);

  [[nodiscard]] std::size_t dim() const noexcept { return probs_.size(); }
  [[nodiscard]] std::span<const double> probs() const noexcept { return probs_; }
  [[nodiscard]] double operator[](std::size_t i) const { return probs_[i]; }

  bool operator==(const Distribution&) const = default;

 private:
  explicit Distribution(std::vector<double> probs) : probs_(std::move(probs)) {}

  std::vector<double> probs_;
};

inline Distribution make_distribution(std::span<const double> values) {
  return Distribution::make(values);
}

/// Female and male type distributions (x, y) on S^{n-1} x S^{nu-1}.
struct PopulationState {
  Distribution female;
  Distribution male;

  [[nodiscard]] std::size_t n() const noexcept { return female.dim(); }
  [[nodiscard]] std::size_t nu() const noexcept { return male.dim(); }

  bool operator==(const PopulationState&) const = default;
};

PopulationState make_state(std::span<const double> x, std::span<const double> y);
inline PopulationState make_state(std::initializer_list<double> x, std::initializer_list<double> y) {
  return make_state(std::span<const double>(x.begin(), x.size()),
                    std::span<const double>(y.begin(), y.size()));
}

/// Max-norm distance over all n + nu coordinates. Throws DimensionMismatch.
double state_distance(const PopulationState& s1, const PopulationState& s2);

}  // namespace qsobp
