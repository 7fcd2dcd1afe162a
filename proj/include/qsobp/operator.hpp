#pragma once

#include <cstddef>
#include <vector>

namespace qsobp {

inline constexpr double kStochasticTol = 1e-12;

/// Heredity coefficients p^f_{ik,j} and p^m_{ik,l}, all indices 0-based.
///
/// pf(i, k, j): probability that a type-i mother and a type-k father produce a
/// type-j daughter; pm(i, k, l) likewise for a type-l son.
class HeredityTensors {
 public:
  HeredityTensors(std::size_t n, std::size_t nu);

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] std::size_t nu() const noexcept { return nu_; }

  double& pf(std::size_t i, std::size_t k, std::size_t j) { return pf_[(i * nu_ + k) * n_ + j]; }
  [[nodiscard]] double pf(std::size_t i, std::size_t k, std::size_t j) const {
    return pf_[(i * nu_ + k) * n_ + j];
  }
  double& pm(std::size_t i, std::size_t k, std::size_t l) { return pm_[(i * nu_ + k) * nu_ + l]; }
  [[nodiscard]] double pm(std::size_t i, std::size_t k, std::size_t l) const {
    return pm_[(i * nu_ + k) * nu_ + l];
  }

  /// Throws NotStochastic when an entry is negative or a row misses 1 by more
  /// than 1e-12.
  void validate() const;

  bool operator==(const HeredityTensors&) const = default;

 private:
  std::size_t n_;
  std::size_t nu_;
  std::vector<double> pf_;
  std::vector<double> pm_;
};

/// Evolution operator of a bisexual population; immutable after construction.
class BisexualOperator {
 public:
  explicit BisexualOperator(HeredityTensors tensors);

  [[nodiscard]] std::size_t n() const noexcept { return tensors_.n(); }
  [[nodiscard]] std::size_t nu() const noexcept { return tensors_.nu(); }
  [[nodiscard]] const HeredityTensors& tensors() const noexcept { return tensors_; }

  bool operator==(const BisexualOperator&) const = default;

 private:
  HeredityTensors tensors_;
};

}  // namespace qsobp
