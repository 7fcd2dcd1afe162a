#include "qsobp/operator.hpp"

#include <cmath>
#include <string>

#include "qsobp/error.hpp"

namespace qsobp {

HeredityTensors::HeredityTensors(std::size_t n, std::size_t nu)
    : n_(n), nu_(nu), pf_(n * nu * n, 0.0), pm_(n * nu * nu, 0.0) {
  if (n == 0 || nu == 0) {
    throw Error(ErrorCode::InvalidParameter, "both type counts must be positive");
  }
}

void HeredityTensors::validate() const {
  auto check_row = [](const double* row, std::size_t len, const char* which, std::size_t i,
                      std::size_t k) {
    double sum = 0.0;
    for (std::size_t j = 0; j < len; ++j) {
      if (!(row[j] >= 0.0) || !std::isfinite(row[j])) {
        throw Error(ErrorCode::NotStochastic, std::string(which) + " row (" + std::to_string(i) +
                                                  "," + std::to_string(k) + ") has a bad entry");
      }
      sum += row[j];
    }
    if (std::abs(sum - 1.0) > kStochasticTol) {
      throw Error(ErrorCode::NotStochastic, std::string(which) + " row (" + std::to_string(i) +
                                                "," + std::to_string(k) + ") sums to " +
                                                std::to_string(sum));
    }
  };
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = 0; k < nu_; ++k) {
      check_row(&pf_[(i * nu_ + k) * n_], n_, "pf", i, k);
      check_row(&pm_[(i * nu_ + k) * nu_], nu_, "pm", i, k);
    }
  }
}

BisexualOperator::BisexualOperator(HeredityTensors tensors) : tensors_(std::move(tensors)) {
  tensors_.validate();
}

}  // namespace qsobp
