#include "qsobp/random.hpp"

#include <vector>

namespace qsobp {

Distribution random_distribution(std::size_t dim, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(dim);
  for (double& v : w) v = expo(rng);
  return Distribution::normalized(w);
}

PopulationState random_state(std::size_t n, std::size_t nu, std::mt19937_64& rng) {
  Distribution x = random_distribution(n, rng);
  Distribution y = random_distribution(nu, rng);
  return PopulationState{std::move(x), std::move(y)};
}

double uniform_open(double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  double v = u(rng);
  while (v <= lo) v = u(rng);
  return v;
}

}  // namespace qsobp
