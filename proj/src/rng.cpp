#include "gcnse/rng.hpp"

#include <cmath>

namespace gcnse {

std::pair<double, double> Xoshiro256pp::next_gaussian_pair() {
  const double u1 = 1.0 - next_unit(); // (0, 1]
  const double u2 = next_unit();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 6.283185307179586476925286766559 * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

} // namespace gcnse
