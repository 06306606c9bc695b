#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "core/common.hpp"

namespace hs::rng {

// seeded generator with a platform-independent normal variate (std::normal_distribution
// output is implementation-defined, Box-Muller is not)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // [0, 1)
    return (eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (have_) {
      have_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    have_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

  std::uint64_t integer() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0;
  bool have_ = false;
};

}  // namespace hs::rng
