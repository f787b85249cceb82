// Helpers shared by the unit tests: seeded random inputs and
// central-difference gradients.

#ifndef VIMEX_TEST_UTIL_HPP
#define VIMEX_TEST_UTIL_HPP

#include <cmath>
#include <functional>
#include <random>

#include "vimex/linalg.hpp"

namespace vimex::test {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20260418);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline Vector random_vector(std::size_t n, double lo = -1.0, double hi = 1.0) {
  Vector v(n);
  for (double& x : v) {
    x = uniform(lo, hi);
  }
  return v;
}

inline Vector central_difference(const std::function<double(const Vector&)>& f, const Vector& x,
                                 double eps = 1e-5) {
  Vector g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    Vector a = x;
    Vector b = x;
    a[i] += eps;
    b[i] -= eps;
    g[i] = (f(a) - f(b)) / (2.0 * eps);
  }
  return g;
}

inline double max_abs_diff(const Vector& a, const Vector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

} // namespace vimex::test

#endif
