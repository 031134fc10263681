#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace trdet {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Raised when an iterative or quadrature routine cannot meet its
/// accuracy contract (distinct from precondition violations).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline double sqr(double x) { return x * x; }

// Integer power with the convention z^0 == 1 (including z == 0).
inline Complex cpow_int(Complex z, int e) {
  Complex r{1.0, 0.0};
  for (int k = 0; k < e; ++k) r *= z;
  return r;
}

inline double pow_int(double x, int e) {
  double r = 1.0;
  for (int k = 0; k < e; ++k) r *= x;
  return r;
}

}  // namespace trdet
