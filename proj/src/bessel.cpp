#include "trdet/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace trdet {

namespace {

// Ascending series, x <= 2:
//   I0(x)  = sum (x^2/4)^k / (k!)^2
//   K0(x)  = -(log(x/2) + gamma) I0(x) + sum_{k>=1} H_k (x^2/4)^k / (k!)^2
double k0_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;   // (q^k) / (k!)^2
  double i0 = 1.0;
  double s = 0.0;
  double hk = 0.0;
  for (int k = 1; k <= 30; ++k) {
    term *= q / (static_cast<double>(k) * k);
    hk += 1.0 / k;
    i0 += term;
    s += term * hk;
    if (term < 1e-18) break;
  }
  return -(std::log(0.5 * x) + kEulerGamma) * i0 + s;
}

// Trapezoid on K0(x) = exp(-x) * integral_0^inf exp(-x (cosh t - 1)) dt.
// The integrand is even and analytic, so a uniform step converges
// geometrically; returns the scaled value exp(x) K0(x).
double k0_scaled_trapezoid(double x) {
  const double h = std::min(0.25, 0.35 / std::sqrt(x));
  double sum = 0.5;  // t = 0 endpoint, cosh(0) - 1 = 0
  for (int k = 1;; ++k) {
    const double e = x * (std::cosh(k * h) - 1.0);
    if (e > 60.0) break;
    sum += std::exp(-e);
  }
  return h * sum;
}

}  // namespace

double bessel_k0_scaled(double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_k0: requires x > 0");
  if (x <= 2.0) return std::exp(x) * k0_series(x);
  return k0_scaled_trapezoid(x);
}

double bessel_k0(double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_k0: requires x > 0");
  if (x <= 2.0) return k0_series(x);
  return std::exp(-x) * k0_scaled_trapezoid(x);
}

}  // namespace trdet
