#include "trdet/product_model.hpp"

#include <cmath>
#include <stdexcept>

#include "trdet/bessel.hpp"

namespace trdet {

ProductModel::ProductModel(Complex mu_x, Complex mu_y, double sigma_x,
                           double sigma_y, Complex rho)
    : mu_x_(mu_x), mu_y_(mu_y), sigma_x_(sigma_x), sigma_y_(sigma_y), rho_(rho) {
  if (!is_finite(mu_x_) || !is_finite(mu_y_) || !is_finite(rho_) ||
      !std::isfinite(sigma_x_) || !std::isfinite(sigma_y_)) {
    throw std::invalid_argument("ProductModel: non-finite parameter");
  }
  if (!(sigma_x_ > 0.0) || !(sigma_y_ > 0.0)) {
    throw std::invalid_argument("ProductModel: sigma_x and sigma_y must be > 0");
  }
  // |rho| -> 1 makes the conditional variance collapse and every downstream
  // formula singular; reject outright.
  if (std::abs(rho_) >= 1.0 - 1e-12) {
    throw std::invalid_argument("ProductModel: requires |rho| < 1");
  }
}

ProductSummary product_summary(const ProductModel& m) {
  const Complex mean = m.mu_x() * std::conj(m.mu_y()) +
                       m.rho() * m.sigma_x() * m.sigma_y();
  const double variance = std::norm(m.mu_x()) * sqr(m.sigma_y()) +
                          std::norm(m.mu_y()) * sqr(m.sigma_x()) +
                          sqr(m.sigma_x()) * sqr(m.sigma_y());
  return {mean, variance};
}

Complex char_fn(const ProductModel& m, Complex t) {
  const double sx = m.sigma_x();
  const double sy = m.sigma_y();
  const double t2 = std::norm(t);
  const Complex g = Complex{1.0 + 0.25 * sqr(sx) * sqr(sy) *
                                      (1.0 - std::norm(m.rho())) * t2,
                            -sx * sy * std::real(std::conj(t) * m.rho())};
  const double a = std::norm(m.mu_x()) * sqr(sy) + std::norm(m.mu_y()) * sqr(sx);
  const double b =
      sx * sy * std::real(std::conj(m.mu_x()) * m.mu_y() * m.rho());
  const Complex arg{-0.25 * a * t2 + 0.5 * b * t2,
                    std::real(std::conj(m.mu_x()) * m.mu_y() * t)};
  return std::exp(arg / g) / g;
}

double log_null_pdf(const ProductModel& m, Complex p) {
  if (!m.zero_mean()) {
    throw std::invalid_argument("null_pdf: model must have zero means");
  }
  if (p == Complex{0.0, 0.0}) {
    throw std::domain_error("null_pdf: log singularity at p = 0");
  }
  const double sx = m.sigma_x();
  const double sy = m.sigma_y();
  const double c = sx * sy * (1.0 - std::norm(m.rho()));
  const double z = 2.0 * std::abs(p) / c;
  return std::log(2.0 / (kPi * sx * sy * c)) +
         2.0 * std::real(std::conj(m.rho()) * p) / c - z +
         std::log(bessel_k0_scaled(z));
}

double null_pdf(const ProductModel& m, Complex p) {
  return std::exp(log_null_pdf(m, p));
}

}  // namespace trdet
