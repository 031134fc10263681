#pragma once

#include "trdet/types.hpp"

namespace trdet {

/// Jointly circular complex Gaussian pair (X, Y):
///   X = mu_x + V_x,  Y = mu_y + V_y,
///   V_x ~ CN(0, sigma_x^2),  V_y ~ CN(0, sigma_y^2),
///   E[V_x conj(V_y)] = rho sigma_x sigma_y,  E[V_x V_y] = 0.
/// All distribution machinery below concerns the product P = X conj(Y).
class ProductModel {
 public:
  ProductModel(Complex mu_x, Complex mu_y, double sigma_x, double sigma_y,
               Complex rho);

  Complex mu_x() const { return mu_x_; }
  Complex mu_y() const { return mu_y_; }
  double sigma_x() const { return sigma_x_; }
  double sigma_y() const { return sigma_y_; }
  Complex rho() const { return rho_; }

  // Noncentrality ratios.
  Complex delta_x() const { return mu_x_ / sigma_x_; }
  Complex delta_y() const { return mu_y_ / sigma_y_; }

  bool zero_mean() const {
    return mu_x_ == Complex{0.0, 0.0} && mu_y_ == Complex{0.0, 0.0};
  }

  /// Same second-order structure with both means multiplied by `factor`.
  ProductModel scaled_means(double factor) const {
    return ProductModel(factor * mu_x_, factor * mu_y_, sigma_x_, sigma_y_, rho_);
  }

 private:
  Complex mu_x_;
  Complex mu_y_;
  double sigma_x_;
  double sigma_y_;
  Complex rho_;
};

struct ProductSummary {
  Complex mean;     // E[P]
  double variance;  // E[|P - E[P]|^2]
};

/// mean = mu_x conj(mu_y) + rho sigma_x sigma_y,
/// variance = |mu_x|^2 sigma_y^2 + |mu_y|^2 sigma_x^2 + sigma_x^2 sigma_y^2.
ProductSummary product_summary(const ProductModel& m);

/// Characteristic function psi_P(t) = E[exp(i Re[conj(t) P])].
Complex char_fn(const ProductModel& m, Complex t);

/// Closed-form density of P for zero-mean models:
///   f(p) = 2 / (pi sx sy c) * exp(2 Re[conj(rho) p] / c) * K0(2|p|/c),
///   c = sx sy (1 - |rho|^2).
/// Requires mu_x == mu_y == 0 exactly and p != 0 (log singularity at the
/// origin; callers that need values near 0 must clamp |p| themselves).
double null_pdf(const ProductModel& m, Complex p);

/// log(null_pdf), evaluated without intermediate underflow.
double log_null_pdf(const ProductModel& m, Complex p);

}  // namespace trdet
