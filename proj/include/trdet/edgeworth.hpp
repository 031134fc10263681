#pragma once

#include <array>
#include <tuple>
#include <vector>

#include "trdet/moments.hpp"
#include "trdet/poly2.hpp"
#include "trdet/product_model.hpp"

namespace trdet {

/// Truncated cumulant-series approximation to the density of (P1, P2):
/// a bivariate Gaussian base with mean/covariance of P, corrected by
/// Hermite-polynomial terms whose coefficients come from the cumulants of
/// order 3..s. Immutable after construction; safe to share across threads.
class EdgeworthModel {
 public:
  /// Builds from an explicit cumulant table (mean/covariance are taken
  /// from the table). Requires 2 <= s <= table.order.
  EdgeworthModel(const CumulantTable& table, int s);

  const std::array<double, 2>& mean() const { return mean_; }
  const Mat2& covariance() const { return covariance_; }
  const Mat2& precision() const { return precision_; }
  const CumulantTable& cumulant_table() const { return cumulants_; }
  int order() const { return order_; }

  /// Hermite-corrected series factor C(y) with f(p) = phi(p) * C(p - mean);
  /// identically 1 when s == 2.
  const Poly2& correction() const { return correction_; }

  double gaussian_pdf(double p1, double p2) const;
  double edgeworth_pdf(double p1, double p2) const;

  /// phi(p) * max(C(y), floor_ratio): the series with its correction factor
  /// floored, for callers that need a strictly positive density. Truncation
  /// error dominates wherever the series drops this far below the Gaussian
  /// base, so values under the floor carry no usable information.
  double edgeworth_pdf_floored(double p1, double p2, double floor_ratio) const;

 private:
  double correction_factor(double y1, double y2) const;

  std::array<double, 2> mean_;
  Mat2 covariance_;
  Mat2 precision_;
  CumulantTable cumulants_;
  int order_;
  double norm_;  // 1 / (2 pi sqrt(det R))
  Poly2 correction_;
  // correction_ flattened for evaluation in hot loops
  std::vector<std::tuple<int, int, double>> terms_;
  int max_degree_ = 0;
};

/// Full pipeline: moments -> cumulants -> series model, 2 <= s <= 8.
EdgeworthModel build_edgeworth(const ProductModel& m, int s);

double gaussian_pdf(const EdgeworthModel& m, double p1, double p2);
double edgeworth_pdf(const EdgeworthModel& m, double p1, double p2);

/// Bivariate Hermite polynomial H_nu for the Gaussian with the model's
/// mean and covariance: H_nu(p) * phi(p) == (-1)^|nu| d^nu phi(p).
/// Represented in the centered variable y = p - mean.
Poly2 hermite_poly(const Mat2& precision, int nu1, int nu2);

/// Evaluates H_nu at p; |nu| <= 8.
double hermite(const EdgeworthModel& m, int nu1, int nu2, double p1, double p2);

/// j-th series polynomial generated from the formal exponential identity:
/// the coefficient of u^j in sum_m (1/m!) (sum_r chi_{r+2}(t) u^r/(r+2)!)^m,
/// where chi_s(t1,t2) = sum_{n1+n2=s} s!/(n1! n2!) chi_nu t1^n1 t2^n2.
/// Requires cumulants up to order j + 2.
Poly2 cramer_edgeworth(int j, const CumulantTable& cumulants);

}  // namespace trdet
