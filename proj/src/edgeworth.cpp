#include "trdet/edgeworth.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace trdet {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// chi_s(t1, t2) with multinomial weights.
Poly2 cumulant_poly(const CumulantTable& table, int s) {
  Poly2 p;
  for (int n1 = 0; n1 <= s; ++n1) {
    const int n2 = s - n1;
    const double w = factorial(s) / (factorial(n1) * factorial(n2));
    p.add_term(n1, n2, w * table.at(n1, n2));
  }
  return p;
}

}  // namespace

Poly2 cramer_edgeworth(int j, const CumulantTable& cumulants) {
  if (j < 1) throw std::invalid_argument("cramer_edgeworth: requires j >= 1");
  if (cumulants.order < j + 2) {
    throw std::invalid_argument(
        "cramer_edgeworth: cumulant table must reach order j + 2");
  }
  // Formal series S(u) = sum_{r=1}^{j} chi_{r+2}(t) / (r+2)! u^r; the result
  // is the u^j coefficient of sum_m S^m / m!. Index 0 of `series` is u^1.
  std::vector<Poly2> series(j);
  for (int r = 1; r <= j; ++r) {
    series[r - 1] = cumulant_poly(cumulants, r + 2).scaled(1.0 / factorial(r + 2));
  }
  std::vector<Poly2> power = series;  // S^m, updated in place
  std::vector<Poly2> total = series;  // sum_m S^m / m!
  for (int m = 2; m <= j; ++m) {
    std::vector<Poly2> next(j);
    for (int a = 1; a < j; ++a) {
      for (int b = 1; a + b <= j; ++b) {
        next[a + b - 1] += power[a - 1] * series[b - 1];
      }
    }
    power = std::move(next);
    const double inv = 1.0 / factorial(m);
    for (int r = 0; r < j; ++r) total[r] += power[r].scaled(inv);
  }
  return total[j - 1];
}

Poly2 hermite_poly(const Mat2& precision, int nu1, int nu2) {
  if (nu1 < 0 || nu2 < 0 || nu1 + nu2 > 12) {
    throw std::invalid_argument("hermite_poly: order out of range");
  }
  // H_{nu+e_i} = (B y)_i H_nu - d_i H_nu, starting from H_0 = 1.
  Poly2 by1;
  by1.add_term(1, 0, precision.xx);
  by1.add_term(0, 1, precision.xy);
  Poly2 by2;
  by2.add_term(1, 0, precision.xy);
  by2.add_term(0, 1, precision.yy);
  Poly2 h(1.0);
  for (int k = 0; k < nu1; ++k) h = by1 * h + h.derivative(0).scaled(-1.0);
  for (int k = 0; k < nu2; ++k) h = by2 * h + h.derivative(1).scaled(-1.0);
  return h;
}

EdgeworthModel::EdgeworthModel(const CumulantTable& table, int s)
    : mean_(table.mean),
      covariance_(table.covariance),
      precision_(table.covariance.inverse()),
      cumulants_(table),
      order_(s) {
  if (s < 2 || s > 8) {
    throw std::invalid_argument("EdgeworthModel: order must be in [2, 8]");
  }
  if (table.order < s) {
    throw std::invalid_argument("EdgeworthModel: cumulant table too short");
  }
  const double det = covariance_.det();
  norm_ = 1.0 / (kTwoPi * std::sqrt(det));

  correction_ = Poly2(1.0);
  std::map<std::pair<int, int>, Poly2> hermites;
  for (int j = 1; j <= order_ - 2; ++j) {
    const Poly2 lj = cramer_edgeworth(j, cumulants_);
    for (const auto& [nu, coef] : lj.terms()) {
      auto it = hermites.find(nu);
      if (it == hermites.end()) {
        it = hermites.emplace(nu, hermite_poly(precision_, nu.first, nu.second))
                 .first;
      }
      correction_ += it->second.scaled(coef);
    }
  }
  for (const auto& [k, v] : correction_.terms()) {
    terms_.emplace_back(k.first, k.second, v);
    max_degree_ = std::max(max_degree_, k.first + k.second);
  }
}

double EdgeworthModel::gaussian_pdf(double p1, double p2) const {
  const double y1 = p1 - mean_[0];
  const double y2 = p2 - mean_[1];
  return norm_ * std::exp(-0.5 * precision_.quad(y1, y2));
}

double EdgeworthModel::correction_factor(double y1, double y2) const {
  double pw1[13], pw2[13];
  pw1[0] = pw2[0] = 1.0;
  for (int k = 1; k <= max_degree_; ++k) {
    pw1[k] = pw1[k - 1] * y1;
    pw2[k] = pw2[k - 1] * y2;
  }
  double c = 0.0;
  for (const auto& [d1, d2, coef] : terms_) c += coef * pw1[d1] * pw2[d2];
  return c;
}

double EdgeworthModel::edgeworth_pdf(double p1, double p2) const {
  const double phi = gaussian_pdf(p1, p2);
  if (order_ == 2) return phi;
  // May be negative at isolated points; returned raw by contract.
  return phi * correction_factor(p1 - mean_[0], p2 - mean_[1]);
}

double EdgeworthModel::edgeworth_pdf_floored(double p1, double p2,
                                             double floor_ratio) const {
  const double phi = gaussian_pdf(p1, p2);
  if (order_ == 2) return phi;
  const double c = correction_factor(p1 - mean_[0], p2 - mean_[1]);
  return phi * std::max(c, floor_ratio);
}

EdgeworthModel build_edgeworth(const ProductModel& m, int s) {
  if (s < 2 || s > 8) {
    throw std::invalid_argument("build_edgeworth: order must be in [2, 8]");
  }
  return EdgeworthModel(cumulants(m, s), s);
}

double gaussian_pdf(const EdgeworthModel& m, double p1, double p2) {
  return m.gaussian_pdf(p1, p2);
}

double edgeworth_pdf(const EdgeworthModel& m, double p1, double p2) {
  return m.edgeworth_pdf(p1, p2);
}

double hermite(const EdgeworthModel& m, int nu1, int nu2, double p1, double p2) {
  if (nu1 < 0 || nu2 < 0 || nu1 + nu2 > 8) {
    throw std::invalid_argument("hermite: requires |nu| <= 8");
  }
  const Poly2 h = hermite_poly(m.precision(), nu1, nu2);
  return h.eval(p1 - m.mean()[0], p2 - m.mean()[1]);
}

}  // namespace trdet
