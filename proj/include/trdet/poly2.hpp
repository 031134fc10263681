#pragma once

#include <map>
#include <utility>
#include <vector>

#include "trdet/types.hpp"

namespace trdet {

/// Sparse bivariate polynomial with real coefficients; exact-zero
/// coefficients are never stored.
class Poly2 {
 public:
  Poly2() = default;
  explicit Poly2(double constant) {
    if (constant != 0.0) c_[{0, 0}] = constant;
  }

  static Poly2 monomial(int d1, int d2, double coef) {
    Poly2 p;
    if (coef != 0.0) p.c_[{d1, d2}] = coef;
    return p;
  }

  const std::map<std::pair<int, int>, double>& terms() const { return c_; }
  bool is_zero() const { return c_.empty(); }

  int degree() const {
    int d = 0;
    for (const auto& [k, v] : c_) {
      (void)v;
      d = std::max(d, k.first + k.second);
    }
    return d;
  }

  double coeff(int d1, int d2) const {
    const auto it = c_.find({d1, d2});
    return it == c_.end() ? 0.0 : it->second;
  }

  void add_term(int d1, int d2, double coef) {
    if (coef == 0.0) return;
    const auto key = std::make_pair(d1, d2);
    const double v = (c_[key] += coef);
    if (v == 0.0) c_.erase(key);
  }

  Poly2& operator+=(const Poly2& o) {
    for (const auto& [k, v] : o.c_) add_term(k.first, k.second, v);
    return *this;
  }

  Poly2 operator+(const Poly2& o) const {
    Poly2 r = *this;
    r += o;
    return r;
  }

  Poly2 operator*(const Poly2& o) const {
    Poly2 r;
    for (const auto& [ka, va] : c_) {
      for (const auto& [kb, vb] : o.c_) {
        r.add_term(ka.first + kb.first, ka.second + kb.second, va * vb);
      }
    }
    return r;
  }

  Poly2 scaled(double f) const {
    Poly2 r;
    if (f == 0.0) return r;
    for (const auto& [k, v] : c_) r.c_[k] = v * f;
    return r;
  }

  /// Partial derivative; axis 0 -> d/dy1, axis 1 -> d/dy2.
  Poly2 derivative(int axis) const {
    Poly2 r;
    for (const auto& [k, v] : c_) {
      const int d = axis == 0 ? k.first : k.second;
      if (d == 0) continue;
      if (axis == 0) {
        r.add_term(k.first - 1, k.second, v * d);
      } else {
        r.add_term(k.first, k.second - 1, v * d);
      }
    }
    return r;
  }

  double eval(double y1, double y2) const {
    const int d = degree();
    std::vector<double> p1(d + 1, 1.0), p2(d + 1, 1.0);
    for (int k = 1; k <= d; ++k) {
      p1[k] = p1[k - 1] * y1;
      p2[k] = p2[k - 1] * y2;
    }
    double s = 0.0;
    for (const auto& [k, v] : c_) s += v * p1[k.first] * p2[k.second];
    return s;
  }

 private:
  std::map<std::pair<int, int>, double> c_;
};

}  // namespace trdet
