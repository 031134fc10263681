#include "trdet/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace trdet {

Mat2 Mat2::inverse() const {
  const double d = det();
  if (!(d > 0.0) || !(xx > 0.0)) {
    throw NumericalError("Mat2: matrix is not positive definite");
  }
  return Mat2{yy / d, -xy / d, xx / d};
}

Complex ComplexMomentTable::at(int m, int n) const {
  const auto it = entries.find({m, n});
  if (it == entries.end()) {
    throw std::out_of_range("ComplexMomentTable: missing entry");
  }
  return it->second;
}

double RealMomentTable::at(int a, int b) const {
  const auto it = entries.find({a, b});
  if (it == entries.end()) {
    throw std::out_of_range("RealMomentTable: missing entry");
  }
  return it->second;
}

double CumulantTable::at(int nu1, int nu2) const {
  const auto it = entries.find({nu1, nu2});
  if (it == entries.end()) {
    throw std::out_of_range("CumulantTable: missing entry");
  }
  return it->second;
}

double binom(int n, int r) {
  if (r < 0 || r > n || n < 0) return 0.0;
  r = std::min(r, n - r);
  double v = 1.0;
  for (int k = 1; k <= r; ++k) v = v * (n - r + k) / k;
  return v;
}

double gen_binom(int n, int r) {
  if (r < 0) return 0.0;
  if (r == 0) return 1.0;
  double v = 1.0;
  for (int k = 0; k < r; ++k) v *= static_cast<double>(n - k);
  for (int k = 1; k <= r; ++k) v /= static_cast<double>(k);
  return v;
}

Complex pair_covariance(const ProductModel& m, Gaussian a, Gaussian b) {
  const double sxsy = m.sigma_x() * m.sigma_y();
  if (a == Gaussian::X && b == Gaussian::X) return Complex{sqr(m.sigma_x()), 0.0};
  if (a == Gaussian::Y && b == Gaussian::Y) return Complex{sqr(m.sigma_y()), 0.0};
  if (a == Gaussian::X && b == Gaussian::Y) return m.rho() * sxsy;
  return std::conj(m.rho()) * sxsy;
}

namespace detail {

Complex permanent_direct(const CMatrix& a) {
  const int n = a.size();
  std::array<int, 8> perm{};
  std::iota(perm.begin(), perm.begin() + n, 0);
  Complex sum{0.0, 0.0};
  do {
    Complex prod{1.0, 0.0};
    for (int k = 0; k < n; ++k) prod *= a(perm[k], k);
    sum += prod;
  } while (std::next_permutation(perm.begin(), perm.begin() + n));
  return sum;
}

Complex permanent_ryser(const CMatrix& a) {
  const int n = a.size();
  Complex sum{0.0, 0.0};
  const unsigned full = 1u << n;
  for (unsigned s = 1; s < full; ++s) {
    Complex prod{1.0, 0.0};
    for (int r = 0; r < n; ++r) {
      Complex row{0.0, 0.0};
      for (int c = 0; c < n; ++c) {
        if (s & (1u << c)) row += a(r, c);
      }
      prod *= row;
    }
    const int bits = __builtin_popcount(s);
    sum += ((n - bits) % 2 == 0) ? prod : -prod;
  }
  return sum;
}

}  // namespace detail

Complex permanent(const CMatrix& a) {
  const int n = a.size();
  if (n > 8) throw std::invalid_argument("permanent: size must be <= 8");
  if (n == 0) return Complex{1.0, 0.0};
  return n <= 5 ? detail::permanent_direct(a) : detail::permanent_ryser(a);
}

Complex complex_moment(const ProductModel& model, int mm, int nn) {
  if (mm < 0 || nn < 0 || mm + nn > 8) {
    throw std::invalid_argument("complex_moment: requires m, n >= 0, m + n <= 8");
  }
  const Complex mu_x = model.mu_x();
  const Complex mu_y = model.mu_y();
  Complex total{0.0, 0.0};
  for (int t = 0; t <= mm + nn; ++t) {
    // i unconjugated V_x factors (rest V_y); j conjugated V_y factors
    // (rest conj(V_x)). Out-of-range binomials vanish.
    for (int i = std::max(0, t - nn); i <= std::min(t, mm); ++i) {
      for (int j = std::max(0, t - nn); j <= std::min(t, mm); ++j) {
        const double coef = binom(mm, i) * binom(mm, j) * binom(nn, t - j) *
                            binom(nn, t - i);
        if (coef == 0.0) continue;
        const Complex mu_fac = cpow_int(mu_x, mm - i) *
                               std::conj(cpow_int(mu_y, mm - j)) *
                               std::conj(cpow_int(mu_x, nn - t + j)) *
                               cpow_int(mu_y, nn - t + i);
        CMatrix mat(t);
        for (int r = 0; r < t; ++r) {
          const Gaussian ga = r < i ? Gaussian::X : Gaussian::Y;
          for (int c = 0; c < t; ++c) {
            const Gaussian gb = c < t - j ? Gaussian::X : Gaussian::Y;
            mat(r, c) = pair_covariance(model, ga, gb);
          }
        }
        total += coef * mu_fac * permanent(mat);
      }
    }
  }
  return total;
}

ComplexMomentTable complex_moments(const ProductModel& m, int order) {
  if (order < 1 || order > 8) {
    throw std::invalid_argument("complex_moments: order must be in [1, 8]");
  }
  ComplexMomentTable table;
  table.order = order;
  for (int s = 0; s <= order; ++s) {
    for (int mm = 0; mm <= s; ++mm) {
      table.entries[{mm, s - mm}] = complex_moment(m, mm, s - mm);
    }
  }
  return table;
}

CMatrix jm_matrix(int m) {
  if (m < 1 || m > 8) throw std::invalid_argument("jm_matrix: m must be in [1, 8]");
  CMatrix j(m + 1);
  static const Complex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int k = 0; k <= m; ++k) {
    for (int l = 0; l <= m; ++l) {
      Complex v{0.0, 0.0};
      for (int h = 0; 2 * h <= l; ++h) {
        // m - 2k can be negative; the generalized coefficient covers it.
        v += ipow[(l - 2 * h) % 4] * gen_binom(m - 2 * k, l - 2 * h) *
             binom(k, h);
      }
      j(k, l) = v;
    }
  }
  return j;
}

namespace detail {

std::pair<std::vector<Complex>, double> solve_linear(
    const CMatrix& a, const std::vector<Complex>& b) {
  const int n = a.size();
  if (static_cast<int>(b.size()) != n) {
    throw std::invalid_argument("solve_linear: dimension mismatch");
  }
  CMatrix u = a;
  std::vector<Complex> x = b;
  std::vector<int> piv(n);
  std::iota(piv.begin(), piv.end(), 0);
  for (int col = 0; col < n; ++col) {
    int best = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(u(r, col)) > std::abs(u(best, col))) best = r;
    }
    if (std::abs(u(best, col)) == 0.0) {
      throw NumericalError("solve_linear: singular matrix");
    }
    if (best != col) {
      for (int c = 0; c < n; ++c) std::swap(u(col, c), u(best, c));
      std::swap(x[col], x[best]);
    }
    for (int r = col + 1; r < n; ++r) {
      const Complex f = u(r, col) / u(col, col);
      u(r, col) = {0.0, 0.0};
      for (int c = col + 1; c < n; ++c) u(r, c) -= f * u(col, c);
      x[r] -= f * x[col];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    Complex s = x[r];
    for (int c = r + 1; c < n; ++c) s -= u(r, c) * x[c];
    x[r] = s / u(r, r);
  }
  double bmax = 1.0;
  for (const Complex& v : b) bmax = std::max(bmax, std::abs(v));
  double res = 0.0;
  for (int r = 0; r < n; ++r) {
    Complex s{0.0, 0.0};
    for (int c = 0; c < n; ++c) s += a(r, c) * x[c];
    res = std::max(res, std::abs(s - b[r]));
  }
  return {std::move(x), res / bmax};
}

}  // namespace detail

RealMomentTable real_moments(const ProductModel& model, int order) {
  if (order < 1 || order > 8) {
    throw std::invalid_argument("real_moments: order must be in [1, 8]");
  }
  const ComplexMomentTable cm = complex_moments(model, order);
  RealMomentTable table;
  table.order = order;
  table.entries[{0, 0}] = 1.0;
  for (int m = 1; m <= order; ++m) {
    const CMatrix j = jm_matrix(m);
    std::vector<Complex> rhs(m + 1);
    for (int k = 0; k <= m; ++k) rhs[k] = cm.at(m - k, k);
    const auto [x, residual] = detail::solve_linear(j, rhs);
    if (residual > 1e-8) {
      throw NumericalError("real_moments: ill-conditioned moment system");
    }
    double xmax = 1.0;
    for (const Complex& v : x) xmax = std::max(xmax, std::abs(v));
    for (int l = 0; l <= m; ++l) {
      if (std::abs(x[l].imag()) > 1e-9 * xmax) {
        throw NumericalError("real_moments: non-real moment solution");
      }
      table.entries[{m - l, l}] = x[l].real();
    }
  }
  return table;
}

RealMomentTable central_moments(const RealMomentTable& raw) {
  const double m1 = raw.at(1, 0);
  const double m2 = raw.at(0, 1);
  RealMomentTable out;
  out.order = raw.order;
  for (const auto& [ab, unused] : raw.entries) {
    (void)unused;
    const auto [a, b] = ab;
    double v = 0.0;
    for (int r = 0; r <= a; ++r) {
      for (int s = 0; s <= b; ++s) {
        v += binom(a, r) * binom(b, s) * pow_int(-m1, a - r) *
             pow_int(-m2, b - s) * raw.at(r, s);
      }
    }
    out.entries[ab] = v;
  }
  return out;
}

CumulantTable cumulants_from_central(const RealMomentTable& central,
                                     std::array<double, 2> mean, int order) {
  if (order < 2 || order > 8) {
    throw std::invalid_argument("cumulants: order must be in [2, 8]");
  }
  if (central.order < order) {
    throw std::invalid_argument("cumulants: central moment table too short");
  }
  // kappa[nu] = cm[nu] - sum over proper lower splits; first-order terms
  // vanish because the moments are central.
  std::map<std::pair<int, int>, double> kappa;
  kappa[{1, 0}] = 0.0;
  kappa[{0, 1}] = 0.0;
  for (int s = 2; s <= order; ++s) {
    for (int n1 = s; n1 >= 0; --n1) {
      const int n2 = s - n1;
      double v = central.at(n1, n2);
      if (n1 >= 1) {
        for (int l1 = 1; l1 <= n1; ++l1) {
          for (int l2 = 0; l2 <= n2; ++l2) {
            if (l1 == n1 && l2 == n2) continue;
            if (l1 + l2 < 2) continue;
            v -= binom(n1 - 1, l1 - 1) * binom(n2, l2) * kappa.at({l1, l2}) *
                 central.at(n1 - l1, n2 - l2);
          }
        }
      } else {
        for (int l2 = 2; l2 < n2; ++l2) {
          v -= binom(n2 - 1, l2 - 1) * kappa.at({0, l2}) *
               central.at(0, n2 - l2);
        }
      }
      kappa[{n1, n2}] = v;
    }
  }
  CumulantTable table;
  table.order = order;
  table.mean = mean;
  table.covariance = Mat2{kappa.at({2, 0}), kappa.at({1, 1}), kappa.at({0, 2})};
  if (!table.covariance.spd()) {
    throw NumericalError("cumulants: covariance is not positive definite");
  }
  for (const auto& [nu, v] : kappa) {
    if (nu.first + nu.second >= 2) table.entries[nu] = v;
  }
  return table;
}

CumulantTable cumulants(const ProductModel& m, int order) {
  const RealMomentTable raw = real_moments(m, order);
  const RealMomentTable central = central_moments(raw);
  return cumulants_from_central(central, {raw.at(1, 0), raw.at(0, 1)}, order);
}

}  // namespace trdet
