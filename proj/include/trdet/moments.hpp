#pragma once

#include <array>
#include <map>
#include <utility>
#include <vector>

#include "trdet/product_model.hpp"
#include "trdet/types.hpp"

namespace trdet {

/// Symmetric 2x2 matrix.
struct Mat2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double det() const { return xx * yy - xy * xy; }
  bool spd() const { return xx > 0.0 && det() > 0.0; }
  Mat2 inverse() const;
  /// y^T M y
  double quad(double y1, double y2) const {
    return xx * y1 * y1 + 2.0 * xy * y1 * y2 + yy * y2 * y2;
  }
};

/// Joint complex moments M(m, n) = E[P^m conj(P)^n], m + n <= order.
struct ComplexMomentTable {
  int order = 0;
  std::map<std::pair<int, int>, Complex> entries;
  Complex at(int m, int n) const;
};

/// Joint real moments E[P1^a P2^b], a + b <= order, of (Re P, Im P).
struct RealMomentTable {
  int order = 0;
  std::map<std::pair<int, int>, double> entries;
  double at(int a, int b) const;
};

/// Joint cumulants of (P1, P2) for 2 <= |nu| <= order, plus mean and
/// covariance (entries of |nu| = 2 equal the covariance entries).
struct CumulantTable {
  int order = 0;
  std::map<std::pair<int, int>, double> entries;
  std::array<double, 2> mean{0.0, 0.0};
  Mat2 covariance;
  double at(int nu1, int nu2) const;
};

enum class Gaussian { X, Y };

/// E[V_a conj(V_b)]: (X,X) -> sx^2, (Y,Y) -> sy^2, (X,Y) -> rho sx sy,
/// (Y,X) -> conj(rho) sx sy. Pseudo-covariances E[V_a V_b] vanish by
/// circularity and are not represented.
Complex pair_covariance(const ProductModel& m, Gaussian a, Gaussian b);

/// Square complex matrix, row-major, for permanent evaluation (size <= 8).
class CMatrix {
 public:
  explicit CMatrix(int n) : n_(n), d_(static_cast<size_t>(n) * n) {}
  int size() const { return n_; }
  Complex& operator()(int r, int c) { return d_[static_cast<size_t>(r) * n_ + c]; }
  Complex operator()(int r, int c) const {
    return d_[static_cast<size_t>(r) * n_ + c];
  }

 private:
  int n_;
  std::vector<Complex> d_;
};

/// Permanent of a square matrix of size <= 8 (direct permutation sum for
/// sizes <= 5, Ryser above). Empty matrix -> 1.
Complex permanent(const CMatrix& a);

namespace detail {
Complex permanent_direct(const CMatrix& a);
Complex permanent_ryser(const CMatrix& a);
}  // namespace detail

/// Exact joint moment M(m, n) = E[P^m conj(P)^n] via moment expansion over
/// pairings of the Gaussian fluctuations; requires m + n <= 8.
Complex complex_moment(const ProductModel& m, int mm, int nn);

ComplexMomentTable complex_moments(const ProductModel& m, int order);

/// Binomial coefficient; 0 for r < 0 or r > n.
double binom(int n, int r);

/// Generalized binomial coefficient n(n-1)...(n-r+1)/r!, valid for any
/// integer n (including negative); 0 for r < 0.
double gen_binom(int n, int r);

/// Change-of-basis matrix between complex moments (M(m,0) ... M(0,m)) and
/// real moments (E[P1^m] ... E[P2^m]): row k holds the coefficients of
/// E[P1^(m-l) P2^l] in the expansion of (P1 + i P2)^(m-k) (P1 - i P2)^k.
/// Size (m+1) x (m+1); requires 1 <= m <= 8.
CMatrix jm_matrix(int m);

/// Solves the jm_matrix systems for every m <= order and checks that the
/// solutions are real (relative imaginary residue <= 1e-9) and that the
/// solve residual is small (<= 1e-8), else throws NumericalError.
RealMomentTable real_moments(const ProductModel& m, int order);

/// Central moments E[(P1 - mean1)^a (P2 - mean2)^b] by binomial mean shift.
RealMomentTable central_moments(const RealMomentTable& raw);

/// Joint cumulants from central moments via the standard multivariate
/// moment-cumulant recursion. Throws NumericalError if the resulting
/// covariance is not positive definite.
CumulantTable cumulants(const ProductModel& m, int order);

/// Same recursion applied to an externally supplied central-moment table
/// (used to build synthetic cumulant inputs).
CumulantTable cumulants_from_central(const RealMomentTable& central,
                                     std::array<double, 2> mean, int order);

namespace detail {
/// Gaussian elimination with partial pivoting; returns the solution and the
/// max-norm residual of the solve (relative to max(1, ||rhs||_inf)).
std::pair<std::vector<Complex>, double> solve_linear(const CMatrix& a,
                                                     const std::vector<Complex>& b);
}  // namespace detail

}  // namespace trdet
