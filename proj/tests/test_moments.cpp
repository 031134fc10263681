#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "trdet/moments.hpp"
#include "trdet/rng.hpp"

using namespace trdet;
using oracles::fig_model;
using oracles::fig_model_stats;

namespace {

ProductModel random_model(RngStream& rng) {
  const Complex mu_x{3.0 * (rng.uniform() - 0.5), 3.0 * (rng.uniform() - 0.5)};
  const Complex mu_y{3.0 * (rng.uniform() - 0.5), 3.0 * (rng.uniform() - 0.5)};
  const double sx = 0.5 + 1.5 * rng.uniform();
  const double sy = 0.5 + 1.5 * rng.uniform();
  const double rmag = 0.8 * rng.uniform();
  const double rarg = kTwoPi * rng.uniform();
  return ProductModel{mu_x, mu_y, sx, sy, std::polar(rmag, rarg)};
}

}  // namespace

TEST_CASE("pair covariance table") {
  const ProductModel m{{0, 0}, {0, 0}, 2.0, 1.0, {0.3, 0.3}};
  CHECK(pair_covariance(m, Gaussian::X, Gaussian::X) == Complex{4.0, 0.0});
  CHECK(pair_covariance(m, Gaussian::Y, Gaussian::Y) == Complex{1.0, 0.0});
  const ProductModel u{{0, 0}, {0, 0}, 1.0, 1.0, {0.3, 0.3}};
  CHECK(pair_covariance(u, Gaussian::X, Gaussian::Y) == Complex{0.3, 0.3});

  RngStream rng(8, 0);
  for (int k = 0; k < 5; ++k) {
    const ProductModel r = random_model(rng);
    const Complex xy = pair_covariance(r, Gaussian::X, Gaussian::Y);
    const Complex yx = pair_covariance(r, Gaussian::Y, Gaussian::X);
    CHECK(yx == std::conj(xy));
  }
}

TEST_CASE("permanent small closed forms") {
  CMatrix one(1);
  one(0, 0) = {2.0, -1.0};
  CHECK(permanent(one) == Complex{2.0, -1.0});

  CMatrix two(2);
  two(0, 0) = {1, 1};
  two(0, 1) = {2, 0};
  two(1, 0) = {0, 3};
  two(1, 1) = {1, -1};
  // ad + bc
  const Complex expect = Complex{1, 1} * Complex{1, -1} + Complex{2, 0} * Complex{0, 3};
  CHECK(permanent(two) == expect);

  CHECK(permanent(CMatrix(0)) == Complex{1.0, 0.0});
}

TEST_CASE("ryser agrees with permutation enumeration") {
  RngStream rng(99, 1);
  for (int n : {4, 6, 7}) {
    CMatrix a(n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        a(r, c) = Complex{rng.uniform() - 0.5, rng.uniform() - 0.5};
      }
    }
    const Complex direct = detail::permanent_direct(a);
    const Complex ryser = detail::permanent_ryser(a);
    const Complex brute = oracles::permanent_recursive(a);
    CHECK(std::abs(ryser - brute) < 1e-12 * std::max(1.0, std::abs(brute)));
    CHECK(std::abs(direct - brute) < 1e-12 * std::max(1.0, std::abs(brute)));
  }
}

TEST_CASE("complex moment closed forms") {
  RngStream rng(5, 0);
  for (int k = 0; k < 5; ++k) {
    const ProductModel m = random_model(rng);
    const ProductSummary s = product_summary(m);
    CHECK(complex_moment(m, 0, 0) == Complex{1.0, 0.0});

    const Complex m10 = complex_moment(m, 1, 0);
    CHECK(m10.real() == doctest::Approx(s.mean.real()).epsilon(1e-12));
    CHECK(m10.imag() == doctest::Approx(s.mean.imag()).epsilon(1e-12));

    const Complex m11 = complex_moment(m, 1, 1);
    CHECK(m11.real() ==
          doctest::Approx(std::norm(s.mean) + s.variance).epsilon(1e-12));
    CHECK(m11.imag() == doctest::Approx(0.0).scale(std::norm(s.mean) + 1.0));
  }

  // zero-mean: M(2,0) = 2 (rho sx sy)^2
  const ProductModel z{{0, 0}, {0, 0}, 1.3, 0.7, {0.25, -0.55}};
  const Complex r = Complex{0.25, -0.55} * 1.3 * 0.7;
  const Complex m20 = complex_moment(z, 2, 0);
  CHECK(m20.real() == doctest::Approx((2.0 * r * r).real()).epsilon(1e-12));
  CHECK(m20.imag() == doctest::Approx((2.0 * r * r).imag()).epsilon(1e-12));
}

TEST_CASE("complex moments are hermitian in (m, n)") {
  RngStream rng(6, 0);
  for (int k = 0; k < 3; ++k) {
    const ProductModel m = random_model(rng);
    for (int s = 0; s <= 6; ++s) {
      for (int mm = 0; mm <= s; ++mm) {
        const Complex a = complex_moment(m, mm, s - mm);
        const Complex b = std::conj(complex_moment(m, s - mm, mm));
        CHECK(std::abs(a - b) <= 1e-11 * std::max(1.0, std::abs(a)));
      }
    }
  }
}

TEST_CASE("moment scaling covariance") {
  RngStream rng(7, 0);
  const ProductModel m = random_model(rng);
  const ProductModel scaled{2.0 * m.mu_x(), m.mu_y(), 2.0 * m.sigma_x(),
                            m.sigma_y(), m.rho()};
  for (int s = 1; s <= 4; ++s) {
    for (int mm = 0; mm <= s; ++mm) {
      const Complex base = complex_moment(m, mm, s - mm);
      const Complex big = complex_moment(scaled, mm, s - mm);
      const double factor = pow_int(2.0, s);
      CHECK(std::abs(big - factor * base) <=
            1e-10 * std::max(1.0, std::abs(big)));
    }
  }
}

TEST_CASE("complex moments match 1e7-draw simulation within 4 SE") {
  const auto& st = fig_model_stats();
  for (int s = 1; s <= 6; ++s) {
    for (int mm = 0; mm <= s; ++mm) {
      const Complex exact = complex_moment(fig_model(), mm, s - mm);
      const int nn = s - mm;
      // diagonal moments are exactly real; their sampled imaginary part is
      // floating-point noise, hence the magnitude-scaled floor
      const double floor = 1e-10 * std::max(1.0, std::abs(exact));
      CHECK(std::abs(exact.real() - st.re_mean[mm][nn]) <
            4.0 * st.re_se[mm][nn] + floor);
      CHECK(std::abs(exact.imag() - st.im_mean[mm][nn]) <
            4.0 * st.im_se[mm][nn] + floor);
    }
  }
}

TEST_CASE("change-of-basis matrix rows") {
  const CMatrix j1 = jm_matrix(1);
  CHECK(j1(0, 0) == Complex{1, 0});
  CHECK(j1(0, 1) == Complex{0, 1});
  CHECK(j1(1, 0) == Complex{1, 0});
  CHECK(j1(1, 1) == Complex{0, -1});

  const CMatrix j2 = jm_matrix(2);
  CHECK(j2(0, 0) == Complex{1, 0});
  CHECK(j2(0, 1) == Complex{0, 2});
  CHECK(j2(0, 2) == Complex{-1, 0});

  for (int m = 1; m <= 8; ++m) {
    const CMatrix j = jm_matrix(m);
    for (int k = 0; k <= m; ++k) {
      const auto row = oracles::expand_pm_row(m, k);
      for (int l = 0; l <= m; ++l) {
        CHECK(std::abs(j(k, l) - row[l]) < 1e-12);
      }
    }
  }
}

TEST_CASE("top-order moments match simulation") {
  const ProductModel m{{0.9, -0.6}, {-0.4, 0.7}, 1.1, 0.8, {0.25, -0.4}};
  const long n = 4000000;
  const int idx[][2] = {{4, 3}, {4, 4}, {6, 2}, {8, 0}};
  double sr[4] = {}, si[4] = {}, qr[4] = {}, qi[4] = {};
  for (long i = 0; i < n; ++i) {
    RngStream rng(13579, static_cast<uint64_t>(i));
    const Complex p = sample_product(m, rng);
    Complex pw[9], cw[9];
    pw[0] = cw[0] = {1, 0};
    for (int k = 1; k <= 8; ++k) {
      pw[k] = pw[k - 1] * p;
      cw[k] = cw[k - 1] * std::conj(p);
    }
    for (int t = 0; t < 4; ++t) {
      const Complex v = pw[idx[t][0]] * cw[idx[t][1]];
      sr[t] += v.real();
      si[t] += v.imag();
      qr[t] += v.real() * v.real();
      qi[t] += v.imag() * v.imag();
    }
  }
  for (int t = 0; t < 4; ++t) {
    const Complex exact = complex_moment(m, idx[t][0], idx[t][1]);
    const double mr = sr[t] / n, mi = si[t] / n;
    const double ser = std::sqrt((qr[t] / n - mr * mr) / n);
    const double sei = std::sqrt(std::max(0.0, qi[t] / n - mi * mi) / n);
    const double floor = 1e-10 * std::max(1.0, std::abs(exact));
    CHECK(std::abs(exact.real() - mr) < 5.0 * ser + floor);
    CHECK(std::abs(exact.imag() - mi) < 5.0 * sei + floor);
  }
}

TEST_CASE("real moments: first order and the independent unit case") {
  RngStream rng(11, 0);
  const ProductModel m = random_model(rng);
  const RealMomentTable t = real_moments(m, 4);
  const Complex mu = product_summary(m).mean;
  CHECK(t.at(1, 0) == doctest::Approx(mu.real()).epsilon(1e-10));
  CHECK(t.at(0, 1) == doctest::Approx(mu.imag()).epsilon(1e-10));

  const ProductModel unit{{0, 0}, {0, 0}, 1.0, 1.0, {0, 0}};
  const RealMomentTable u = real_moments(unit, 2);
  CHECK(u.at(2, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(u.at(0, 2) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(u.at(1, 1) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("real moments match 1e7-draw simulation") {
  const auto& st = fig_model_stats();
  const RealMomentTable t = real_moments(fig_model(), 6);
  for (const auto& [ab, value] : t.entries) {
    const auto [a, b] = ab;
    if (a + b == 0) continue;
    // 3 SE through order 4, 4 SE for the heavy-tailed higher orders
    const double gate = (a + b <= 4) ? 3.0 : 4.0;
    CHECK(std::abs(value - st.raw_mean[a][b]) <
          gate * st.raw_se[a][b] + 1e-10 * std::max(1.0, std::abs(value)));
  }
}

TEST_CASE("complex moments reassemble from real moments") {
  RngStream rng(12, 0);
  const ProductModel m = random_model(rng);
  const RealMomentTable t = real_moments(m, 6);
  for (int s = 1; s <= 6; ++s) {
    for (int mm = 0; mm <= s; ++mm) {
      const int nn = s - mm;
      // E[(P1 + i P2)^m (P1 - i P2)^n] expanded binomially
      Complex acc{0, 0};
      for (int a = 0; a <= mm; ++a) {
        for (int b = 0; b <= nn; ++b) {
          const Complex iw = cpow_int(Complex{0, 1}, a) *
                             cpow_int(Complex{0, -1}, b);
          acc += binom(mm, a) * binom(nn, b) * iw *
                 t.at(mm - a + nn - b, a + b);
        }
      }
      const Complex exact = complex_moment(m, mm, nn);
      CHECK(std::abs(acc - exact) <= 1e-9 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("cumulants: covariance trace equals the product variance") {
  RngStream rng(13, 0);
  for (int k = 0; k < 5; ++k) {
    const ProductModel m = random_model(rng);
    const CumulantTable t = cumulants(m, 4);
    const double var = product_summary(m).variance;
    CHECK(t.at(2, 0) + t.at(0, 2) == doctest::Approx(var).epsilon(1e-9));
    CHECK(t.covariance.xx == t.at(2, 0));
    CHECK(t.covariance.xy == t.at(1, 1));
    CHECK(t.covariance.yy == t.at(0, 2));
  }
}

TEST_CASE("gaussian central moments produce vanishing high cumulants") {
  // Feed exact Gaussian central moments through the recursion: every
  // cumulant of order >= 3 must vanish.
  const Mat2 r{1.7, -0.6, 0.9};
  RealMomentTable central;
  central.order = 8;
  for (int a = 0; a <= 8; ++a) {
    for (int b = 0; a + b <= 8; ++b) {
      central.entries[{a, b}] = oracles::gaussian_central_moment(r, a, b);
    }
  }
  const CumulantTable t = cumulants_from_central(central, {0.4, -1.2}, 8);
  for (const auto& [nu, v] : t.entries) {
    if (nu.first + nu.second >= 3) {
      CHECK(std::abs(v) < 1e-9);
    }
  }
  CHECK(t.covariance.xx == doctest::Approx(1.7));
  CHECK(t.covariance.xy == doctest::Approx(-0.6));
  CHECK(t.covariance.yy == doctest::Approx(0.9));
}

TEST_CASE("fourth-order cumulant identity") {
  RngStream rng(14, 0);
  for (int k = 0; k < 5; ++k) {
    const ProductModel m = random_model(rng);
    const RealMomentTable central = central_moments(real_moments(m, 4));
    const CumulantTable t = cumulants(m, 4);
    const double expect = central.at(2, 2) -
                          central.at(2, 0) * central.at(0, 2) -
                          2.0 * sqr(central.at(1, 1));
    CHECK(t.at(2, 2) == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("standardized cumulants shrink toward the gaussian limit") {
  const ProductModel base = fig_model();
  const ProductModel far = base.scaled_means(8.0);
  const auto standardized = [](const ProductModel& m, int n1, int n2) {
    const CumulantTable t = cumulants(m, 4);
    const double sp = std::sqrt(product_summary(m).variance);
    return std::abs(t.at(n1, n2)) / pow_int(sp, n1 + n2);
  };
  for (const auto& [n1, n2] : {std::pair{3, 0}, {2, 1}, {1, 2}, {0, 3},
                              {4, 0}, {2, 2}, {0, 4}}) {
    const double near_val = standardized(base, n1, n2);
    const double far_val = standardized(far, n1, n2);
    if (near_val > 1e-6) {
      CHECK(far_val * 4.0 <= near_val);
    }
  }
}

TEST_CASE("order bounds are enforced") {
  const ProductModel m{{0, 0}, {0, 0}, 1.0, 1.0, {0, 0}};
  CHECK_THROWS_AS(complex_moment(m, 5, 4), std::invalid_argument);
  CHECK_THROWS_AS(jm_matrix(0), std::invalid_argument);
  CHECK_THROWS_AS(jm_matrix(9), std::invalid_argument);
  CHECK_THROWS_AS(real_moments(m, 0), std::invalid_argument);
  CHECK_THROWS_AS(cumulants(m, 1), std::invalid_argument);
  CHECK_THROWS_AS(cumulants(m, 9), std::invalid_argument);
}
