#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "trdet/edgeworth.hpp"
#include "trdet/montecarlo.hpp"

using namespace trdet;
using oracles::fig_model;

namespace {

CumulantTable unit_gaussian_table() {
  CumulantTable t;
  t.order = 2;
  t.mean = {0.0, 0.0};
  t.covariance = Mat2{1.0, 0.0, 1.0};
  t.entries[{2, 0}] = 1.0;
  t.entries[{1, 1}] = 0.0;
  t.entries[{0, 2}] = 1.0;
  return t;
}

}  // namespace

TEST_CASE("gaussian pdf closed-form values and normalization") {
  const EdgeworthModel unit(unit_gaussian_table(), 2);
  CHECK(unit.gaussian_pdf(0, 0) == doctest::Approx(1.0 / kTwoPi).epsilon(1e-14));
  CHECK(unit.gaussian_pdf(1, 1) ==
        doctest::Approx(std::exp(-1.0) / kTwoPi).epsilon(1e-14));

  const EdgeworthModel fig = build_edgeworth(fig_model(), 2);
  const double span = 8.0 * std::sqrt(std::max(fig.covariance().xx,
                                               fig.covariance().yy));
  const double mass = oracles::simpson2d(
      [&](double a, double b) { return fig.gaussian_pdf(a, b); },
      fig.mean()[0] - span, fig.mean()[0] + span, fig.mean()[1] - span,
      fig.mean()[1] + span, 300, 300);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("precision is the covariance inverse") {
  const EdgeworthModel m = build_edgeworth(fig_model(), 6);
  const Mat2& r = m.covariance();
  const Mat2& b = m.precision();
  CHECK(std::abs(r.xx * b.xx + r.xy * b.xy - 1.0) < 1e-10);
  CHECK(std::abs(r.xy * b.xy + r.yy * b.yy - 1.0) < 1e-10);
  CHECK(std::abs(r.xx * b.xy + r.xy * b.yy) < 1e-10);
}

TEST_CASE("hermite polynomials: unit-covariance closed forms") {
  const EdgeworthModel unit(unit_gaussian_table(), 2);
  for (double p1 : {-1.3, 0.0, 0.8}) {
    for (double p2 : {-0.4, 1.9}) {
      CHECK(hermite(unit, 0, 0, p1, p2) == 1.0);
      CHECK(hermite(unit, 1, 0, p1, p2) == doctest::Approx(p1).epsilon(1e-14));
      CHECK(hermite(unit, 2, 0, p1, p2) ==
            doctest::Approx(p1 * p1 - 1.0).epsilon(1e-13));
      CHECK(hermite(unit, 1, 1, p1, p2) ==
            doctest::Approx(p1 * p2).epsilon(1e-13));
    }
  }
}

TEST_CASE("hermite times gaussian equals derivatives of the gaussian") {
  CumulantTable t;
  t.order = 2;
  t.mean = {0.3, -0.2};
  t.covariance = Mat2{1.4, 0.5, 0.9};
  t.entries[{2, 0}] = 1.4;
  t.entries[{1, 1}] = 0.5;
  t.entries[{0, 2}] = 0.9;
  const EdgeworthModel m(t, 2);
  const oracles::GaussLD phi{0.3L, -0.2L, 1.4L, 0.5L, 0.9L};
  const auto phi_d = [&](double a, double b) {
    return static_cast<double>(phi(a, b));
  };

  const double pts[][2] = {{0.7, 0.1}, {-0.5, -0.9}, {1.1, -0.6}};

  // third order with the plain 1e-3 step
  for (const auto& p : pts) {
    for (int n1 = 0; n1 <= 3; ++n1) {
      const int n2 = 3 - n1;
      const double fd =
          oracles::finite_difference(phi, n1, n2, p[0], p[1], 1e-3);
      const double exact = -hermite(m, n1, n2, p[0], p[1]) * phi_d(p[0], p[1]);
      CHECK(std::abs(fd - exact) <=
            1e-4 * std::max({std::abs(fd), std::abs(exact), 1e-8}));
    }
  }

  // all orders up to six, step scaled per order
  for (const auto& p : pts) {
    for (int order = 1; order <= 6; ++order) {
      const double h = order <= 3 ? 1e-3 : 0.03;
      for (int n1 = 0; n1 <= order; ++n1) {
        const int n2 = order - n1;
        const double fd =
            oracles::finite_difference(phi, n1, n2, p[0], p[1], h);
        const double sign = (order % 2 == 0) ? 1.0 : -1.0;
        const double exact =
            sign * hermite(m, n1, n2, p[0], p[1]) * phi_d(p[0], p[1]);
        CHECK(std::abs(fd - exact) <=
              1e-4 * std::max({std::abs(fd), std::abs(exact), 1e-7}));
      }
    }
  }
}

TEST_CASE("series polynomials: first two orders in closed form") {
  const CumulantTable t = cumulants(fig_model(), 6);
  const auto chi = [&](int s) {
    Poly2 p;
    double fact_s = 1.0;
    for (int k = 2; k <= s; ++k) fact_s *= k;
    for (int n1 = 0; n1 <= s; ++n1) {
      const int n2 = s - n1;
      double f1 = 1.0, f2 = 1.0;
      for (int k = 2; k <= n1; ++k) f1 *= k;
      for (int k = 2; k <= n2; ++k) f2 *= k;
      p.add_term(n1, n2, fact_s / (f1 * f2) * t.at(n1, n2));
    }
    return p;
  };

  const Poly2 l1 = cramer_edgeworth(1, t);
  const Poly2 expect1 = chi(3).scaled(1.0 / 6.0);
  for (const auto& [k, v] : expect1.terms()) {
    CHECK(l1.coeff(k.first, k.second) == doctest::Approx(v).epsilon(1e-12));
  }

  const Poly2 l2 = cramer_edgeworth(2, t);
  const Poly2 chi3 = chi(3);
  Poly2 expect2 = chi(4).scaled(1.0 / 24.0);
  expect2 += (chi3 * chi3).scaled(1.0 / 72.0);
  for (const auto& [k, v] : expect2.terms()) {
    CHECK(l2.coeff(k.first, k.second) == doctest::Approx(v).epsilon(1e-12));
  }
  for (const auto& [k, v] : l2.terms()) {
    CHECK(expect2.coeff(k.first, k.second) == doctest::Approx(v).epsilon(1e-12));
  }
}

TEST_CASE("hermite factorizes over a diagonal covariance up to order 8") {
  // For diagonal R the bivariate polynomials split into univariate
  // probabilists' Hermite polynomials of the standardized coordinates.
  const double v1 = 1.7, v2 = 0.6;
  CumulantTable t;
  t.order = 2;
  t.mean = {0.4, -1.1};
  t.covariance = Mat2{v1, 0.0, v2};
  t.entries[{2, 0}] = v1;
  t.entries[{1, 1}] = 0.0;
  t.entries[{0, 2}] = v2;
  const EdgeworthModel m(t, 2);

  // He_0 = 1, He_1 = x, He_n = x He_{n-1} - (n-1) He_{n-2}
  const auto he = [](int n, double x) {
    double a = 1.0, b = x;
    if (n == 0) return a;
    for (int k = 2; k <= n; ++k) {
      const double c = x * b - (k - 1) * a;
      a = b;
      b = c;
    }
    return b;
  };
  const double s1 = std::sqrt(v1), s2 = std::sqrt(v2);
  for (const auto& p : {std::pair{1.3, -0.2}, {-0.7, 0.9}, {2.1, -2.4}}) {
    for (int a = 0; a <= 8; ++a) {
      for (int b = 0; a + b <= 8; ++b) {
        const double y1 = (p.first - t.mean[0]) / s1;
        const double y2 = (p.second - t.mean[1]) / s2;
        const double expect =
            he(a, y1) * he(b, y2) / (pow_int(s1, a) * pow_int(s2, b));
        const double got = hermite(m, a, b, p.first, p.second);
        CHECK(got == doctest::Approx(expect).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("third series polynomial closed form") {
  const CumulantTable t = cumulants(fig_model(), 6);
  const auto chi = [&](int s) {
    Poly2 p;
    double fact_s = 1.0;
    for (int k = 2; k <= s; ++k) fact_s *= k;
    for (int n1 = 0; n1 <= s; ++n1) {
      const int n2 = s - n1;
      double f1 = 1.0, f2 = 1.0;
      for (int k = 2; k <= n1; ++k) f1 *= k;
      for (int k = 2; k <= n2; ++k) f2 *= k;
      p.add_term(n1, n2, fact_s / (f1 * f2) * t.at(n1, n2));
    }
    return p;
  };
  // L3 = chi5/5! + chi3 chi4 / (3! 4!) + chi3^3 / (6 (3!)^3)
  const Poly2 chi3 = chi(3);
  Poly2 expect = chi(5).scaled(1.0 / 120.0);
  expect += (chi3 * chi(4)).scaled(1.0 / 144.0);
  expect += (chi3 * chi3 * chi3).scaled(1.0 / 1296.0);
  const Poly2 l3 = cramer_edgeworth(3, t);
  for (const auto& [k, v] : expect.terms()) {
    CHECK(l3.coeff(k.first, k.second) == doctest::Approx(v).epsilon(1e-11));
  }
  for (const auto& [k, v] : l3.terms()) {
    CHECK(expect.coeff(k.first, k.second) == doctest::Approx(v).epsilon(1e-11));
  }
}

TEST_CASE("series polynomials vanish for gaussian cumulants") {
  CumulantTable t = unit_gaussian_table();
  t.order = 8;
  for (int s = 3; s <= 8; ++s) {
    for (int n1 = 0; n1 <= s; ++n1) t.entries[{n1, s - n1}] = 0.0;
  }
  for (int j = 1; j <= 6; ++j) {
    CHECK(cramer_edgeworth(j, t).is_zero());
  }
}

TEST_CASE("series polynomial degree and parity structure") {
  const CumulantTable t = cumulants(fig_model(), 8);
  for (int j = 1; j <= 6; ++j) {
    const Poly2 lj = cramer_edgeworth(j, t);
    CHECK(!lj.is_zero());
    CHECK(lj.degree() == 3 * j);
    for (const auto& [k, v] : lj.terms()) {
      (void)v;
      const int deg = k.first + k.second;
      CHECK(deg >= j + 2);
      CHECK((deg - j) % 2 == 0);
    }
  }
  CHECK_THROWS_AS(cramer_edgeworth(7, t), std::invalid_argument);
}

TEST_CASE("order two reproduces the gaussian exactly") {
  const EdgeworthModel m = build_edgeworth(fig_model(), 2);
  RngStream rng(4242, 0);
  for (int k = 0; k < 50; ++k) {
    const double p1 = m.mean()[0] + 12.0 * (rng.uniform() - 0.5);
    const double p2 = m.mean()[1] + 12.0 * (rng.uniform() - 0.5);
    CHECK(m.edgeworth_pdf(p1, p2) == m.gaussian_pdf(p1, p2));
  }
}

TEST_CASE("series density integrates to one") {
  for (int s : {2, 4, 6}) {
    const EdgeworthModel m = build_edgeworth(fig_model(), s);
    const double sp = std::sqrt(product_summary(fig_model()).variance);
    const double span = 10.0 * sp;
    const double mass = oracles::simpson2d(
        [&](double a, double b) { return m.edgeworth_pdf(a, b); },
        m.mean()[0] - span, m.mean()[0] + span, m.mean()[1] - span,
        m.mean()[1] + span, 400, 400);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("series density reproduces low-order moments") {
  const EdgeworthModel m = build_edgeworth(fig_model(), 6);
  const RealMomentTable t = real_moments(fig_model(), 4);
  const double sp = std::sqrt(product_summary(fig_model()).variance);
  const double span = 12.0 * sp;
  for (int a = 0; a <= 4; ++a) {
    for (int b = 0; a + b <= 4; ++b) {
      const double got = oracles::simpson2d(
          [&](double p1, double p2) {
            return pow_int(p1, a) * pow_int(p2, b) * m.edgeworth_pdf(p1, p2);
          },
          m.mean()[0] - span, m.mean()[0] + span, m.mean()[1] - span,
          m.mean()[1] + span, 500, 500);
      const double expect = t.at(a, b);
      CHECK(std::abs(got - expect) <= 1e-3 * std::max(1.0, std::abs(expect)));
    }
  }
}

TEST_CASE("pipeline: independent unit model at order two") {
  const ProductModel unit{{0, 0}, {0, 0}, 1.0, 1.0, {0, 0}};
  const EdgeworthModel m = build_edgeworth(unit, 2);
  CHECK(m.mean()[0] == doctest::Approx(0.0));
  CHECK(m.mean()[1] == doctest::Approx(0.0));
  CHECK(m.covariance().xx == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(m.covariance().yy == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(m.covariance().xy == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("series fit error shrinks with order and with larger means") {
  const long n = 200000;
  const auto fit_mse = [&](const ProductModel& model, int s) {
    const EdgeworthModel em = build_edgeworth(model, s);
    const auto samples = draw_products(model, n, 777001ull);
    const EstimatorSpec spec;
    return mse([&](Complex p) { return em.edgeworth_pdf(p.real(), p.imag()); },
               samples, spec)
        .mse;
  };
  const double mse3 = fit_mse(fig_model(), 3);
  const double mse6 = fit_mse(fig_model(), 6);
  CHECK(mse6 < mse3);
  CHECK(mse6 < 1e-5);

  // Larger means push the product toward its gaussian limit.
  const EdgeworthModel base = build_edgeworth(fig_model(), 6);
  const EdgeworthModel far = build_edgeworth(fig_model().scaled_means(4.0), 6);
  const auto sup_gap = [](const EdgeworthModel& m) {
    const double s1 = std::sqrt(m.covariance().xx);
    const double s2 = std::sqrt(m.covariance().yy);
    double sup = 0.0, sup_phi = 0.0;
    for (int i = -20; i <= 20; ++i) {
      for (int j = -20; j <= 20; ++j) {
        const double p1 = m.mean()[0] + 0.2 * i * s1;
        const double p2 = m.mean()[1] + 0.2 * j * s2;
        sup = std::max(sup, std::abs(m.edgeworth_pdf(p1, p2) -
                                     m.gaussian_pdf(p1, p2)));
        sup_phi = std::max(sup_phi, m.gaussian_pdf(p1, p2));
      }
    }
    return sup / sup_phi;
  };
  CHECK(sup_gap(far) * 2.0 <= sup_gap(base));
}

TEST_CASE("floored evaluation brackets the raw series") {
  const EdgeworthModel m = build_edgeworth(fig_model(), 6);
  RngStream rng(77, 0);
  bool saw_floor = false;
  for (int k = 0; k < 4000; ++k) {
    const double p1 = m.mean()[0] + 30.0 * (rng.uniform() - 0.5);
    const double p2 = m.mean()[1] + 30.0 * (rng.uniform() - 0.5);
    const double raw = m.edgeworth_pdf(p1, p2);
    const double phi = m.gaussian_pdf(p1, p2);
    const double floored = m.edgeworth_pdf_floored(p1, p2, 0.01);
    CHECK(floored >= 0.0);
    if (raw >= 0.01 * phi) {
      CHECK(floored == raw);
    } else {
      CHECK(floored == 0.01 * phi);
      saw_floor = true;
    }
  }
  CHECK(saw_floor);  // the raw series does dip below the floor in the tails

  // order 2 has no correction to floor
  const EdgeworthModel gauss = build_edgeworth(fig_model(), 2);
  CHECK(gauss.edgeworth_pdf_floored(1.0, 2.0, 0.01) ==
        gauss.gaussian_pdf(1.0, 2.0));
}

TEST_CASE("even cumulants give a symmetric density") {
  CumulantTable t;
  t.order = 6;
  t.mean = {0.7, -0.3};
  t.covariance = Mat2{1.1, 0.2, 0.8};
  for (int s = 2; s <= 6; ++s) {
    for (int n1 = 0; n1 <= s; ++n1) t.entries[{n1, s - n1}] = 0.0;
  }
  t.entries[{2, 0}] = 1.1;
  t.entries[{1, 1}] = 0.2;
  t.entries[{0, 2}] = 0.8;
  t.entries[{4, 0}] = 0.3;
  t.entries[{2, 2}] = 0.1;
  t.entries[{0, 4}] = 0.25;
  t.entries[{6, 0}] = 0.05;
  t.entries[{3, 3}] = -0.02;
  const EdgeworthModel m(t, 6);
  RngStream rng(5, 5);
  for (int k = 0; k < 30; ++k) {
    const double d1 = 3.0 * (rng.uniform() - 0.5);
    const double d2 = 3.0 * (rng.uniform() - 0.5);
    const double plus = m.edgeworth_pdf(t.mean[0] + d1, t.mean[1] + d2);
    const double minus = m.edgeworth_pdf(t.mean[0] - d1, t.mean[1] - d2);
    CHECK(plus == doctest::Approx(minus).epsilon(1e-12));
  }
}
