#include "trdet/cf_invert.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "trdet/bessel.hpp"

namespace trdet {

namespace {

// Filon moments m_k = \int_0^L x^k exp(-i w x) dx for k = 0, 1, 2.
struct FilonMoments {
  Complex m0, m1, m2;
};

FilonMoments filon_moments(double w, double len) {
  const Complex alpha{0.0, -w};
  if (std::abs(w) * len < 0.5) {
    // Series in (alpha L); converges to machine precision in ~20 terms.
    Complex m[3];
    for (int k = 0; k < 3; ++k) {
      Complex term{1.0, 0.0};
      Complex sum = term / static_cast<double>(k + 1);
      for (int j = 1; j < 24; ++j) {
        term *= alpha * len / static_cast<double>(j);
        sum += term / static_cast<double>(k + j + 1);
      }
      m[k] = pow_int(len, k + 1) * sum;
    }
    return {m[0], m[1], m[2]};
  }
  const Complex e = std::exp(alpha * len);
  const Complex m0 = (e - 1.0) / alpha;
  const Complex m1 = (len * e - m0) / alpha;
  const Complex m2 = (len * len * e - 2.0 * m1) / alpha;
  return {m0, m1, m2};
}

}  // namespace

double cf_invert_pdf(const ProductModel& m, Complex p,
                     const QuadratureSpec& spec) {
  if (p == Complex{0.0, 0.0}) {
    throw std::domain_error("cf_invert_pdf: density is singular at p = 0");
  }
  const double sx = m.sigma_x();
  const double sy = m.sigma_y();
  const double c2 = sqr(sx * sy) * (1.0 - std::norm(m.rho()));
  const double a = std::norm(m.mu_x()) * sqr(sy) + std::norm(m.mu_y()) * sqr(sx);
  const double b = sx * sy * std::real(std::conj(m.mu_x()) * m.mu_y() * m.rho());
  // Far field: psi(t) -> amp * 4 / (c2 |t|^2).
  const double amp = std::exp(-(a - 2.0 * b) / c2);
  const double t_scale = 1.0 / std::sqrt(c2);
  const double tail_scale = amp * 4.0 / c2;
  const double pabs = std::abs(p);
  const double parg = std::arg(p);

  // For zero-mean models the next far-field order, a first angular harmonic
  // decaying like |t|^-3, is also removed; its inversion is a |p| K0 kernel.
  const bool harmonic = m.zero_mean() && std::abs(m.rho()) > 0.0;
  const double beta = sx * sy * std::abs(m.rho());
  const double phi_rho = harmonic ? std::arg(m.rho()) : 0.0;
  const auto psi0 = [&](double r) { return 1.0 / (1.0 + 0.25 * c2 * r * r); };

  const auto subtracted = [&](double r, double theta) -> Complex {
    Complex s{tail_scale / (t_scale * t_scale + r * r), 0.0};
    if (harmonic) {
      const double p0 = psi0(r);
      s += Complex{0.0, beta * r * p0 * p0 * std::cos(theta - phi_rho)};
    }
    return s;
  };
  const auto boundary_rem = [&](double radius) {
    double worst = 0.0;
    for (int j = 0; j < 32; ++j) {
      const double theta = kTwoPi * j / 32.0;
      worst = std::max(worst, std::abs(char_fn(m, std::polar(radius, theta)) -
                                       subtracted(radius, theta)));
    }
    return worst;
  };

  double radius = spec.max_radius;
  if (radius > 0.0) {
    if (boundary_rem(radius) > spec.tail_tolerance) {
      throw NumericalError(
          "cf_invert_pdf: integrand tail exceeds tolerance at max_radius");
    }
  } else {
    radius = 16.0 * t_scale;
    while (boundary_rem(radius) > spec.tail_tolerance) {
      radius *= 1.4;
      if (radius > 2e5 * t_scale) {
        throw NumericalError("cf_invert_pdf: tail tolerance unreachable");
      }
    }
  }

  double step = spec.radial_step;
  if (step <= 0.0) {
    step = 0.008 * t_scale;
    if (a > 0.0) step = std::min(step, 0.1 / std::sqrt(a));
    const double mu_rate = std::abs(m.mu_x()) * std::abs(m.mu_y());
    if (mu_rate > 0.0) step = std::min(step, kTwoPi / (48.0 * mu_rate));
  }
  const long panels = std::max(4L, std::lround(std::ceil(radius / (2.0 * step))));
  const double h = radius / (2.0 * static_cast<double>(panels));

  // Angular bandwidth grows like r |p|; resolve the largest radius.
  long m_nodes = std::max<long>(spec.min_angular_nodes,
                                std::lround(std::ceil(1.4 * radius * pabs)) + 64);
  m_nodes += m_nodes % 2;

  // Half circle: theta and theta + pi give conjugate contributions.
  double total = 0.0;
  std::vector<Complex> g(2 * panels + 1);
  for (long j = 0; j < m_nodes / 2; ++j) {
    const double theta = kTwoPi * static_cast<double>(j) / m_nodes;
    const double w = pabs * std::cos(theta - parg);
    const auto [f0, f1, f2] = filon_moments(w, 2.0 * h);
    for (long i = 0; i <= 2 * panels; ++i) {
      const double r = h * static_cast<double>(i);
      g[i] = r * (char_fn(m, std::polar(r, theta)) - subtracted(r, theta));
    }
    Complex acc{0.0, 0.0};
    for (long k = 0; k < panels; ++k) {
      const Complex g0 = g[2 * k], g1 = g[2 * k + 1], g2 = g[2 * k + 2];
      const Complex lin = (-3.0 * g0 + 4.0 * g1 - g2) / (2.0 * h);
      const Complex quad = (g0 - 2.0 * g1 + g2) / (2.0 * h * h);
      const Complex panel_value = g0 * f0 + lin * f1 + quad * f2;
      acc += std::polar(1.0, -w * (2.0 * h * static_cast<double>(k))) * panel_value;
    }
    total += 2.0 * acc.real();
  }

  double analytic = tail_scale * bessel_k0(t_scale * pabs) / kTwoPi;
  if (harmonic) {
    analytic += beta * std::cos(phi_rho - parg) * 8.0 * pabs /
                (kTwoPi * c2 * c2) * bessel_k0(2.0 * pabs / std::sqrt(c2));
  }
  // (2 pi)^-2 * (2 pi / M) * sum over all M angular nodes
  return analytic + total / (kTwoPi * static_cast<double>(m_nodes));
}

}  // namespace trdet
