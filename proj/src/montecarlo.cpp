#include "trdet/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace trdet {

namespace {

// Static partition of [0, n) across workers; fn(begin, end) per chunk.
// Results must be written to disjoint, index-addressed storage.
void run_partitioned(long n, int workers,
                     const std::function<void(long, long)>& fn) {
  workers = std::max(1, workers);
  if (workers == 1 || n < 2L * workers) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const long chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long b = w * chunk;
    const long e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back(fn, b, e);
  }
  for (auto& t : pool) t.join();
}

}  // namespace

std::pair<Complex, Complex> sample_channel_pair(double clutter_psd,
                                                Complex rho_c, RngStream& rng) {
  if (!(clutter_psd > 0.0) || std::abs(rho_c) >= 1.0) {
    throw std::invalid_argument("sample_channel_pair: invalid parameters");
  }
  const Complex a = rng.cgauss();
  const Complex b = rng.cgauss();
  const double root = std::sqrt(clutter_psd);
  const Complex cp = root * a;
  const Complex cr =
      root * (std::conj(rho_c) * a + std::sqrt(1.0 - std::norm(rho_c)) * b);
  return {cp, cr};
}

std::vector<Complex> simulate_trial(const Scenario& s, Complex true_target,
                                    RngStream& rng) {
  const int q = s.bins;
  const double probe = std::sqrt(s.tx_energy / q);
  const double noise_sd = std::sqrt(s.noise_psd);
  std::vector<Complex> z(q), cr(q), vr(q);
  double energy = 0.0;
  for (int i = 0; i < q; ++i) {
    const auto [cp, cri] = sample_channel_pair(s.clutter_psd, s.channel_corr, rng);
    const Complex vp = noise_sd * rng.cgauss();
    vr[i] = noise_sd * rng.cgauss();
    cr[i] = cri;
    z[i] = (true_target + cp) * probe + vp;
    energy += std::norm(z[i]);
  }
  const double k = std::sqrt(s.tx_energy / energy);
  std::vector<Complex> out(q);
  for (int i = 0; i < q; ++i) {
    out[i] = (true_target + cr[i]) * k * std::conj(z[i]) + vr[i];
  }
  return out;
}

Complex sample_product(const ProductModel& m, RngStream& rng) {
  const Complex a = rng.cgauss();
  const Complex b = rng.cgauss();
  const Complex x = m.mu_x() + m.sigma_x() * a;
  const Complex y =
      m.mu_y() + m.sigma_y() * (std::conj(m.rho()) * a +
                                std::sqrt(1.0 - std::norm(m.rho())) * b);
  return x * std::conj(y);
}

std::vector<Complex> draw_products(const ProductModel& m, long n,
                                   uint64_t seed, int workers) {
  std::vector<Complex> out(n);
  run_partitioned(n, workers, [&](long b, long e) {
    for (long i = b; i < e; ++i) {
      RngStream rng(seed, static_cast<uint64_t>(i));
      out[i] = sample_product(m, rng);
    }
  });
  return out;
}

std::pair<double, double> wilson_interval(long successes, long n) {
  if (n <= 0) throw std::invalid_argument("wilson_interval: n must be > 0");
  const double z = 1.959963984540054;
  const double z2 = z * z;
  const double phat = static_cast<double>(successes) / n;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  // Clamp so the interval always brackets the point estimate.
  return {std::min(phat, std::max(0.0, center - half)),
          std::max(phat, std::min(1.0, center + half))};
}

RocCurve roc_from_statistics(std::vector<double> h0_stats,
                             std::vector<double> h1_stats) {
  if (h0_stats.empty() || h1_stats.empty() ||
      h0_stats.size() != h1_stats.size()) {
    throw std::invalid_argument("roc: needs equal, non-empty statistic sets");
  }
  const long n = static_cast<long>(h0_stats.size());
  std::sort(h0_stats.begin(), h0_stats.end());
  std::sort(h1_stats.begin(), h1_stats.end());
  std::vector<double> thresholds;
  thresholds.reserve(2 * n);
  thresholds.insert(thresholds.end(), h0_stats.begin(), h0_stats.end());
  thresholds.insert(thresholds.end(), h1_stats.begin(), h1_stats.end());
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  RocCurve curve;
  curve.n_trials = static_cast<int>(n);
  curve.points.reserve(thresholds.size() + 2);
  const auto exceed = [n](const std::vector<double>& sorted, double thr) {
    return n - (std::upper_bound(sorted.begin(), sorted.end(), thr) -
                sorted.begin());
  };
  const auto push = [&](double thr, long fa, long det) {
    const auto [falo, fahi] = wilson_interval(fa, n);
    const auto [dlo, dhi] = wilson_interval(det, n);
    curve.points.push_back(RocPoint{thr, static_cast<double>(fa) / n,
                                    static_cast<double>(det) / n, falo, fahi,
                                    dlo, dhi});
  };
  push(std::numeric_limits<double>::infinity(), 0, 0);
  for (const double thr : thresholds) {
    push(thr, exceed(h0_stats, thr), exceed(h1_stats, thr));
  }
  push(-std::numeric_limits<double>::infinity(), n, n);
  return curve;
}

std::pair<std::vector<double>, std::vector<double>> detection_statistics(
    const Scenario& s, DetectorKind kind, int n_trials, int order,
    uint64_t seed, int workers) {
  if (n_trials < 1) {
    throw std::invalid_argument("detection_statistics: n_trials must be >= 1");
  }
  const HypothesisModels models = hypothesis_models(s, kind, order);
  std::vector<double> h0(n_trials), h1(n_trials);
  run_partitioned(n_trials, workers, [&](long b, long e) {
    for (long i = b; i < e; ++i) {
      RngStream rng0(seed, 2 * static_cast<uint64_t>(i));
      RngStream rng1(seed, 2 * static_cast<uint64_t>(i) + 1);
      const auto obs0 = simulate_trial(s, Complex{0.0, 0.0}, rng0);
      const auto obs1 = simulate_trial(s, s.target, rng1);
      h0[i] = llr_statistic(models, obs0);
      h1[i] = llr_statistic(models, obs1);
    }
  });
  return {std::move(h0), std::move(h1)};
}

RocCurve roc(const Scenario& s, DetectorKind kind, int n_trials, int order,
             uint64_t seed, int workers) {
  if (n_trials < 100) {
    throw std::invalid_argument("roc: n_trials must be >= 100");
  }
  auto [h0, h1] = detection_statistics(s, kind, n_trials, order, seed, workers);
  return roc_from_statistics(std::move(h0), std::move(h1));
}

OperatingPoint pd_at_pfa(const RocCurve& curve, double pfa) {
  // Points are sorted by descending threshold, so pfa is non-decreasing;
  // take the last point that still satisfies the false-alarm budget.
  const RocPoint* best = nullptr;
  for (const RocPoint& pt : curve.points) {
    if (pt.pfa <= pfa) best = &pt;
  }
  if (best == nullptr) best = &curve.points.front();
  return OperatingPoint{best->threshold, best->pfa, best->pd,
                        std::lround(best->pd * curve.n_trials)};
}

EmpiricalPdf EmpiricalPdf::build(std::span<const Complex> samples,
                                 const EstimatorSpec& spec) {
  if (samples.size() < 10000) {
    throw std::invalid_argument("EmpiricalPdf: needs at least 1e4 samples");
  }
  EmpiricalPdf pdf;
  pdf.spec_ = spec;
  pdf.n_ = static_cast<long>(samples.size());
  double mn1 = samples[0].real(), mx1 = mn1;
  double mn2 = samples[0].imag(), mx2 = mn2;
  for (const Complex& p : samples) {
    mn1 = std::min(mn1, p.real());
    mx1 = std::max(mx1, p.real());
    mn2 = std::min(mn2, p.imag());
    mx2 = std::max(mx2, p.imag());
  }
  if (!(mx1 > mn1) || !(mx2 > mn2)) {
    throw std::invalid_argument("EmpiricalPdf: degenerate samples");
  }
  pdf.min1_ = mn1;
  pdf.max1_ = mx1;
  pdf.min2_ = mn2;
  pdf.max2_ = mx2;

  if (spec.kind == EstimatorKind::Histogram2D) {
    const double m1 = spec.box_margin * (mx1 - mn1);
    const double m2 = spec.box_margin * (mx2 - mn2);
    pdf.lo1_ = mn1 - 0.5 * m1;
    pdf.lo2_ = mn2 - 0.5 * m2;
    pdf.w1_ = (mx1 - mn1 + m1) / spec.bins1;
    pdf.w2_ = (mx2 - mn2 + m2) / spec.bins2;
    std::vector<long> counts(static_cast<size_t>(spec.bins1) * spec.bins2, 0);
    for (const Complex& p : samples) {
      const int i1 = std::min(spec.bins1 - 1,
                              static_cast<int>((p.real() - pdf.lo1_) / pdf.w1_));
      const int i2 = std::min(spec.bins2 - 1,
                              static_cast<int>((p.imag() - pdf.lo2_) / pdf.w2_));
      ++counts[static_cast<size_t>(i1) * spec.bins2 + i2];
    }
    const double cell_area = pdf.w1_ * pdf.w2_;
    pdf.cells_.resize(counts.size());
    for (size_t i = 0; i < counts.size(); ++i) {
      pdf.cells_[i] = static_cast<double>(counts[i]) / (pdf.n_ * cell_area);
    }
  } else {
    // Gaussian product kernel, Silverman bandwidth h_i = sigma_i n^(-1/6).
    double s1 = 0, s2 = 0, q1 = 0, q2 = 0;
    for (const Complex& p : samples) {
      s1 += p.real();
      s2 += p.imag();
      q1 += sqr(p.real());
      q2 += sqr(p.imag());
    }
    const double var1 = q1 / pdf.n_ - sqr(s1 / pdf.n_);
    const double var2 = q2 / pdf.n_ - sqr(s2 / pdf.n_);
    if (!(var1 > 0.0) || !(var2 > 0.0)) {
      throw std::invalid_argument("EmpiricalPdf: degenerate samples");
    }
    const double factor = std::pow(static_cast<double>(pdf.n_), -1.0 / 6.0);
    pdf.h1_ = std::sqrt(var1) * factor;
    pdf.h2_ = std::sqrt(var2) * factor;
    pdf.kde_samples_.assign(samples.begin(), samples.end());
  }
  return pdf;
}

double EmpiricalPdf::density(double p1, double p2) const {
  if (spec_.kind == EstimatorKind::Histogram2D) {
    const int i1 = static_cast<int>(std::floor((p1 - lo1_) / w1_));
    const int i2 = static_cast<int>(std::floor((p2 - lo2_) / w2_));
    if (i1 < 0 || i1 >= spec_.bins1 || i2 < 0 || i2 >= spec_.bins2) return 0.0;
    return cells_[static_cast<size_t>(i1) * spec_.bins2 + i2];
  }
  double s = 0.0;
  for (const Complex& q : kde_samples_) {
    const double u1 = (p1 - q.real()) / h1_;
    const double u2 = (p2 - q.imag()) / h2_;
    s += std::exp(-0.5 * (u1 * u1 + u2 * u2));
  }
  return s / (static_cast<double>(n_) * kTwoPi * h1_ * h2_);
}

double EmpiricalPdf::total_mass() const {
  if (spec_.kind != EstimatorKind::Histogram2D) {
    throw std::logic_error("total_mass: histogram estimator only");
  }
  double m = 0.0;
  for (const double d : cells_) m += d;
  return m * w1_ * w2_;
}

MseReport mse(const std::function<double(Complex)>& approx,
              std::span<const Complex> samples, const EstimatorSpec& spec) {
  const EmpiricalPdf empirical = EmpiricalPdf::build(samples, spec);
  double acc = 0.0;
  for (const Complex& p : samples) {
    acc += sqr(approx(p) - empirical.density(p));
  }
  return MseReport{acc / static_cast<double>(samples.size()),
                   static_cast<long>(samples.size()), spec};
}

}  // namespace trdet
