#include "trdet/detector.hpp"

#include <cmath>
#include <stdexcept>

namespace trdet {

Scenario::Scenario(Complex target_, double clutter_psd_, double noise_psd_,
                   double tx_energy_, int bins_, Complex channel_corr_)
    : target(target_),
      clutter_psd(clutter_psd_),
      noise_psd(noise_psd_),
      tx_energy(tx_energy_),
      bins(bins_),
      channel_corr(channel_corr_) {
  if (!is_finite(target) || !is_finite(channel_corr) ||
      !std::isfinite(clutter_psd) || !std::isfinite(noise_psd) ||
      !std::isfinite(tx_energy)) {
    throw std::invalid_argument("Scenario: non-finite parameter");
  }
  if (!(clutter_psd > 0.0)) {
    throw std::invalid_argument("Scenario: clutter_psd must be > 0");
  }
  if (noise_psd < 0.0) {
    throw std::invalid_argument("Scenario: noise_psd must be >= 0");
  }
  if (!(tx_energy > 0.0)) {
    throw std::invalid_argument("Scenario: tx_energy must be > 0");
  }
  if (bins < 1) throw std::invalid_argument("Scenario: bins must be >= 1");
  if (std::abs(channel_corr) >= 1.0) {
    throw std::invalid_argument("Scenario: requires |channel_corr| < 1");
  }
}

Complex effective_rho(const Scenario& s) {
  const double atten =
      std::sqrt(1.0 + s.noise_psd * s.bins / (s.clutter_psd * s.tx_energy));
  return std::conj(s.channel_corr) / atten;
}

double scr_to_pc(double scr_db, Complex target) {
  const double t2 = std::norm(target);
  if (!(t2 > 0.0)) throw std::invalid_argument("scr_to_pc: requires |T| > 0");
  return t2 * std::pow(10.0, -scr_db / 10.0);
}

double snr_to_noise(double snr_db, Complex target, double tx_energy, int bins) {
  const double t2 = std::norm(target);
  if (!(t2 > 0.0)) throw std::invalid_argument("snr_to_noise: requires |T| > 0");
  return tx_energy * t2 * std::pow(10.0, -snr_db / 10.0) / bins;
}

double deterministic_k(const Scenario& s, Complex target) {
  const double expected_energy =
      (std::norm(target) + s.clutter_psd) * s.tx_energy +
      s.bins * s.noise_psd;
  return std::sqrt(s.tx_energy / expected_energy);
}

HypothesisModels hypothesis_models(const Scenario& s, DetectorKind kind,
                                   int order) {
  const Complex rho = kind == DetectorKind::IndependentBaseline
                          ? Complex{0.0, 0.0}
                          : effective_rho(s);
  const double es_per_bin = s.tx_energy / s.bins;
  const double sigma_x = std::sqrt(s.clutter_psd);
  // Each hypothesis gets the energy normalization consistent with data
  // generated under that hypothesis.
  const double k0 = deterministic_k(s, Complex{0.0, 0.0});
  const double k1 = deterministic_k(s, s.target);
  const double sy_base2 = s.clutter_psd * es_per_bin + s.noise_psd;
  ProductModel null_model{Complex{0.0, 0.0}, Complex{0.0, 0.0}, sigma_x,
                          k0 * std::sqrt(sy_base2), rho};
  ProductModel alt_model{s.target, k1 * s.target * std::sqrt(es_per_bin),
                         sigma_x, k1 * std::sqrt(sy_base2), rho};
  return HypothesisModels{null_model, alt_model,
                          build_edgeworth(alt_model, order), kind};
}

double llr_statistic(const HypothesisModels& models,
                     std::span<const Complex> observations) {
  const auto log_num = [&](Complex p) {
    const double f =
        models.alt_pdf.edgeworth_pdf_floored(p.real(), p.imag(), kCorrectionFloor);
    return std::log(std::max(f, kDensityFloor));
  };
  const auto log_den = [&](Complex p) {
    const double r = std::abs(p);
    if (r < kOriginClamp) {
      p = r == 0.0 ? Complex{kOriginClamp, 0.0} : p * (kOriginClamp / r);
    }
    return log_null_pdf(models.null_model, p);
  };
  return llr_sum(log_num, log_den, observations);
}

TestResult decide(double statistic, double threshold) {
  return TestResult{statistic, threshold, statistic > threshold};
}

}  // namespace trdet
