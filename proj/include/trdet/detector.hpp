#pragma once

#include <span>

#include "trdet/edgeworth.hpp"
#include "trdet/product_model.hpp"
#include "trdet/types.hpp"

namespace trdet {

/// Physical experiment description for one probe/retransmit detection run.
struct Scenario {
  Complex target;        // deterministic point-target response T
  double clutter_psd;    // P_c, flat across frequency bins
  double noise_psd;      // sigma_v^2, measurement noise per transmission
  double tx_energy;      // E_s
  int bins;              // Q, number of independent frequency bins
  Complex channel_corr;  // rho_c between probe and retransmit channels

  Scenario(Complex target_, double clutter_psd_, double noise_psd_,
           double tx_energy_, int bins_, Complex channel_corr_);
};

enum class DetectorKind { Correlated, IndependentBaseline };

/// Correlation between X = T + C_r and Y = k Z inherited from the channel:
/// conj(rho_c) / sqrt(1 + sigma_v^2 Q / (P_c E_s)).
Complex effective_rho(const Scenario& s);

/// P_c from SCR = 10 log10(|T|^2 / P_c); requires |T| > 0.
double scr_to_pc(double scr_db, Complex target);

/// sigma_v^2 from SNR = 10 log10(E_s |T|^2 / (Q sigma_v^2)); requires |T| > 0.
double snr_to_noise(double snr_db, Complex target, double tx_energy, int bins);

/// Deterministic approximation of the retransmit energy normalization:
/// k = sqrt(E_s / E[sum_q |Z_q|^2]) for the hypothesis with the given target.
double deterministic_k(const Scenario& s, Complex target);

/// Hypothesis-specific product models plus the series density used for the
/// target-present branch. IndependentBaseline forces rho = 0 in both models.
struct HypothesisModels {
  ProductModel null_model;
  ProductModel alt_model;
  EdgeworthModel alt_pdf;
  DetectorKind kind;
};

HypothesisModels hypothesis_models(const Scenario& s, DetectorKind kind,
                                   int order);

struct TestResult {
  double statistic;
  double threshold;
  bool decision;  // true = target declared present
};

// The truncated series can go negative where its own error dominates; the
// numerator keeps phi * max(C, kCorrectionFloor) so one bad bin costs a
// bounded penalty instead of vetoing the whole trial.
inline constexpr double kCorrectionFloor = 1e-2;
inline constexpr double kDensityFloor = 1e-300;  // absolute log-domain guard
inline constexpr double kOriginClamp = 1e-12;    // |p| clamp for the null pdf

/// Log-likelihood-ratio sum over per-bin observations with arbitrary
/// log-density callables; kept generic so identical numerator/denominator
/// cancel exactly.
template <class LogNum, class LogDen>
double llr_sum(LogNum&& log_num, LogDen&& log_den,
               std::span<const Complex> observations) {
  if (observations.empty()) {
    throw std::invalid_argument("llr: empty observation list");
  }
  double s = 0.0;
  for (const Complex& p : observations) s += log_num(p) - log_den(p);
  return s;
}

/// sum_q [log f_alt(p_q) - log f_null(p_q)] with the floored series density
/// in the numerator and |p_q| clamped away from the null density's origin
/// singularity in the denominator.
double llr_statistic(const HypothesisModels& models,
                     std::span<const Complex> observations);

/// decision = statistic > threshold; exact ties resolve to "absent".
TestResult decide(double statistic, double threshold);

}  // namespace trdet
