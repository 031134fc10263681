#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "trdet/detector.hpp"
#include "trdet/product_model.hpp"
#include "trdet/rng.hpp"
#include "trdet/types.hpp"

namespace trdet {

/// Correlated zero-mean channel pair with common PSD:
///   C_p = sqrt(P_c) a,   C_r = sqrt(P_c) (conj(rho_c) a + sqrt(1-|rho_c|^2) b)
/// so that E[C_p conj(C_r)] = rho_c P_c.
std::pair<Complex, Complex> sample_channel_pair(double clutter_psd,
                                                Complex rho_c, RngStream& rng);

/// One full probe/retransmit trial: returns the per-bin retransmission
/// responses (length Q). The energy normalization uses the realized probe
/// energy of the trial; retransmission noise is included.
std::vector<Complex> simulate_trial(const Scenario& s, Complex true_target,
                                    RngStream& rng);

/// Direct draw of P = X conj(Y) from a product model (no transmit chain).
Complex sample_product(const ProductModel& m, RngStream& rng);

/// n draws of P with one counter-based stream per sample index, so any
/// worker count produces the identical sequence.
std::vector<Complex> draw_products(const ProductModel& m, long n,
                                   uint64_t seed, int workers = 1);

struct RocPoint {
  double threshold;
  double pfa, pd;
  double pfa_lo, pfa_hi;  // 95% Wilson interval
  double pd_lo, pd_hi;
};

struct RocCurve {
  std::vector<RocPoint> points;  // sorted by descending threshold
  int n_trials = 0;              // per hypothesis
};

/// 95% Wilson score interval for `successes` out of `n`.
std::pair<double, double> wilson_interval(long successes, long n);

/// Empirical ROC from per-trial statistics: thresholds sweep the sorted
/// union of both samples plus +/-inf endpoints; decision is "statistic >
/// threshold".
RocCurve roc_from_statistics(std::vector<double> h0_stats,
                             std::vector<double> h1_stats);

/// Detection statistics for n_trials independent trials per hypothesis.
/// Trial i of hypothesis h uses stream 2*i + h of `seed`; results are
/// ordered by trial index regardless of worker count.
std::pair<std::vector<double>, std::vector<double>> detection_statistics(
    const Scenario& s, DetectorKind kind, int n_trials, int order,
    uint64_t seed, int workers = 1);

RocCurve roc(const Scenario& s, DetectorKind kind, int n_trials, int order,
             uint64_t seed, int workers = 1);

/// Detection probability at the largest observed false-alarm rate <= pfa,
/// returned with the success count backing it (for interval computation).
struct OperatingPoint {
  double threshold;
  double pfa, pd;
  long pd_successes;
};
OperatingPoint pd_at_pfa(const RocCurve& curve, double pfa);

enum class EstimatorKind { Histogram2D, GaussianKde };

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::Histogram2D;
  int bins1 = 200;  // histogram bins per axis
  int bins2 = 200;
  double box_margin = 0.05;  // bounding-box expansion fraction
};

/// Empirical density estimate over complex samples viewed as (Re, Im).
class EmpiricalPdf {
 public:
  static EmpiricalPdf build(std::span<const Complex> samples,
                            const EstimatorSpec& spec);

  double density(double p1, double p2) const;
  double density(Complex p) const { return density(p.real(), p.imag()); }

  const EstimatorSpec& spec() const { return spec_; }
  long sample_count() const { return n_; }
  // bounding box of the samples (pre-margin)
  double min1() const { return min1_; }
  double max1() const { return max1_; }
  double min2() const { return min2_; }
  double max2() const { return max2_; }
  /// For histograms: total probability mass (sums to 1 by construction).
  double total_mass() const;

 private:
  EstimatorSpec spec_;
  long n_ = 0;
  double min1_ = 0, max1_ = 0, min2_ = 0, max2_ = 0;
  // histogram state
  double lo1_ = 0, lo2_ = 0, w1_ = 0, w2_ = 0;
  std::vector<double> cells_;  // density per cell
  // kde state
  double h1_ = 0, h2_ = 0;
  std::vector<Complex> kde_samples_;
};

struct MseReport {
  double mse = 0.0;
  long n_samples = 0;
  EstimatorSpec estimator;
};

/// Sample-averaged squared difference between an approximating density and
/// the empirical density, evaluated at the samples themselves:
///   (1/N) sum_n (approx(p_n) - empirical(p_n))^2.
MseReport mse(const std::function<double(Complex)>& approx,
              std::span<const Complex> samples, const EstimatorSpec& spec);

}  // namespace trdet
