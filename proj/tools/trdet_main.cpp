// Command-line front end: pdf grids, moment dumps, fit-error tables and
// ROC sweeps with stable CSV/JSON output.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "trdet/cf_invert.hpp"
#include "trdet/detector.hpp"
#include "trdet/edgeworth.hpp"
#include "trdet/moments.hpp"
#include "trdet/montecarlo.hpp"
#include "trdet/product_model.hpp"
#include "trdet/serialize.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;
using namespace trdet;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat key/value configuration: defaults < config file < command-line flags.
class Config {
 public:
  json file_values = json::object();
  json flag_values = json::object();

  bool has(const std::string& key) const {
    return flag_values.contains(key) || file_values.contains(key);
  }

  template <class T>
  T get(const std::string& key, T fallback) const {
    try {
      if (flag_values.contains(key)) return flag_values.at(key).get<T>();
      if (file_values.contains(key)) return file_values.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError("config field '" + key + "' has the wrong type");
    }
    return fallback;
  }

  template <class T>
  T require(const std::string& key) const {
    if (!has(key)) {
      throw ConfigError("config field '" + key + "' is required");
    }
    return get<T>(key, T{});
  }
};

void load_config_file(Config& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  try {
    cfg.file_values = json::parse(in);
  } catch (const json::exception& e) {
    throw CLI::ValidationError("--config", std::string("bad JSON: ") + e.what());
  }
  if (!cfg.file_values.is_object()) {
    throw CLI::ValidationError("--config", "top level must be a JSON object");
  }
}

// Registers a flag that overrides the config key of the same name.
void add_num(CLI::App* cmd, Config& cfg, const std::string& key,
             const std::string& desc) {
  cmd->add_option_function<double>(
      "--" + key, [&cfg, key](const double& v) { cfg.flag_values[key] = v; },
      desc);
}

void add_int(CLI::App* cmd, Config& cfg, const std::string& key,
             const std::string& desc) {
  cmd->add_option_function<long long>(
      "--" + key, [&cfg, key](const long long& v) { cfg.flag_values[key] = v; },
      desc);
}

void add_str(CLI::App* cmd, Config& cfg, const std::string& key,
             const std::string& desc) {
  cmd->add_option_function<std::string>(
      "--" + key,
      [&cfg, key](const std::string& v) { cfg.flag_values[key] = v; }, desc);
}

void add_common(CLI::App* cmd, Config& cfg) {
  cmd->add_option_function<std::string>(
      "--config",
      [&cfg](const std::string& path) { load_config_file(cfg, path); },
      "flat JSON config; flags of the same name override");
  add_str(cmd, cfg, "output", "output file path (default: stdout)");
}

void add_model_options(CLI::App* cmd, Config& cfg) {
  add_num(cmd, cfg, "mu_x_re", "Re mean of X");
  add_num(cmd, cfg, "mu_x_im", "Im mean of X");
  add_num(cmd, cfg, "mu_y_re", "Re mean of Y");
  add_num(cmd, cfg, "mu_y_im", "Im mean of Y");
  add_num(cmd, cfg, "sigma_x", "std dev of X");
  add_num(cmd, cfg, "sigma_y", "std dev of Y");
  add_num(cmd, cfg, "rho_re", "Re correlation of (X, Y)");
  add_num(cmd, cfg, "rho_im", "Im correlation of (X, Y)");
}

// Reference parameters: a strongly noncentral product with moderate
// correlation; also the default operating point for the fit-error table.
ProductModel model_from_config(const Config& cfg) {
  try {
    return ProductModel(
        Complex{cfg.get("mu_x_re", 2.0), cfg.get("mu_x_im", 2.5)},
        Complex{cfg.get("mu_y_re", 2.1), cfg.get("mu_y_im", 1.8)},
        cfg.get("sigma_x", 1.0), cfg.get("sigma_y", 1.0),
        Complex{cfg.get("rho_re", 0.3), cfg.get("rho_im", 0.3)});
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void add_scenario_options(CLI::App* cmd, Config& cfg) {
  add_num(cmd, cfg, "target_re", "Re target response");
  add_num(cmd, cfg, "target_im", "Im target response");
  add_num(cmd, cfg, "scr_db", "signal-to-clutter ratio [dB]");
  add_num(cmd, cfg, "clutter_psd", "clutter PSD (alternative to scr_db)");
  add_num(cmd, cfg, "snr_db", "signal-to-noise ratio [dB]");
  add_num(cmd, cfg, "noise_psd", "noise PSD (alternative to snr_db)");
  add_num(cmd, cfg, "tx_energy", "transmit energy");
  add_int(cmd, cfg, "bins", "number of frequency bins");
  add_num(cmd, cfg, "rho_c_re", "Re channel correlation");
  add_num(cmd, cfg, "rho_c_im", "Im channel correlation");
}

Scenario scenario_from_config(const Config& cfg) {
  const Complex target{cfg.get("target_re", std::sqrt(0.5)),
                       cfg.get("target_im", std::sqrt(0.5))};
  const double tx_energy = cfg.get("tx_energy", 1.0);
  const int bins = static_cast<int>(cfg.get<long long>("bins", 5));
  if (cfg.has("scr_db") == cfg.has("clutter_psd")) {
    throw ConfigError("exactly one of scr_db / clutter_psd must be given");
  }
  if (cfg.has("snr_db") == cfg.has("noise_psd")) {
    throw ConfigError("exactly one of snr_db / noise_psd must be given");
  }
  try {
    const double pc = cfg.has("scr_db")
                          ? scr_to_pc(cfg.require<double>("scr_db"), target)
                          : cfg.require<double>("clutter_psd");
    const double nv = cfg.has("snr_db")
                          ? snr_to_noise(cfg.require<double>("snr_db"), target,
                                         tx_energy, bins)
                          : cfg.require<double>("noise_psd");
    return Scenario(target, pc, nv, tx_energy, bins,
                    Complex{cfg.get("rho_c_re", 0.1), cfg.get("rho_c_im", 0.7)});
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

DetectorKind kind_from_config(const Config& cfg) {
  const std::string kind = cfg.get<std::string>("kind", "lrt-c");
  if (kind == "lrt-c") return DetectorKind::Correlated;
  if (kind == "lrt-i") return DetectorKind::IndependentBaseline;
  throw ConfigError("kind must be 'lrt-c' or 'lrt-i'");
}

int edgeworth_order_from_config(const Config& cfg) {
  const int order = static_cast<int>(cfg.get<long long>("edgeworth_order", 6));
  if (order < 2 || order > 8) {
    throw ConfigError("edgeworth_order must be in [2, 8]");
  }
  return order;
}

uint64_t seed_from_config(const Config& cfg) {
  // Randomized commands never fall back to a clock seed.
  return static_cast<uint64_t>(cfg.require<long long>("seed"));
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ConfigError("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string fmt(double v, const char* spec = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

// ---------------------------------------------------------------------------

int cmd_pdf_eval(const Config& cfg) {
  const ProductModel model = model_from_config(cfg);
  const std::string source = cfg.get<std::string>("source", "edgeworth");
  const double p1_min = cfg.get("p1_min", -2.0), p1_max = cfg.get("p1_max", 12.0);
  const double p2_min = cfg.get("p2_min", -2.0), p2_max = cfg.get("p2_max", 12.0);
  const int n1 = static_cast<int>(cfg.get<long long>("n1", 100));
  const int n2 = static_cast<int>(cfg.get<long long>("n2", 100));
  if (n1 < 2 || n2 < 2) throw ConfigError("grid sizes n1, n2 must be >= 2");
  if (!(p1_max > p1_min) || !(p2_max > p2_min)) {
    throw ConfigError("grid bounds must satisfy min < max");
  }

  std::function<double(Complex)> density;
  std::unique_ptr<EdgeworthModel> series;
  if (source == "edgeworth") {
    series = std::make_unique<EdgeworthModel>(
        build_edgeworth(model, edgeworth_order_from_config(cfg)));
    density = [&series](Complex p) {
      return series->edgeworth_pdf(p.real(), p.imag());
    };
  } else if (source == "null_exact") {
    if (!model.zero_mean()) {
      throw ConfigError("source null_exact requires a zero-mean model");
    }
    density = [&model](Complex p) { return null_pdf(model, p); };
  } else if (source == "cf_numeric") {
    density = [&model](Complex p) { return cf_invert_pdf(model, p); };
  } else {
    throw ConfigError("source must be edgeworth, null_exact or cf_numeric");
  }

  Output out(cfg.get<std::string>("output", ""));
  out.stream() << "p1,p2,density\n";
  for (int i = 0; i < n1; ++i) {
    const double p1 = p1_min + i * (p1_max - p1_min) / (n1 - 1);
    for (int j = 0; j < n2; ++j) {
      const double p2 = p2_min + j * (p2_max - p2_min) / (n2 - 1);
      out.stream() << fmt(p1) << ',' << fmt(p2) << ','
                   << fmt(density(Complex{p1, p2})) << '\n';
    }
  }
  return 0;
}

int cmd_moments(const Config& cfg) {
  const ProductModel model = model_from_config(cfg);
  const int order = static_cast<int>(cfg.get<long long>("order", 6));
  if (order < 2 || order > 8) throw ConfigError("order must be in [2, 8]");

  ordered_json doc;
  doc["model"] = to_json(model);
  doc["order"] = order;
  doc["complex_moments"] = to_json(complex_moments(model, order))["entries"];
  doc["real_moments"] = to_json(real_moments(model, order))["entries"];
  const ordered_json cj = to_json(cumulants(model, order));
  doc["mean"] = cj["mean"];
  doc["covariance"] = cj["covariance"];
  doc["cumulants"] = cj["entries"];

  Output out(cfg.get<std::string>("output", ""));
  out.stream() << doc.dump(2) << '\n';
  return 0;
}

std::vector<double> scales_from_config(const Config& cfg) {
  if (!cfg.has("scales")) return {0.5, 1.0, 2.0};
  // accepts a JSON array or a comma-separated string
  if (cfg.flag_values.contains("scales") || cfg.file_values.contains("scales")) {
    const json raw = cfg.flag_values.contains("scales")
                         ? cfg.flag_values.at("scales")
                         : cfg.file_values.at("scales");
    std::vector<double> scales;
    if (raw.is_array()) {
      for (const auto& v : raw) scales.push_back(v.get<double>());
    } else if (raw.is_string()) {
      std::stringstream ss(raw.get<std::string>());
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        try {
          scales.push_back(std::stod(tok));
        } catch (const std::exception&) {
          throw ConfigError("scales: cannot parse '" + tok + "'");
        }
      }
    } else {
      throw ConfigError("scales must be an array or comma-separated string");
    }
    if (scales.empty()) throw ConfigError("scales must be non-empty");
    return scales;
  }
  return {0.5, 1.0, 2.0};
}

EstimatorSpec estimator_from_config(const Config& cfg) {
  EstimatorSpec spec;
  const std::string name = cfg.get<std::string>("estimator", "histogram");
  if (name == "histogram") {
    spec.kind = EstimatorKind::Histogram2D;
  } else if (name == "kde") {
    spec.kind = EstimatorKind::GaussianKde;
  } else {
    throw ConfigError("estimator must be 'histogram' or 'kde'");
  }
  const int bins = static_cast<int>(cfg.get<long long>("hist_bins", 200));
  if (bins < 2) throw ConfigError("hist_bins must be >= 2");
  spec.bins1 = spec.bins2 = bins;
  return spec;
}

int cmd_mse(const Config& cfg) {
  const ProductModel base = model_from_config(cfg);
  const std::vector<double> scales = scales_from_config(cfg);
  const long n = cfg.get<long long>("n_samples", 1000000);
  if (n < 10000) throw ConfigError("n_samples must be >= 1e4");
  const uint64_t seed = seed_from_config(cfg);
  const int workers = static_cast<int>(cfg.get<long long>("workers", 1));
  const int order = edgeworth_order_from_config(cfg);
  const EstimatorSpec spec = estimator_from_config(cfg);

  ordered_json rows = ordered_json::array();
  for (size_t idx = 0; idx < scales.size(); ++idx) {
    const ProductModel model = base.scaled_means(scales[idx]);
    const EdgeworthModel series = build_edgeworth(model, order);
    // The same seed is reused per scale: common random numbers sharpen the
    // cross-scale comparison.
    const auto samples = draw_products(model, n, seed, workers);
    const MseReport report =
        mse([&](Complex p) { return series.edgeworth_pdf(p.real(), p.imag()); },
            samples, spec);
    rows.push_back(ordered_json{{"scale", scales[idx]},
                                {"mu_x_re", model.mu_x().real()},
                                {"mu_x_im", model.mu_x().imag()},
                                {"mu_y_re", model.mu_y().real()},
                                {"mu_y_im", model.mu_y().imag()},
                                {"mse", report.mse},
                                {"n_samples", report.n_samples}});
  }
  Output out(cfg.get<std::string>("output", ""));
  out.stream() << rows.dump(2) << '\n';
  return 0;
}

int cmd_roc(const Config& cfg) {
  const Scenario scenario = scenario_from_config(cfg);
  const DetectorKind kind = kind_from_config(cfg);
  const int order = edgeworth_order_from_config(cfg);
  const long long n_trials = cfg.get<long long>("n_trials", 100000);
  if (n_trials < 100) throw ConfigError("n_trials must be >= 100");
  const uint64_t seed = seed_from_config(cfg);
  const int workers = static_cast<int>(cfg.get<long long>("workers", 1));

  const RocCurve curve =
      roc(scenario, kind, static_cast<int>(n_trials), order, seed, workers);

  Output out(cfg.get<std::string>("output", ""));
  out.stream() << "threshold,pfa,pd,pfa_lo,pfa_hi,pd_lo,pd_hi\n";
  for (const RocPoint& pt : curve.points) {
    out.stream() << fmt(pt.threshold, "%.17g") << ',' << fmt(pt.pfa) << ','
                 << fmt(pt.pd) << ',' << fmt(pt.pfa_lo) << ','
                 << fmt(pt.pfa_hi) << ',' << fmt(pt.pd_lo) << ','
                 << fmt(pt.pd_hi) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlated-channel product-distribution toolkit"};
  app.require_subcommand(1);

  Config pdf_cfg, mse_cfg, roc_cfg, mom_cfg;

  CLI::App* pdf = app.add_subcommand(
      "pdf-eval", "evaluate a density on a grid, CSV p1,p2,density");
  add_common(pdf, pdf_cfg);
  add_model_options(pdf, pdf_cfg);
  add_str(pdf, pdf_cfg, "source", "edgeworth | null_exact | cf_numeric");
  add_int(pdf, pdf_cfg, "edgeworth_order", "series order s in [2, 8]");
  add_num(pdf, pdf_cfg, "p1_min", "grid lower bound, first axis");
  add_num(pdf, pdf_cfg, "p1_max", "grid upper bound, first axis");
  add_num(pdf, pdf_cfg, "p2_min", "grid lower bound, second axis");
  add_num(pdf, pdf_cfg, "p2_max", "grid upper bound, second axis");
  add_int(pdf, pdf_cfg, "n1", "grid points, first axis");
  add_int(pdf, pdf_cfg, "n2", "grid points, second axis");

  CLI::App* msec = app.add_subcommand(
      "mse", "series fit error against empirical densities, JSON");
  add_common(msec, mse_cfg);
  add_model_options(msec, mse_cfg);
  add_str(msec, mse_cfg, "scales", "mean scale factors, e.g. 0.5,1,2");
  add_int(msec, mse_cfg, "n_samples", "samples per scale");
  add_int(msec, mse_cfg, "seed", "RNG seed (required)");
  add_int(msec, mse_cfg, "workers", "worker threads");
  add_int(msec, mse_cfg, "edgeworth_order", "series order s in [2, 8]");
  add_str(msec, mse_cfg, "estimator", "histogram | kde");
  add_int(msec, mse_cfg, "hist_bins", "histogram bins per axis");

  CLI::App* rocc = app.add_subcommand(
      "roc", "Monte Carlo detector operating characteristic, CSV");
  add_common(rocc, roc_cfg);
  add_scenario_options(rocc, roc_cfg);
  add_str(rocc, roc_cfg, "kind", "lrt-c (correlated) | lrt-i (independent)");
  add_int(rocc, roc_cfg, "edgeworth_order", "series order s in [2, 8]");
  add_int(rocc, roc_cfg, "n_trials", "trials per hypothesis");
  add_int(rocc, roc_cfg, "seed", "RNG seed (required)");
  add_int(rocc, roc_cfg, "workers", "worker threads");

  CLI::App* mom = app.add_subcommand(
      "moments", "complex/real moment and cumulant tables, JSON");
  add_common(mom, mom_cfg);
  add_model_options(mom, mom_cfg);
  add_int(mom, mom_cfg, "order", "table order in [2, 8]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (pdf->parsed()) return cmd_pdf_eval(pdf_cfg);
    if (msec->parsed()) return cmd_mse(mse_cfg);
    if (rocc->parsed()) return cmd_roc(roc_cfg);
    if (mom->parsed()) return cmd_moments(mom_cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
