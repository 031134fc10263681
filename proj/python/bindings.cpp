#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "trdet/bessel.hpp"
#include "trdet/cf_invert.hpp"
#include "trdet/detector.hpp"
#include "trdet/edgeworth.hpp"
#include "trdet/moments.hpp"
#include "trdet/montecarlo.hpp"
#include "trdet/product_model.hpp"
#include "trdet/rng.hpp"

namespace py = pybind11;
using namespace trdet;

namespace {

DetectorKind kind_from_string(const std::string& kind) {
  if (kind == "lrt-c") return DetectorKind::Correlated;
  if (kind == "lrt-i") return DetectorKind::IndependentBaseline;
  throw std::invalid_argument("kind must be 'lrt-c' or 'lrt-i'");
}

py::dict cumulant_dict(const CumulantTable& t) {
  py::dict entries;
  for (const auto& [nu, v] : t.entries) {
    entries[py::make_tuple(nu.first, nu.second)] = v;
  }
  py::dict out;
  out["order"] = t.order;
  out["mean"] = py::make_tuple(t.mean[0], t.mean[1]);
  out["covariance"] = py::make_tuple(t.covariance.xx, t.covariance.xy,
                                     t.covariance.yy);
  out["entries"] = entries;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Product-of-correlated-complex-Gaussians distribution machinery "
            "and the blind time-reversal likelihood-ratio detector";

  py::class_<ProductModel>(m, "ProductModel")
      .def(py::init<Complex, Complex, double, double, Complex>(),
           py::arg("mu_x"), py::arg("mu_y"), py::arg("sigma_x"),
           py::arg("sigma_y"), py::arg("rho"))
      .def_property_readonly("mu_x", &ProductModel::mu_x)
      .def_property_readonly("mu_y", &ProductModel::mu_y)
      .def_property_readonly("sigma_x", &ProductModel::sigma_x)
      .def_property_readonly("sigma_y", &ProductModel::sigma_y)
      .def_property_readonly("rho", &ProductModel::rho)
      .def("scaled_means", &ProductModel::scaled_means, py::arg("factor"))
      .def("__repr__", [](const ProductModel& p) {
        return "ProductModel(mu_x=(" + std::to_string(p.mu_x().real()) + "," +
               std::to_string(p.mu_x().imag()) + "), ...)";
      });

  m.def(
      "product_summary",
      [](const ProductModel& model) {
        const ProductSummary s = product_summary(model);
        return py::make_tuple(s.mean, s.variance);
      },
      py::arg("model"), "returns (mean, variance) of P = X conj(Y)");
  m.def("char_fn", &char_fn, py::arg("model"), py::arg("t"));
  m.def("null_pdf", &null_pdf, py::arg("model"), py::arg("p"));
  m.def("bessel_k0", &bessel_k0, py::arg("x"));
  m.def(
      "cf_invert_pdf",
      [](const ProductModel& model, Complex p, double max_radius,
         double tail_tolerance) {
        QuadratureSpec spec;
        spec.max_radius = max_radius;
        spec.tail_tolerance = tail_tolerance;
        return cf_invert_pdf(model, p, spec);
      },
      py::arg("model"), py::arg("p"), py::arg("max_radius") = 0.0,
      py::arg("tail_tolerance") = 1e-7);

  m.def("complex_moment", &complex_moment, py::arg("model"), py::arg("m"),
        py::arg("n"));
  m.def(
      "real_moments",
      [](const ProductModel& model, int order) {
        py::dict out;
        for (const auto& [ab, v] : real_moments(model, order).entries) {
          out[py::make_tuple(ab.first, ab.second)] = v;
        }
        return out;
      },
      py::arg("model"), py::arg("order"));
  m.def(
      "cumulants",
      [](const ProductModel& model, int order) {
        return cumulant_dict(cumulants(model, order));
      },
      py::arg("model"), py::arg("order"));
  m.def(
      "jm_matrix",
      [](int order) {
        const CMatrix j = jm_matrix(order);
        std::vector<std::vector<Complex>> rows(order + 1);
        for (int k = 0; k <= order; ++k) {
          for (int l = 0; l <= order; ++l) rows[k].push_back(j(k, l));
        }
        return rows;
      },
      py::arg("m"));

  py::class_<EdgeworthModel>(m, "EdgeworthModel")
      .def_property_readonly(
          "mean",
          [](const EdgeworthModel& e) {
            return py::make_tuple(e.mean()[0], e.mean()[1]);
          })
      .def_property_readonly(
          "covariance",
          [](const EdgeworthModel& e) {
            return py::make_tuple(e.covariance().xx, e.covariance().xy,
                                  e.covariance().yy);
          })
      .def_property_readonly("order", &EdgeworthModel::order)
      .def("pdf", &EdgeworthModel::edgeworth_pdf, py::arg("p1"), py::arg("p2"))
      .def("pdf_floored", &EdgeworthModel::edgeworth_pdf_floored, py::arg("p1"),
           py::arg("p2"), py::arg("floor_ratio") = kCorrectionFloor)
      .def("gaussian_pdf", &EdgeworthModel::gaussian_pdf, py::arg("p1"),
           py::arg("p2"))
      .def(
          "hermite",
          [](const EdgeworthModel& e, int nu1, int nu2, double p1, double p2) {
            return hermite(e, nu1, nu2, p1, p2);
          },
          py::arg("nu1"), py::arg("nu2"), py::arg("p1"), py::arg("p2"));

  m.def("build_edgeworth", &build_edgeworth, py::arg("model"),
        py::arg("order") = 6);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<Complex, double, double, double, int, Complex>(),
           py::arg("target"), py::arg("clutter_psd"), py::arg("noise_psd"),
           py::arg("tx_energy"), py::arg("bins"), py::arg("channel_corr"))
      .def_readonly("target", &Scenario::target)
      .def_readonly("clutter_psd", &Scenario::clutter_psd)
      .def_readonly("noise_psd", &Scenario::noise_psd)
      .def_readonly("tx_energy", &Scenario::tx_energy)
      .def_readonly("bins", &Scenario::bins)
      .def_readonly("channel_corr", &Scenario::channel_corr);

  m.def("scr_to_pc", &scr_to_pc, py::arg("scr_db"), py::arg("target"));
  m.def("snr_to_noise", &snr_to_noise, py::arg("snr_db"), py::arg("target"),
        py::arg("tx_energy"), py::arg("bins"));
  m.def("effective_rho", &effective_rho, py::arg("scenario"));
  m.def("deterministic_k", &deterministic_k, py::arg("scenario"),
        py::arg("target"));

  py::class_<HypothesisModels>(m, "HypothesisModels")
      .def_readonly("null_model", &HypothesisModels::null_model)
      .def_readonly("alt_model", &HypothesisModels::alt_model)
      .def_readonly("alt_pdf", &HypothesisModels::alt_pdf);

  m.def(
      "hypothesis_models",
      [](const Scenario& s, const std::string& kind, int order) {
        return hypothesis_models(s, kind_from_string(kind), order);
      },
      py::arg("scenario"), py::arg("kind") = "lrt-c", py::arg("order") = 6);
  m.def(
      "llr_statistic",
      [](const HypothesisModels& models, const std::vector<Complex>& obs) {
        return llr_statistic(models, obs);
      },
      py::arg("models"), py::arg("observations"));

  py::class_<TestResult>(m, "TestResult")
      .def_readonly("statistic", &TestResult::statistic)
      .def_readonly("threshold", &TestResult::threshold)
      .def_readonly("decision", &TestResult::decision);
  m.def("decide", &decide, py::arg("statistic"), py::arg("threshold"));

  m.def(
      "simulate_trial",
      [](const Scenario& s, Complex true_target, uint64_t seed,
         uint64_t stream) {
        RngStream rng(seed, stream);
        return simulate_trial(s, true_target, rng);
      },
      py::arg("scenario"), py::arg("true_target"), py::arg("seed"),
      py::arg("stream") = 0);
  m.def("draw_products", &draw_products, py::arg("model"), py::arg("n"),
        py::arg("seed"), py::arg("workers") = 1);

  m.def(
      "roc",
      [](const Scenario& s, const std::string& kind, int n_trials, int order,
         uint64_t seed, int workers) {
        const RocCurve curve =
            roc(s, kind_from_string(kind), n_trials, order, seed, workers);
        py::list points;
        for (const RocPoint& pt : curve.points) {
          py::dict row;
          row["threshold"] = pt.threshold;
          row["pfa"] = pt.pfa;
          row["pd"] = pt.pd;
          row["pfa_lo"] = pt.pfa_lo;
          row["pfa_hi"] = pt.pfa_hi;
          row["pd_lo"] = pt.pd_lo;
          row["pd_hi"] = pt.pd_hi;
          points.append(row);
        }
        return points;
      },
      py::arg("scenario"), py::arg("kind"), py::arg("n_trials"),
      py::arg("order"), py::arg("seed"), py::arg("workers") = 1);

  m.def(
      "mse_table",
      [](const ProductModel& base, const std::vector<double>& scales, long n,
         uint64_t seed, int order, int hist_bins, int workers) {
        EstimatorSpec spec;
        spec.bins1 = spec.bins2 = hist_bins;
        py::list rows;
        for (const double scale : scales) {
          const ProductModel model = base.scaled_means(scale);
          const EdgeworthModel series = build_edgeworth(model, order);
          const auto samples = draw_products(model, n, seed, workers);
          const MseReport r = mse(
              [&](Complex p) { return series.edgeworth_pdf(p.real(), p.imag()); },
              samples, spec);
          py::dict row;
          row["scale"] = scale;
          row["mse"] = r.mse;
          row["n_samples"] = r.n_samples;
          rows.append(row);
        }
        return rows;
      },
      py::arg("model"), py::arg("scales"), py::arg("n"), py::arg("seed"),
      py::arg("order") = 6, py::arg("hist_bins") = 200, py::arg("workers") = 1);
}
