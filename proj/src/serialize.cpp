#include "trdet/serialize.hpp"

namespace trdet {

using nlohmann::ordered_json;

ordered_json to_json(const ProductModel& m) {
  return ordered_json{{"mu_x_re", m.mu_x().real()}, {"mu_x_im", m.mu_x().imag()},
                      {"mu_y_re", m.mu_y().real()}, {"mu_y_im", m.mu_y().imag()},
                      {"sigma_x", m.sigma_x()},     {"sigma_y", m.sigma_y()},
                      {"rho_re", m.rho().real()},   {"rho_im", m.rho().imag()}};
}

ProductModel product_model_from_json(const nlohmann::json& j) {
  return ProductModel(
      Complex{j.at("mu_x_re").get<double>(), j.at("mu_x_im").get<double>()},
      Complex{j.at("mu_y_re").get<double>(), j.at("mu_y_im").get<double>()},
      j.at("sigma_x").get<double>(), j.at("sigma_y").get<double>(),
      Complex{j.at("rho_re").get<double>(), j.at("rho_im").get<double>()});
}

ordered_json to_json(const ComplexMomentTable& t) {
  ordered_json entries = ordered_json::array();
  for (int s = 0; s <= t.order; ++s) {
    for (int m = s; m >= 0; --m) {
      const Complex v = t.at(m, s - m);
      entries.push_back(ordered_json{
          {"m", m}, {"n", s - m}, {"re", v.real()}, {"im", v.imag()}});
    }
  }
  return ordered_json{{"order", t.order}, {"entries", entries}};
}

ordered_json to_json(const RealMomentTable& t) {
  ordered_json entries = ordered_json::array();
  for (const auto& [ab, v] : t.entries) {
    entries.push_back(
        ordered_json{{"a", ab.first}, {"b", ab.second}, {"value", v}});
  }
  return ordered_json{{"order", t.order}, {"entries", entries}};
}

ordered_json to_json(const CumulantTable& t) {
  ordered_json entries = ordered_json::array();
  for (const auto& [nu, v] : t.entries) {
    entries.push_back(
        ordered_json{{"nu1", nu.first}, {"nu2", nu.second}, {"value", v}});
  }
  return ordered_json{{"order", t.order},
                      {"mean", {t.mean[0], t.mean[1]}},
                      {"covariance",
                       {{"xx", t.covariance.xx},
                        {"xy", t.covariance.xy},
                        {"yy", t.covariance.yy}}},
                      {"entries", entries}};
}

}  // namespace trdet
