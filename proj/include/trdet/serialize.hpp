#pragma once

#include <json.hpp>

#include "trdet/moments.hpp"
#include "trdet/product_model.hpp"

namespace trdet {

/// Flat JSON with keys mu_x_re, mu_x_im, mu_y_re, mu_y_im, sigma_x,
/// sigma_y, rho_re, rho_im.
nlohmann::ordered_json to_json(const ProductModel& m);
ProductModel product_model_from_json(const nlohmann::json& j);

/// Entries as {"m", "n", "re", "im"} objects, ordered by (m+n, m).
nlohmann::ordered_json to_json(const ComplexMomentTable& t);

/// Entries as {"a", "b", "value"} objects.
nlohmann::ordered_json to_json(const RealMomentTable& t);

/// Entries as {"nu1", "nu2", "value"} objects plus mean and covariance.
nlohmann::ordered_json to_json(const CumulantTable& t);

}  // namespace trdet
