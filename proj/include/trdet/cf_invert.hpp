#pragma once

#include "trdet/product_model.hpp"
#include "trdet/types.hpp"

namespace trdet {

/// Controls for the numerical characteristic-function inversion.
/// Zeros select automatic choices derived from the model scales.
struct QuadratureSpec {
  double max_radius = 0.0;      // truncation radius in t; 0 = auto-grow
  double radial_step = 0.0;     // radial node spacing; 0 = auto
  int min_angular_nodes = 64;   // lower bound on angular resolution
  double tail_tolerance = 3e-9; // allowed integrand magnitude at the boundary
};

/// Density of P at p by numerical inversion of the characteristic function:
///   f(p) = (2 pi)^-2 \int psi(t) exp(-i Re[conj(t) p]) dt.
/// The quadratically decaying far field of psi is removed by subtracting a
/// rational profile whose inversion is known in closed form (a K0 kernel);
/// the smooth remainder is integrated on a polar grid, radially with a
/// Filon-type rule that treats the oscillation exactly. Intended as a
/// testing oracle; accuracy degrades near the origin (p = 0 is rejected:
/// the density has a logarithmic singularity there).
/// Throws NumericalError when the remainder at the truncation radius
/// exceeds spec.tail_tolerance.
double cf_invert_pdf(const ProductModel& m, Complex p,
                     const QuadratureSpec& spec = {});

}  // namespace trdet
