#pragma once

#include "trdet/types.hpp"

namespace trdet {

/// Modified Bessel function of the second kind, order zero.
/// Relative error <= 1e-10 on (0, 700]; underflows to 0 for x >~ 745.
/// Throws std::domain_error for x <= 0.
double bessel_k0(double x);

/// exp(x) * K0(x); safe against underflow for large x.
double bessel_k0_scaled(double x);

}  // namespace trdet
