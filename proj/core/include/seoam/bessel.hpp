#pragma once

namespace seoam::bessel {

/// log(I_|n|(x)) for x >= 0. Returns -inf for x == 0, n != 0.
///
/// Evaluated from the ascending series in log space (all terms positive, so
/// no cancellation at any argument size); usable far beyond the overflow
/// point of the unscaled function.
double log_bessel_i(int n, double x);

/// I_n(x) for x >= 0. Throws numeric_range_error on overflow.
double bessel_i(int n, double x);

/// J_n(x) for integer n and real x, with the standard reflection rules
/// J_{-n}(x) = (-1)^n J_n(x) and J_n(-x) = (-1)^n J_n(x).
/// Throws numeric_range_error if the evaluation is not finite.
double bessel_j(int n, double x);

} // namespace seoam::bessel
