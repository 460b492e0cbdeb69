#pragma once

#include "seoam/polarization.hpp"

#include <array>
#include <vector>

namespace seoam::analysis {

/// Weighted quadratic fit value = eps + a1 lambda + a2 lambda^2.
struct FitResult {
    double epsilon = 0.0;
    double a1_per_ang = 0.0;
    double a2_per_ang2 = 0.0;
    std::array<std::array<double, 3>, 3> covariance{}; ///< (eps, a1, a2) ordering
    double reduced_chi2 = 0.0;
    std::vector<double> residuals; ///< value - model, per input point

    double sigma_epsilon() const;
    double sigma_a1() const;
    double sigma_a2() const;
    double evaluate(double lambda_ang) const;
};

/// Weighted least squares via orthogonal (QR) decomposition; weights are the
/// inverted variances. Throws fit_error on rank deficiency or < 10 points.
FitResult weighted_quadratic_fit(const signal::PolarizationSeries& series);

/// (value - quadratic) / lambda^2 with variance / lambda^4; the result is the
/// precession-plane oscillation plus noise.
signal::PolarizationSeries isolate_oscillations(const signal::PolarizationSeries& series,
                                                const FitResult& fit);

/// Offset + two-cosine fit of the isolated oscillations:
///   c0 + B1 cos(2 k1 lambda + 2 phi1) + B2 cos(2 k2 lambda + 2 phi2),
/// reported as the cos^2 amplitudes |A_i| = B_i of the precession-plane model.
struct WobbleFit {
    double amp1_per_ang2 = 0.0, amp1_err = 0.0;
    double k1_per_ang = 0.0, k1_err = 0.0;
    double phi1_rad = 0.0, phi1_err = 0.0;
    double amp2_per_ang2 = 0.0, amp2_err = 0.0;
    double k2_per_ang = 0.0, k2_err = 0.0;
    double phi2_rad = 0.0, phi2_err = 0.0;
    double dc_offset = 0.0;
    bool significant = false; ///< false: no oscillation above 2 sigma, amplitudes zeroed
    double chi2 = 0.0;

    double amplitude_sum() const { return amp1_per_ang2 + amp2_per_ang2; }
    double amplitude_sum_err() const;
};

struct WobbleFitOptions {
    double k2_over_k1_min = 1.8;
    double k2_over_k1_max = 2.2;
    double accept_ratio_min = 1.6; ///< WobbleFit invariant band for k2/k1
    double accept_ratio_max = 2.4;
    int oversampling = 8; ///< periodogram frequency oversampling
};

/// Periodogram grid search followed by bounded refinement of (k1, k2) with k2
/// initialized at 2 k1. Residuals must come from isolate_oscillations.
WobbleFit fit_wobble(const signal::PolarizationSeries& residuals,
                     const WobbleFitOptions& options = {});

/// Removes the fitted oscillation, lambda^2-scaled, from the raw series. The
/// constant (cos^2 DC) part stays behind in the quadratic coefficient: that is
/// what the a2 correction accounts for. Variances are left untouched (the
/// subtraction error is negligible against the counting noise).
signal::PolarizationSeries subtract_wobble(const signal::PolarizationSeries& series,
                                           const WobbleFit& wobble);

} // namespace seoam::analysis
