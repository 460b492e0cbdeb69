#pragma once

#include "seoam/fitting.hpp"
#include "seoam/instrument.hpp"
#include "seoam/polarization.hpp"

#include <optional>
#include <string>

namespace seoam::analysis {

struct ValueWithError {
    double value = 0.0;
    double error = 0.0;
};

/// Spin-echo constant calibrated from a grating correlation measurement:
/// peak wavelengths (3-point parabolic refinement) are assigned integer
/// orders and n * period is regressed on lambda_n^2 through the origin.
struct CalibrationResult {
    ValueWithError c_se_um_per_ang2;
    std::vector<double> peak_lambdas_ang;
    std::vector<int> peak_orders;
};

struct CalibrationOptions {
    double peak_prominence_sigmas = 3.0;
    int max_first_order = 6; ///< hypotheses tried for the first detected peak
};

CalibrationResult calibrate_spin_echo_constant(const signal::PolarizationSeries& series,
                                               const signal::GratingSpec& grating,
                                               const CalibrationOptions& options = {});

/// a2 corrected for the precession-plane wobble: a2bar = a2 - s (|A1| + |A2|),
/// s the polarity sign; the error is the quadrature of the fit and amplitude
/// errors (the error_convention note records that choice).
struct CorrectedA2 {
    ValueWithError raw;
    ValueWithError corrected;
    double applied_shift = 0.0;
    std::string error_convention;
};

CorrectedA2 correct_a2(const FitResult& fit, const WobbleFit& wobble, signal::Polarity polarity);

/// (x_plus - x_minus) / 2 with quadrature error / 2.
struct CombinedValue {
    ValueWithError combined;
    bool same_sign_warning = false;
};

CombinedValue combine_polarities(const ValueWithError& plus, const ValueWithError& minus);

/// How a2 converts to c_OAM: from the instrument geometry, or from an
/// explicitly calibrated ratio (1/A per 1/A^2).
struct ConversionSpec {
    std::optional<double> c_oam_per_a2_ang; ///< explicit ratio override
    instr::InstrumentConfig instrument;

    double ratio() const;
};

struct PolarityReport {
    ValueWithError a2_raw;
    ValueWithError a2_corrected;
    ValueWithError c_oam;
    ValueWithError amplitude1, amplitude2;
};

/// Full physics summary of a Sagnac-coefficient measurement.
struct AnalysisReport {
    std::optional<PolarityReport> plus;
    std::optional<PolarityReport> minus;
    ValueWithError a2_raw_combined;
    ValueWithError a2_corrected_combined;
    /// Fit of the aggregated series (P+ - P-)/2, when series data were given.
    std::optional<ValueWithError> a2_series_raw;
    std::optional<ValueWithError> a2_series_corrected;
    ValueWithError c_oam;       ///< per A
    ValueWithError ell_slope;   ///< |c_OAM| / 2, per A
    double sensitivity_rad_per_s = 0.0;
    double conversion_ratio_ang = 0.0;
    double theory_a2_per_ang2 = 0.0;
    std::string error_convention;
    bool same_sign_warning = false;

    /// Serializes after re-deriving the combined values from the per-polarity
    /// entries; throws consistency_error if they do not match.
    std::string to_json(const std::string& provenance_json = "{}") const;
};

struct ReportInputs {
    CorrectedA2 plus;
    CorrectedA2 minus;
    ValueWithError amp_plus{0.0, 0.0}, amp2_plus{0.0, 0.0};
    ValueWithError amp_minus{0.0, 0.0}, amp2_minus{0.0, 0.0};
    /// Externally assigned corrected errors (e.g. previously published
    /// values); replaces the quadrature errors when present.
    std::optional<double> corrected_err_plus, corrected_err_minus;
};

/// Combines both polarities, converts to OAM quantities and evaluates the
/// rotational sensitivity Omega * sigma(a2bar) / |a2bar|.
AnalysisReport physics_report(const ReportInputs& inputs, const ConversionSpec& conversion);

/// One polarity through the full reduction: initial quadratic fit, oscillation
/// isolation, two-cosine fit, subtraction of the fitted oscillation from the
/// data, quadratic refit, and the amplitude-sum correction of a2.
struct PolarityReduction {
    FitResult initial_fit;
    WobbleFit wobble;
    signal::PolarizationSeries cleaned; ///< series with the oscillation removed
    FitResult fit;                      ///< quadratic fit of the cleaned series
    CorrectedA2 a2;
};

PolarityReduction reduce_polarization(const signal::PolarizationSeries& series,
                                      const WobbleFitOptions& options = {});

/// Point-by-point (plus - minus)/2 of two series on the same wavelength grid,
/// with averaged variances. Feed it the oscillation-subtracted series.
signal::PolarizationSeries aggregate_polarities(const signal::PolarizationSeries& plus,
                                                const signal::PolarizationSeries& minus);

} // namespace seoam::analysis
