#include "seoam/reduction.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace seoam::analysis {

using nlohmann::json;

namespace {

constexpr const char* kQuadratureNote =
    "corrected error is the quadrature of fit and amplitude errors; published "
    "reductions of this kind have used larger, undocumented error bars";

struct Peak {
    double lambda = 0.0;
    double height = 0.0;
};

// Interior maxima with the requested prominence, refined by a parabola
// through the three points around the maximum.
std::vector<Peak> find_peaks(const signal::PolarizationSeries& series, double prominence_sigmas) {
    const auto& pts = series.points;
    std::vector<Peak> peaks;
    for (size_t i = 1; i + 1 < pts.size(); ++i) {
        if (!(pts[i].value >= pts[i - 1].value && pts[i].value > pts[i + 1].value)) continue;

        // Walk down both flanks to the neighboring valleys.
        double left_min = pts[i].value, right_min = pts[i].value;
        for (size_t j = i; j-- > 0 && pts[j].value <= pts[j + 1].value;)
            left_min = std::min(left_min, pts[j].value);
        for (size_t j = i + 1; j < pts.size() && pts[j].value <= pts[j - 1].value; ++j)
            right_min = std::min(right_min, pts[j].value);
        const double prominence = pts[i].value - std::max(left_min, right_min);
        const double noise = std::sqrt(pts[i].variance);
        if (prominence < prominence_sigmas * noise) continue;

        const double y0 = pts[i - 1].value, y1 = pts[i].value, y2 = pts[i + 1].value;
        const double denom = y0 - 2.0 * y1 + y2;
        double shift = 0.0;
        if (denom < 0.0) shift = std::clamp(0.5 * (y0 - y2) / denom, -0.5, 0.5);
        const double dl = 0.5 * (pts[i + 1].lambda_ang - pts[i - 1].lambda_ang);
        peaks.push_back({pts[i].lambda_ang + shift * dl, y1});
    }
    return peaks;
}

} // namespace

CalibrationResult calibrate_spin_echo_constant(const signal::PolarizationSeries& series,
                                               const signal::GratingSpec& grating,
                                               const CalibrationOptions& options) {
    grating.validate();
    const auto peaks = find_peaks(series, options.peak_prominence_sigmas);
    if (peaks.size() < 3)
        throw calibration_error("calibration needs >= 3 grating peaks, found " +
                                std::to_string(peaks.size()));

    // The first detected peak need not be order 1 (it may sit below the band).
    // Try small first orders; peak spacing then fixes the rest by the ratio
    // lambda_n^2 / lambda_first^2.
    const double l0sq = peaks.front().lambda * peaks.front().lambda;
    double best_residual = std::numeric_limits<double>::infinity();
    double second_best = std::numeric_limits<double>::infinity();
    std::vector<int> best_orders;
    for (int first = 1; first <= options.max_first_order; ++first) {
        std::vector<int> orders(peaks.size());
        bool monotonic = true;
        double residual = 0.0;
        for (size_t i = 0; i < peaks.size(); ++i) {
            const double exact = first * peaks[i].lambda * peaks[i].lambda / l0sq;
            orders[i] = static_cast<int>(std::lround(exact));
            residual += (exact - orders[i]) * (exact - orders[i]);
            if (i > 0 && orders[i] <= orders[i - 1]) monotonic = false;
        }
        if (!monotonic) continue;
        if (residual < best_residual) {
            second_best = best_residual;
            best_residual = residual;
            best_orders = orders;
        } else {
            second_best = std::min(second_best, residual);
        }
    }
    if (best_orders.empty())
        throw ambiguity_error("calibration: no monotonic peak-order assignment exists");
    if (second_best < 2.0 * best_residual && second_best != best_residual)
        throw ambiguity_error("calibration: peak-order assignment is ambiguous");

    // delta_SE(lambda_n) = n * period, regressed on lambda_n^2 through the origin.
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < peaks.size(); ++i) {
        const double x = peaks[i].lambda * peaks[i].lambda;
        const double y = best_orders[i] * grating.period_um;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = sxy / sxx;
    double rss = 0.0;
    for (size_t i = 0; i < peaks.size(); ++i) {
        const double x = peaks[i].lambda * peaks[i].lambda;
        const double r = best_orders[i] * grating.period_um - slope * x;
        rss += r * r;
    }
    const auto dof = static_cast<double>(peaks.size() > 1 ? peaks.size() - 1 : 1);
    const double slope_err = std::sqrt(rss / dof / sxx);

    CalibrationResult out;
    out.c_se_um_per_ang2 = {slope, slope_err};
    for (const auto& p : peaks) out.peak_lambdas_ang.push_back(p.lambda);
    out.peak_orders = best_orders;
    return out;
}

CorrectedA2 correct_a2(const FitResult& fit, const WobbleFit& wobble, signal::Polarity polarity) {
    const double s = signal::polarity_sign(polarity);
    CorrectedA2 out;
    out.raw = {fit.a2_per_ang2, fit.sigma_a2()};
    out.applied_shift = -s * wobble.amplitude_sum();
    out.corrected.value = fit.a2_per_ang2 + out.applied_shift;
    out.corrected.error = std::hypot(fit.sigma_a2(), wobble.amplitude_sum_err());
    out.error_convention = kQuadratureNote;
    return out;
}

CombinedValue combine_polarities(const ValueWithError& plus, const ValueWithError& minus) {
    CombinedValue out;
    out.combined.value = 0.5 * (plus.value - minus.value);
    out.combined.error = 0.5 * std::hypot(plus.error, minus.error);
    out.same_sign_warning = plus.value * minus.value > 0.0;
    return out;
}

double ConversionSpec::ratio() const {
    if (c_oam_per_a2_ang) return *c_oam_per_a2_ang;
    return instr::c_oam_from_a2(1.0, instrument);
}

AnalysisReport physics_report(const ReportInputs& inputs, const ConversionSpec& conversion) {
    const double ratio = conversion.ratio();

    AnalysisReport report;
    report.conversion_ratio_ang = ratio;
    report.error_convention = kQuadratureNote;

    auto corrected_of = [](const CorrectedA2& c, const std::optional<double>& override_err) {
        ValueWithError v = c.corrected;
        if (override_err) v.error = *override_err;
        return v;
    };
    const ValueWithError plus_corr = corrected_of(inputs.plus, inputs.corrected_err_plus);
    const ValueWithError minus_corr = corrected_of(inputs.minus, inputs.corrected_err_minus);

    PolarityReport plus;
    plus.a2_raw = inputs.plus.raw;
    plus.a2_corrected = plus_corr;
    plus.c_oam = {plus_corr.value * ratio, plus_corr.error * std::abs(ratio)};
    plus.amplitude1 = inputs.amp_plus;
    plus.amplitude2 = inputs.amp2_plus;
    report.plus = plus;

    PolarityReport minus;
    minus.a2_raw = inputs.minus.raw;
    minus.a2_corrected = minus_corr;
    minus.c_oam = {minus_corr.value * ratio, minus_corr.error * std::abs(ratio)};
    minus.amplitude1 = inputs.amp_minus;
    minus.amplitude2 = inputs.amp2_minus;
    report.minus = minus;

    const CombinedValue raw = combine_polarities(inputs.plus.raw, inputs.minus.raw);
    const CombinedValue corr = combine_polarities(plus_corr, minus_corr);
    report.a2_raw_combined = raw.combined;
    report.a2_corrected_combined = corr.combined;
    report.same_sign_warning = raw.same_sign_warning || corr.same_sign_warning;

    report.c_oam = {corr.combined.value * ratio, corr.combined.error * std::abs(ratio)};
    report.ell_slope = {0.5 * std::abs(report.c_oam.value), 0.5 * report.c_oam.error};
    report.theory_a2_per_ang2 = instr::predict_a2(conversion.instrument);

    // Rotation-rate equivalent of the 1 sigma precision on the combined value.
    const double reference = std::abs(corr.combined.value);
    report.sensitivity_rad_per_s =
        reference > 0.0
            ? conversion.instrument.omega_rad_s * corr.combined.error / reference
            : 0.0;
    return report;
}

PolarityReduction reduce_polarization(const signal::PolarizationSeries& series,
                                      const WobbleFitOptions& options) {
    PolarityReduction out;
    out.initial_fit = weighted_quadratic_fit(series);
    out.wobble = fit_wobble(isolate_oscillations(series, out.initial_fit), options);
    out.cleaned = subtract_wobble(series, out.wobble);
    out.fit = weighted_quadratic_fit(out.cleaned);
    out.a2 = correct_a2(out.fit, out.wobble, series.polarity);
    return out;
}

signal::PolarizationSeries aggregate_polarities(const signal::PolarizationSeries& plus,
                                                const signal::PolarizationSeries& minus) {
    if (plus.points.size() != minus.points.size())
        throw config_error("aggregate_polarities: series lengths differ");
    signal::PolarizationSeries out;
    out.polarity = signal::Polarity::off;
    out.provenance = "aggregated (plus - minus)/2";
    for (size_t i = 0; i < plus.points.size(); ++i) {
        const auto& p = plus.points[i];
        const auto& m = minus.points[i];
        if (std::abs(p.lambda_ang - m.lambda_ang) > 1e-9 * std::max(1.0, p.lambda_ang))
            throw config_error("aggregate_polarities: wavelength grids differ at bin " +
                               std::to_string(i));
        signal::PolarizationPoint pt;
        pt.lambda_ang = p.lambda_ang;
        pt.value = 0.5 * (p.value - m.value);
        pt.variance = 0.25 * (p.variance + m.variance);
        out.points.push_back(pt);
    }
    return out;
}

namespace {

json value_json(const ValueWithError& v) { return json{{"value", v.value}, {"error", v.error}}; }

json polarity_json(const PolarityReport& p) {
    return json{{"a2_raw_per_ang2", value_json(p.a2_raw)},
                {"a2_corrected_per_ang2", value_json(p.a2_corrected)},
                {"c_oam_per_ang", value_json(p.c_oam)},
                {"amplitude1_per_ang2", value_json(p.amplitude1)},
                {"amplitude2_per_ang2", value_json(p.amplitude2)}};
}

} // namespace

std::string AnalysisReport::to_json(const std::string& provenance_json) const {
    // The combined entries must stay derivable from the per-polarity ones.
    if (plus && minus) {
        const auto redo =
            combine_polarities(plus->a2_corrected, minus->a2_corrected).combined;
        if (std::abs(redo.value - a2_corrected_combined.value) > 1e-15 ||
            std::abs(redo.error - a2_corrected_combined.error) > 1e-15)
            throw consistency_error(
                "AnalysisReport: combined a2 does not match its per-polarity inputs");
    }

    json j;
    j["a2_per_ang2"] = value_json(a2_corrected_combined);
    j["a2_raw_per_ang2"] = value_json(a2_raw_combined);
    if (a2_series_raw) j["a2_series_raw_per_ang2"] = value_json(*a2_series_raw);
    if (a2_series_corrected) j["a2_series_per_ang2"] = value_json(*a2_series_corrected);
    j["c_oam_per_ang"] = value_json(c_oam);
    j["ell_slope_per_ang"] = value_json(ell_slope);
    j["sensitivity_rad_per_s"] = sensitivity_rad_per_s;
    j["conversion_ratio_ang"] = conversion_ratio_ang;
    j["theory_a2_per_ang2"] = theory_a2_per_ang2;
    j["error_convention"] = error_convention;
    j["same_sign_warning"] = same_sign_warning;
    if (plus) j["polarity_plus"] = polarity_json(*plus);
    if (minus) j["polarity_minus"] = polarity_json(*minus);
    j["provenance"] = json::parse(provenance_json);
    return j.dump(2);
}

} // namespace seoam::analysis
