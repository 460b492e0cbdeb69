#include "seoam/polarization.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace seoam::signal {

std::string to_string(Polarity p) {
    switch (p) {
        case Polarity::plus: return "+1";
        case Polarity::minus: return "-1";
        case Polarity::off: return "off";
    }
    return "off";
}

Polarity polarity_from_string(const std::string& s) {
    if (s == "+1" || s == "+" || s == "plus") return Polarity::plus;
    if (s == "-1" || s == "-" || s == "minus") return Polarity::minus;
    if (s == "off") return Polarity::off;
    throw config_error("unknown polarity tag '" + s + "'");
}

double polarity_sign(Polarity p) {
    if (p == Polarity::off) throw config_error("polarity 'off' has no sign");
    return p == Polarity::plus ? 1.0 : -1.0;
}

void PolarizationModelParams::validate() const {
    if (!(p0 > 0.0 && p0 <= 1.0)) throw config_error("p0 must lie in (0, 1]");
    for (const auto& term : wobble)
        if (!(term.amplitude_per_ang2 >= 0.0))
            throw config_error("wobble amplitudes must be >= 0");
    if (wobble.size() > 2) {
        // the model is defined for up to two terms with k2 ~ 2 k1
        throw config_error("at most two wobble terms are supported");
    }
    if (wobble.size() == 2 && wobble[0].frequency_per_ang > 0.0) {
        const double ratio = wobble[1].frequency_per_ang / wobble[0].frequency_per_ang;
        if (ratio < 1.2 || ratio > 3.0)
            throw config_error("second wobble frequency should be near twice the first");
    }
}

void PolarizationSeries::validate() const {
    for (size_t i = 0; i < points.size(); ++i) {
        if (i > 0 && !(points[i].lambda_ang > points[i - 1].lambda_ang))
            throw config_error("PolarizationSeries: lambda must be strictly increasing");
        if (!(points[i].variance > 0.0))
            throw config_error("PolarizationSeries: variances must be > 0");
        if (std::abs(points[i].value) > 1.5)
            throw config_error("PolarizationSeries: |value| > 1.5");
    }
}

std::vector<double> PolarizationSeries::lambdas() const {
    std::vector<double> out(points.size());
    std::transform(points.begin(), points.end(), out.begin(),
                   [](const PolarizationPoint& p) { return p.lambda_ang; });
    return out;
}

ModelOutputs polarization_model(const PolarizationModelParams& params, double lambda_ang) {
    params.validate();
    const double l2 = lambda_ang * lambda_ang;
    const double quad = params.epsilon + params.a1_per_ang * lambda_ang + params.a2_per_ang2 * l2;

    ModelOutputs out;
    out.p_x = params.p0 * std::cos(quad - params.epsilon);
    out.p_y = params.p0 * std::sin(quad);
    if (params.polarity == Polarity::off) {
        out.ratio = out.p_x;
        return out;
    }
    const double s = polarity_sign(params.polarity);
    double wobble = 0.0;
    for (const auto& term : params.wobble) {
        const double c = std::cos(term.frequency_per_ang * lambda_ang + term.phase_rad);
        wobble += term.amplitude_per_ang2 * c * c;
    }
    out.ratio = quad + s * 2.0 * l2 * wobble;
    return out;
}

namespace {

// SplitMix64; decorrelates per-bin substreams from (seed, bin index).
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

PolarizationSeries simulate_dataset(const PolarizationModelParams& params,
                                    const instr::InstrumentConfig& cfg,
                                    const SimulationOptions& opts) {
    params.validate();
    cfg.validate();
    if (opts.n_bins < 2) throw config_error("simulate_dataset: need at least 2 bins");
    if (!opts.noiseless && opts.n_pulses <= 0)
        throw config_error("simulate_dataset: n_pulses must be > 0");

    PolarizationSeries series;
    series.polarity = params.polarity;
    series.provenance =
        opts.noiseless ? "model" : "synthetic seed=" + std::to_string(opts.seed);

    const double lo = cfg.lambda_min_ang, hi = cfg.lambda_max_ang;
    const double width = (hi - lo) / opts.n_bins;
    for (int i = 0; i < opts.n_bins; ++i) {
        const double lambda = lo + (i + 0.5) * width;
        const double eta = polarization_model(params, lambda).ratio;

        PolarizationPoint pt;
        pt.lambda_ang = lambda;
        if (opts.noiseless) {
            pt.value = eta;
            pt.variance = 1e-18;
        } else {
            const double p_up = 0.5 * (1.0 + std::clamp(eta, -1.0, 1.0));
            std::mt19937_64 rng(splitmix64(opts.seed ^ splitmix64(static_cast<std::uint64_t>(i))));
            std::binomial_distribution<std::int64_t> binom(opts.n_pulses, p_up);
            pt.n_up = binom(rng);
            pt.n_down = opts.n_pulses - pt.n_up;
            const std::int64_t total = pt.n_up + pt.n_down;
            if (total == 0) {
                series.warnings.push_back("bin " + std::to_string(i) + " dropped: zero counts");
                continue;
            }
            pt.value = static_cast<double>(pt.n_up - pt.n_down) / static_cast<double>(total);
            const double nu = std::max(0.5, static_cast<double>(pt.n_up));
            const double nd = std::max(0.5, static_cast<double>(pt.n_down));
            pt.variance = 4.0 * nu * nd /
                          (static_cast<double>(total) * total * static_cast<double>(total));
        }
        series.points.push_back(pt);
    }
    series.validate();
    return series;
}

void GratingSpec::validate() const {
    if (!(period_um > 0.0)) throw config_error("GratingSpec: period must be > 0");
    if (!(duty > 0.0 && duty < 1.0)) throw config_error("GratingSpec: duty must lie in (0, 1)");
}

double grating_autocorrelation(const GratingSpec& grating, double displacement_periods) {
    grating.validate();
    const double d = grating.duty;
    double u = std::fmod(std::abs(displacement_periods), 1.0);
    // circular overlap of two duty-d slits offset by u periods, normalized to 1 at u = 0
    const double overlap = std::max(0.0, d - u) + std::max(0.0, u + d - 1.0);
    return overlap / d;
}

PolarizationSeries grating_correlation(const GratingSpec& grating,
                                       const instr::InstrumentConfig& cfg, int n_bins) {
    grating.validate();
    cfg.validate();
    if (n_bins < 2) throw config_error("grating_correlation: need at least 2 bins");

    PolarizationSeries series;
    series.polarity = Polarity::off;
    series.provenance = "model";
    const double lo = cfg.lambda_min_ang, hi = cfg.lambda_max_ang;
    const double width = (hi - lo) / n_bins;
    for (int i = 0; i < n_bins; ++i) {
        PolarizationPoint pt;
        pt.lambda_ang = lo + (i + 0.5) * width;
        const double delta_um = instr::spin_echo_length(cfg, pt.lambda_ang);
        pt.value = grating_autocorrelation(grating, delta_um / grating.period_um);
        pt.variance = 1e-18;
        series.points.push_back(pt);
    }
    return series;
}

} // namespace seoam::signal
