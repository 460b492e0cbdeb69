#include "seoam/oam_spectrum.hpp"
#include "seoam/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace seoam::oam {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double checked_exp(double log_value, const char* where) {
    if (log_value > 700.0)
        throw numeric_range_error(std::string(where) + ": overflow (log magnitude " +
                                  std::to_string(log_value) + ")");
    return std::exp(log_value);
}

// Angular Fourier coefficient of exp(w+ e^{i phi} + w- e^{-i phi}) for real w+-:
//   c_ell = sum_n w+^{n+ell} w-^n / ((n+ell)! n!)
// reduced to I or J of 2 sqrt(|w+ w-|) with a (|w+|/|w-|)^{ell/2} prefactor.
double angular_coefficient(double wp, double wm, int ell) {
    if (ell < 0) return angular_coefficient(wm, wp, -ell);

    if (wp == 0.0 && wm == 0.0) return ell == 0 ? 1.0 : 0.0;
    if (wm == 0.0) { // single exponential: w+^ell / ell!
        if (wp == 0.0) return ell == 0 ? 1.0 : 0.0;
        const double lg = ell * std::log(std::abs(wp)) - std::lgamma(ell + 1.0);
        double sign = (wp < 0.0 && ell % 2 != 0) ? -1.0 : 1.0;
        return sign * checked_exp(lg, "vortex_mode_amplitude");
    }
    if (wp == 0.0) return 0.0; // needs w+^{n+ell} with n >= 0, ell > 0

    const double product = wp * wm;
    const double arg = 2.0 * std::sqrt(std::abs(product));
    const double log_pref = 0.5 * ell * (std::log(std::abs(wp)) - std::log(std::abs(wm)));

    if (product > 0.0) {
        const double sign = (wp < 0.0 && ell % 2 != 0) ? -1.0 : 1.0;
        return sign * checked_exp(log_pref + bessel::log_bessel_i(ell, arg),
                                  "vortex_mode_amplitude");
    }
    const double j = bessel::bessel_j(ell, arg);
    const double sign = (wp < 0.0 && ell % 2 != 0) ? -1.0 : 1.0;
    const double pref = checked_exp(log_pref, "vortex_mode_amplitude");
    const double value = sign * pref * j;
    if (!std::isfinite(value))
        throw numeric_range_error("vortex_mode_amplitude: non-finite mode amplitude");
    return value;
}

OamDistribution build_from_log_masses(const ModeWindow& win,
                                      const std::vector<double>& log_masses,
                                      double total_mass) {
    std::vector<double> masses(log_masses.size());
    std::transform(log_masses.begin(), log_masses.end(), masses.begin(),
                   [](double lm) { return lm == kNegInf ? 0.0 : std::exp(lm); });
    return OamDistribution(win, std::move(masses), total_mass);
}

// Skellam-shaped closed form of the offset-planewave distribution:
// log p[ell] = -(z+ + z-) + (ell/2) log(z+/z-) + log I_ell(2 sqrt(z+ z-)),
// with z+- = sigma^2 (k_y +- 2 delta / sigma^2)^2 / 8. Sums to 1 exactly.
struct OffsetSpectrumParams {
    double z_plus;
    double z_minus;

    double log_prob(int ell) const {
        if (z_minus == 0.0 && z_plus == 0.0) return ell == 0 ? 0.0 : kNegInf;
        if (z_minus == 0.0) { // Poisson on ell >= 0
            if (ell < 0) return kNegInf;
            return -z_plus + ell * std::log(z_plus) - std::lgamma(ell + 1.0);
        }
        if (z_plus == 0.0) {
            if (ell > 0) return kNegInf;
            return -z_minus + (-ell) * std::log(z_minus) - std::lgamma(-ell + 1.0);
        }
        return -(z_plus + z_minus) + 0.5 * ell * (std::log(z_plus) - std::log(z_minus)) +
               bessel::log_bessel_i(ell, 2.0 * std::sqrt(z_plus * z_minus));
    }
};

OffsetSpectrumParams offset_spectrum_params(const WavePacket& wp) {
    const double q = 2.0 * wp.offset / (wp.coherence_length * wp.coherence_length);
    const double s2 = wp.coherence_length * wp.coherence_length;
    const double ap = wp.transverse_momentum + q;
    const double am = wp.transverse_momentum - q;
    return {s2 * ap * ap / 8.0, s2 * am * am / 8.0};
}

ModeWindow widen(const ModeWindow& w, int center) {
    const int half = std::max(w.hi - center, center - w.lo);
    const int grown = std::max(half + 8, static_cast<int>(half * 1.5));
    return {center - grown, center + grown};
}

} // namespace

OamDistribution::OamDistribution(ModeWindow window, std::vector<double> masses,
                                 double total_mass)
    : window_(window), probs_(std::move(masses)) {
    if (static_cast<int>(probs_.size()) != window_.size())
        throw config_error("OamDistribution: mass vector does not match window");
    double in_window = 0.0;
    for (double m : probs_) {
        if (!(m >= 0.0)) throw config_error("OamDistribution: negative mass");
        in_window += m;
    }
    if (in_window <= 0.0) throw config_error("OamDistribution: zero mass in window");
    captured_mass_ = total_mass > 0.0 ? std::min(in_window / total_mass, 1.0) : 1.0;
    for (double& m : probs_) m /= in_window;
}

double OamDistribution::probability(int ell) const {
    if (!window_.contains(ell)) return 0.0;
    return probs_[static_cast<size_t>(ell - window_.lo)];
}

double OamDistribution::moment(int n) const {
    double acc = 0.0;
    for (int ell = window_.lo; ell <= window_.hi; ++ell)
        acc += std::pow(static_cast<double>(ell), n) * probs_[static_cast<size_t>(ell - window_.lo)];
    return acc;
}

std::vector<std::pair<int, double>> OamDistribution::entries() const {
    std::vector<std::pair<int, double>> out;
    out.reserve(probs_.size());
    for (int ell = window_.lo; ell <= window_.hi; ++ell)
        out.emplace_back(ell, probs_[static_cast<size_t>(ell - window_.lo)]);
    return out;
}

std::complex<double> vortex_mode_amplitude(const WavePacket& wp, int ell, double r) {
    wp.validate();
    if (r < 0.0) throw config_error("vortex_mode_amplitude: r must be >= 0");

    const double s2 = wp.coherence_length * wp.coherence_length;
    const double envelope =
        wp.amplitude * std::exp(-(r * r + wp.offset * wp.offset) / s2);
    const double q = 2.0 * wp.offset / s2;

    if (wp.kind == PacketKind::single_offset) {
        const double w_plus = 0.5 * r * (q + wp.transverse_momentum);
        const double w_minus = 0.5 * r * (q - wp.transverse_momentum);
        return {envelope * angular_coefficient(w_plus, w_minus, ell), 0.0};
    }

    // Split pair: modes of the two mirrored packets interfere; even modes carry
    // cos(beta/2), odd ones -i sin(beta/2).
    const double radial = angular_coefficient(0.5 * r * q, 0.5 * r * q, ell);
    const double root2 = std::sqrt(2.0);
    if (ell % 2 == 0)
        return {root2 * envelope * radial * std::cos(0.5 * wp.relative_phase), 0.0};
    return {0.0, -root2 * envelope * radial * std::sin(0.5 * wp.relative_phase)};
}

ModeWindow default_mode_window(const WavePacket& wp) {
    const double s2 = wp.coherence_length * wp.coherence_length;
    const double ky = wp.kind == PacketKind::split_pair ? 0.0 : wp.transverse_momentum;
    const double variance = s2 * ky * ky / 4.0 + wp.offset * wp.offset / s2;
    const int half = std::max(32, static_cast<int>(std::ceil(8.0 * std::sqrt(variance))));
    const int center = static_cast<int>(std::lround(ky * wp.offset));
    return {center - half, center + half};
}

OamDistribution oam_spectrum_offset_planewave(const WavePacket& wp,
                                              std::optional<ModeWindow> window,
                                              double captured_mass_threshold) {
    wp.validate();
    if (wp.kind != PacketKind::single_offset)
        throw config_error("oam_spectrum_offset_planewave: packet is not single-offset");

    const auto params = offset_spectrum_params(wp);
    const bool auto_window = !window.has_value();
    ModeWindow win = window.value_or(default_mode_window(wp));
    const int center = static_cast<int>(std::lround(wp.transverse_momentum * wp.offset));

    for (int attempt = 0;; ++attempt) {
        std::vector<double> log_masses(static_cast<size_t>(win.size()));
        for (int ell = win.lo; ell <= win.hi; ++ell)
            log_masses[static_cast<size_t>(ell - win.lo)] = params.log_prob(ell);
        auto dist = build_from_log_masses(win, log_masses, 1.0);
        if (dist.captured_mass() >= captured_mass_threshold) return dist;
        if (!auto_window || attempt >= 40) {
            const ModeWindow suggestion = widen(win, center);
            throw truncation_error("oam spectrum window captures " +
                                       std::to_string(dist.captured_mass()) +
                                       " < " + std::to_string(captured_mass_threshold),
                                   suggestion.lo, suggestion.hi);
        }
        win = widen(win, center);
    }
}

OamDistribution oam_spectrum_split_pair(const WavePacket& wp,
                                        std::optional<ModeWindow> window,
                                        double captured_mass_threshold) {
    wp.validate();
    if (wp.kind != PacketKind::split_pair)
        throw config_error("oam_spectrum_split_pair: packet is not a split pair");

    const double s2 = wp.coherence_length * wp.coherence_length;
    const double x = wp.offset * wp.offset / s2;
    const double even_weight = std::cos(0.5 * wp.relative_phase) * std::cos(0.5 * wp.relative_phase);
    const double odd_weight = std::sin(0.5 * wp.relative_phase) * std::sin(0.5 * wp.relative_phase);

    // Exact untruncated mass: sum_ell e^{-x} I_ell(x) = 1 and
    // sum_ell (-1)^ell e^{-x} I_ell(x) = e^{-2x} split by parity.
    const double even_total = 0.5 * (1.0 + std::exp(-2.0 * x));
    const double odd_total = 0.5 * (1.0 - std::exp(-2.0 * x));
    double total = even_weight * even_total + odd_weight * odd_total;
    if (x == 0.0) total = even_weight; // lone ell = 0 mode

    const bool auto_window = !window.has_value();
    ModeWindow win = window.value_or(default_mode_window(wp));

    for (int attempt = 0;; ++attempt) {
        std::vector<double> log_masses(static_cast<size_t>(win.size()), kNegInf);
        for (int ell = win.lo; ell <= win.hi; ++ell) {
            const double parity = (ell % 2 == 0) ? even_weight : odd_weight;
            if (parity == 0.0) continue;
            if (x == 0.0) {
                if (ell == 0)
                    log_masses[static_cast<size_t>(ell - win.lo)] = std::log(parity);
                continue;
            }
            log_masses[static_cast<size_t>(ell - win.lo)] =
                std::log(parity) - x + bessel::log_bessel_i(ell, x);
        }
        auto dist = build_from_log_masses(win, log_masses, total);
        if (dist.captured_mass() >= captured_mass_threshold) return dist;
        if (!auto_window || attempt >= 40) {
            const ModeWindow suggestion = widen(win, 0);
            throw truncation_error("split-pair window captures " +
                                       std::to_string(dist.captured_mass()) +
                                       " < " + std::to_string(captured_mass_threshold),
                                   suggestion.lo, suggestion.hi);
        }
        win = widen(win, 0);
    }
}

double oam_moment(const OamDistribution& dist, int n) {
    if (n < 0) throw config_error("oam_moment: n must be >= 0");
    return dist.moment(n);
}

double extrinsic_oam(const WavePacket& wp) {
    wp.validate();
    if (wp.kind == PacketKind::split_pair) return 0.0; // <p> vanishes in the split plane
    return wp.offset * wp.transverse_momentum;
}

} // namespace seoam::oam
