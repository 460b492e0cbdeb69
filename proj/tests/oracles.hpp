// Test-only reference implementations, independent of the library's closed
// forms: angular Fourier quadrature, 1D Simpson integration, and the raw
// wavepacket field formulas typed out directly.
#pragma once

#include "seoam/wavepacket.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace oracles {

inline constexpr double pi = std::numbers::pi;

/// Offset Gaussian planewave psi(x, y) = A exp(-((x-d)^2 + y^2)/s^2) e^{i ky y}.
inline std::complex<double> offset_planewave(const seoam::oam::WavePacket& wp, double x,
                                             double y) {
    const double s2 = wp.coherence_length * wp.coherence_length;
    const double dx = x - wp.offset;
    return std::polar(wp.amplitude * std::exp(-(dx * dx + y * y) / s2),
                      wp.transverse_momentum * y);
}

/// Coherent pair at -+delta with relative phase beta.
inline std::complex<double> split_pair(const seoam::oam::WavePacket& wp, double x, double y) {
    const double s2 = wp.coherence_length * wp.coherence_length;
    const double dp = x + wp.offset, dm = x - wp.offset;
    const std::complex<double> a =
        std::polar(std::exp(-(dp * dp + y * y) / s2), 0.5 * wp.relative_phase);
    const std::complex<double> b =
        std::polar(std::exp(-(dm * dm + y * y) / s2), -0.5 * wp.relative_phase);
    return wp.amplitude / std::sqrt(2.0) * (a + b);
}

inline std::complex<double> field_of(const seoam::oam::WavePacket& wp, double x, double y) {
    return wp.kind == seoam::oam::PacketKind::single_offset ? offset_planewave(wp, x, y)
                                                            : split_pair(wp, x, y);
}

/// (1/2pi) integral psi(r, phi) e^{-i ell phi} d phi on a uniform grid
/// (trapezoid is spectrally exact for periodic integrands).
inline std::complex<double> angular_fourier(
    const std::function<std::complex<double>(double, double)>& field, int ell, double r,
    int n_phi = 4096) {
    std::complex<double> acc = 0.0;
    for (int j = 0; j < n_phi; ++j) {
        const double phi = 2.0 * pi * j / n_phi;
        acc += field(r * std::cos(phi), r * std::sin(phi)) * std::polar(1.0, -ell * phi);
    }
    return acc / static_cast<double>(n_phi);
}

/// Composite Simpson on [a, b] with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 4000) {
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 == 0 ? 2.0 : 4.0);
    return acc * h / 3.0;
}

/// p[ell] by brute force: angular Fourier profile at many radii, then radial
/// Simpson of r |f_ell|^2, normalized over the window.
inline std::vector<double> brute_force_spectrum(
    const std::function<std::complex<double>(double, double)>& field, int ell_min, int ell_max,
    double r_max, int n_r = 600, int n_phi = 2048) {
    std::vector<double> masses;
    for (int ell = ell_min; ell <= ell_max; ++ell) {
        auto integrand = [&](double r) {
            return r * std::norm(angular_fourier(field, ell, r, n_phi));
        };
        masses.push_back(simpson(integrand, 0.0, r_max, n_r));
    }
    double total = 0.0;
    for (double m : masses) total += m;
    for (double& m : masses) m /= total;
    return masses;
}

} // namespace oracles
