#pragma once

#include "seoam/wavepacket.hpp"

#include <complex>
#include <optional>

namespace seoam::oam {

/// Radial amplitude of the vortex mode ell contained in the packet, i.e. the
/// coefficient of e^{i ell phi} in the angular Fourier expansion of the
/// wavefunction, evaluated at radius r. The coefficient is real for these
/// packets; it is returned as complex for interface uniformity.
std::complex<double> vortex_mode_amplitude(const WavePacket& wp, int ell, double r);

/// Default window: centered at round(k_y * delta) with half width
/// max(32, 8 * sqrt(sigma^2 k_y^2 / 4 + delta^2 / sigma^2)).
ModeWindow default_mode_window(const WavePacket& wp);

/// Closed-form OAM distribution of a single-offset packet. If no window is
/// given, the default one is widened until captured mass reaches the
/// threshold; an explicit window that captures less throws truncation_error.
OamDistribution oam_spectrum_offset_planewave(const WavePacket& wp,
                                              std::optional<ModeWindow> window = std::nullopt,
                                              double captured_mass_threshold = 0.999);

/// Closed-form OAM distribution of a split pair (beta = 0 keeps only even
/// modes, beta = pi only odd ones).
OamDistribution oam_spectrum_split_pair(const WavePacket& wp,
                                        std::optional<ModeWindow> window = std::nullopt,
                                        double captured_mass_threshold = 0.999);

/// n-th OAM moment of a distribution (units hbar^n).
double oam_moment(const OamDistribution& dist, int n);

/// z-component of <r> x <p> from the closed-form Gaussian expectations
/// (units hbar). Zero for split pairs, delta * k_y for single-offset packets.
double extrinsic_oam(const WavePacket& wp);

} // namespace seoam::oam
