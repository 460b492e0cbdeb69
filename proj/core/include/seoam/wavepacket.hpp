#pragma once

#include "seoam/errors.hpp"

#include <cmath>
#include <map>
#include <vector>

namespace seoam::oam {

/// Integer mode window [lo, hi], inclusive.
struct ModeWindow {
    int lo = 0;
    int hi = 0;

    int size() const { return hi - lo + 1; }
    bool contains(int ell) const { return ell >= lo && ell <= hi; }
};

enum class PacketKind {
    single_offset, ///< Gaussian envelope offset by delta along x, carrying k_y
    split_pair     ///< coherent pair at +-delta (separation 2*delta), relative phase beta
};

/// Offset Gaussian planewave, or a coherent split pair of two such packets.
/// Model units are dimensionless (lengths in a reference length, momenta inverse).
struct WavePacket {
    double amplitude = 1.0;        ///< overall amplitude A, > 0
    double offset = 0.0;           ///< delta; for split pairs the half-separation
    double coherence_length = 1.0; ///< sigma, > 0
    double transverse_momentum = 0.0; ///< k_y (unused for split pairs)
    double relative_phase = 0.0;      ///< beta (split pairs only)
    PacketKind kind = PacketKind::single_offset;

    /// Full separation of a split pair.
    double separation() const { return 2.0 * offset; }

    void validate() const {
        if (!(coherence_length > 0.0)) throw config_error("WavePacket: coherence_length must be > 0");
        if (!(amplitude > 0.0)) throw config_error("WavePacket: amplitude must be > 0");
        if (kind == PacketKind::split_pair && transverse_momentum != 0.0)
            throw config_error("WavePacket: split pair carries no momentum in the split plane");
    }
};

/// Probability over integer OAM mode numbers, normalized over a finite window.
class OamDistribution {
public:
    OamDistribution() = default;

    /// Takes unnormalized masses over [window.lo, window.hi] plus the exact (or
    /// best available) total mass of the untruncated distribution; renormalizes.
    OamDistribution(ModeWindow window, std::vector<double> masses, double total_mass);

    const ModeWindow& window() const { return window_; }

    /// p[ell]; zero outside the window.
    double probability(int ell) const;

    /// Fraction of the untruncated mass captured by the window, in (0, 1].
    double captured_mass() const { return captured_mass_; }

    /// sum over the window of ell^n p[ell]  (units hbar^n).
    double moment(int n) const;

    /// (ell, probability) pairs in ascending ell.
    std::vector<std::pair<int, double>> entries() const;

private:
    ModeWindow window_{};
    std::vector<double> probs_;
    double captured_mass_ = 1.0;
};

} // namespace seoam::oam
