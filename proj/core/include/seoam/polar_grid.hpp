#pragma once

#include "seoam/wavepacket.hpp"

#include <complex>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace seoam::oam {

/// Complex scalar field on a Cartesian point, used to populate polar grids.
using FieldFunction = std::function<std::complex<double>(double x, double y)>;

struct PolarGridSpec {
    double radius = 0.0; ///< radial extent R; 0 selects a per-field default
    int n_radial = 512;
    int n_azimuthal = 1024; ///< must be even
};

/// Complex samples on an (r, phi) grid with a radial quadrature rule attached.
/// Fields built from a generator keep it, so translated copies can be sampled
/// exactly instead of interpolated.
class PolarGridField {
public:
    /// Samples f on Gauss-Legendre radial nodes and a uniform phi grid.
    /// Throws grid_extent_error if the field has not decayed to
    /// 1e-8 * max|f| at r = R.
    static PolarGridField from_function(const FieldFunction& f, const PolarGridSpec& spec);

    /// Samples the packet's transverse wavefunction (R defaults to |delta| + 8 sigma).
    static PolarGridField from_wavepacket(const WavePacket& wp, PolarGridSpec spec = {});

    /// g(r) * sum_i w_i e^{i ell_i phi} with shared radial profile g.
    static PolarGridField from_superposition(
        const std::vector<std::pair<int, std::complex<double>>>& modes,
        const std::function<double(double)>& radial_profile, PolarGridSpec spec);

    /// Same generator displaced by (x0, y0), sampled on a grid whose radius is
    /// enlarged to keep the boundary invariant.
    PolarGridField translated(double x0, double y0) const;

    double radius() const { return radius_; }
    int n_radial() const { return n_radial_; }
    int n_azimuthal() const { return n_azimuthal_; }
    const FieldFunction& generator() const { return generator_; }

    /// Radial profile f_ell(r_i) of the angular Fourier mode ell.
    std::vector<std::complex<double>> mode_radial(int ell) const;

    /// integral r |f_ell|^2 dr for one mode (unnormalized mass).
    double mode_mass(int ell) const;

    /// integral r <|f|^2>_phi dr; equals the sum of all mode masses (Parseval).
    double total_mass() const;

    const std::vector<double>& radial_nodes() const { return r_; }
    const std::vector<double>& radial_weights() const { return w_; }
    std::complex<double> sample(int i_r, int i_phi) const {
        return samples_[static_cast<size_t>(i_r) * n_azimuthal_ + i_phi];
    }

private:
    PolarGridField() = default;

    double radius_ = 0.0;
    int n_radial_ = 0;
    int n_azimuthal_ = 0;
    std::vector<double> r_, w_;
    std::vector<std::complex<double>> samples_; // row-major [i_r][i_phi]
    FieldFunction generator_;
};

/// OAM distribution from the angular Fourier transform and radial quadrature,
/// fully independent of the closed forms. The window defaults to every ell
/// resolvable on the grid, trimmed to the requested captured mass.
OamDistribution numeric_oam_spectrum(const PolarGridField& field,
                                     std::optional<ModeWindow> window = std::nullopt,
                                     double captured_mass_threshold = 0.999);

/// <k_x>, <k_y> of a normalized superposition of vortex modes sharing one
/// radial profile, evaluated by quadrature on the polar grid.
std::pair<double, double> transverse_momentum_expectation(
    const std::vector<std::pair<int, std::complex<double>>>& modes,
    const std::function<double(double)>& radial_profile, PolarGridSpec spec = {});

/// <L_z^2> change under a field translation by (x0, y0), in hbar^2, computed
/// two independent ways (spectral moment of the translated field; direct
/// quadrature of the difference operator) and required to agree to rel_tol.
double second_moment_translation_delta(const PolarGridField& field, double x0, double y0,
                                       double rel_tol = 1e-6);

/// <L_z> change under the same translation (zero for intrinsic states).
double first_moment_translation_delta(const PolarGridField& field, double x0, double y0);

} // namespace seoam::oam
