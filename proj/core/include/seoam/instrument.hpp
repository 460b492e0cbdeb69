#pragma once

#include "seoam/constants.hpp"
#include "seoam/errors.hpp"

#include <optional>
#include <string>

namespace seoam::instr {

/// Geometry and field settings of the Larmor-style spin-echo interferometer.
///
/// Canonical units: meters for geometry, radians internally for angles,
/// Angstrom for wavelengths, um/A^2 for the spin-echo constant. The JSON
/// serialization uses the unit-suffixed field names below.
struct InstrumentConfig {
    double l1_m = 1.137;  ///< first flipper pair spacing
    double l2_m = 3.489;  ///< central drift length
    double l3_m = 1.137;  ///< second flipper pair spacing
    double latitude_deg = 51.57;
    double theta_deg = 40.0;                 ///< poleshoe angle
    std::optional<double> b0_tesla;          ///< static field; resonance-tied to rf_hz
    std::optional<double> rf_hz = 2.0e6;     ///< RF flipper frequency
    std::optional<double> c_se_um_per_ang2;  ///< measured override of the computed constant
    double omega_rad_s = constants::earth_rotation_rad_per_s;
    double lambda_min_ang = 4.0;
    double lambda_max_ang = 12.75;

    /// Beam/rotation orientation; the default reproduces a negative Sagnac
    /// quadratic coefficient. Not part of the serialized schema.
    double orientation_sign = -1.0;

    void validate() const;

    double latitude_rad() const { return units::deg_to_rad(latitude_deg); }
    double theta_rad() const { return units::deg_to_rad(theta_deg); }

    /// B0 from the field entry or the resonance relation B0 = 2 pi f / gamma.
    double static_field_tesla() const;

    /// sin(latitude) * (L1 + L3 + 2 L2), the lumped geometry factor (m).
    double geometry_factor_m() const;

    std::string to_json() const;
    static InstrumentConfig from_json(const std::string& text);
};

/// c_SE = m gamma B0 L1 cot(theta) / (2 pi^2 hbar), in um/A^2.
/// A configured c_se_um_per_ang2 override wins over the computed value.
double spin_echo_constant(const InstrumentConfig& cfg);

/// delta_SE = c_SE lambda^2 (um). lambda outside [0.1, 100] A is rejected;
/// outside the configured band it is merely unusual, not an error.
double spin_echo_length(const InstrumentConfig& cfg, double lambda_ang);

/// ell_+- = +- delta_SE |k| / 2 with k = 2 pi / lambda; returns the + branch.
double oam_eigenvalue(double delta_se_um, double lambda_ang);

/// Earth-rotation Sagnac phase at one wavelength (rad), evaluated through the
/// per-mode form and the enclosed-area form, which must agree to 1e-12.
double sagnac_phase(const InstrumentConfig& cfg, double lambda_ang);

/// Predicted quadratic coefficient a2 = +-c_SE (m Omega / hbar) sin(Lat) (L1+L3+2L2),
/// in 1/A^2, signed by the orientation flag.
double predict_a2(const InstrumentConfig& cfg);

/// c_OAM = 2 pi hbar a2 / (m Omega sin(Lat) (L1+L3+2L2)), in 1/A.
double c_oam_from_a2(double a2_per_ang2, const InstrumentConfig& cfg);

} // namespace seoam::instr
