#pragma once

#include <numbers>

namespace seoam {

/// CODATA values used throughout. Immutable by construction.
namespace constants {

inline constexpr double neutron_mass_kg = 1.67492749804e-27;
inline constexpr double gyromagnetic_ratio_rad_per_s_t = 1.83247171e8;
inline constexpr double hbar_j_s = 1.054571817e-34;
inline constexpr double earth_rotation_rad_per_s = 7.2921150e-5;

inline constexpr double pi = std::numbers::pi;

} // namespace constants

namespace units {

inline constexpr double m_per_angstrom = 1e-10;
inline constexpr double m_per_um = 1e-6;
inline constexpr double angstrom_per_um = 1e4;

/// c_SE conversions: 1 um/A^2 = 1e14 m^-1.
inline constexpr double inv_m_per_um_per_ang2 = 1e14;

inline constexpr double deg_to_rad(double deg) { return deg * constants::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / constants::pi; }

} // namespace units

} // namespace seoam
