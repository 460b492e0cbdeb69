#include "seoam/instrument.hpp"

#include <json.hpp>

#include <cmath>
#include <set>

namespace seoam::instr {

using namespace constants;
using nlohmann::json;

namespace {

void check_lambda_sane(double lambda_ang) {
    if (!(lambda_ang >= 0.0) || lambda_ang > 100.0)
        throw config_error("wavelength " + std::to_string(lambda_ang) +
                           " A outside the supported range [0, 100] A");
}

} // namespace

void InstrumentConfig::validate() const {
    if (!(l1_m > 0.0 && l2_m > 0.0 && l3_m > 0.0))
        throw config_error("InstrumentConfig: lengths must be > 0");
    if (!(theta_deg > 0.0 && theta_deg < 90.0))
        throw config_error("InstrumentConfig: poleshoe angle must lie in (0, 90) degrees");
    if (!(lambda_min_ang < lambda_max_ang))
        throw config_error("InstrumentConfig: lambda_min_ang must be < lambda_max_ang");
    if (lambda_min_ang < 0.1 || lambda_max_ang > 100.0)
        throw config_error("InstrumentConfig: wavelength band outside [0.1, 100] A");
    if (!(omega_rad_s >= 0.0)) throw config_error("InstrumentConfig: omega_rad_s must be >= 0");
    if (b0_tesla && rf_hz) {
        const double resonant = 2.0 * pi * (*rf_hz) / gyromagnetic_ratio_rad_per_s_t;
        if (std::abs(*b0_tesla - resonant) > 5e-3 * std::abs(resonant))
            throw config_error("InstrumentConfig: b0_tesla and rf_hz violate B0 = 2 pi f / gamma "
                               "by more than 0.5%");
    }
    if (c_se_um_per_ang2 && !(*c_se_um_per_ang2 >= 0.0))
        throw config_error("InstrumentConfig: c_se_um_per_ang2 must be >= 0");
}

double InstrumentConfig::static_field_tesla() const {
    if (b0_tesla) return *b0_tesla;
    if (rf_hz) return 2.0 * pi * (*rf_hz) / gyromagnetic_ratio_rad_per_s_t;
    throw config_error("InstrumentConfig: neither b0_tesla nor rf_hz is set");
}

double InstrumentConfig::geometry_factor_m() const {
    return std::sin(latitude_rad()) * (l1_m + l3_m + 2.0 * l2_m);
}

std::string InstrumentConfig::to_json() const {
    json j;
    j["l1_m"] = l1_m;
    j["l2_m"] = l2_m;
    j["l3_m"] = l3_m;
    j["latitude_deg"] = latitude_deg;
    j["theta_deg"] = theta_deg;
    if (b0_tesla) j["b0_tesla"] = *b0_tesla;
    if (rf_hz) j["rf_hz"] = *rf_hz;
    if (c_se_um_per_ang2) j["c_se_um_per_ang2"] = *c_se_um_per_ang2;
    j["omega_rad_s"] = omega_rad_s;
    j["lambda_min_ang"] = lambda_min_ang;
    j["lambda_max_ang"] = lambda_max_ang;
    return j.dump(2);
}

InstrumentConfig InstrumentConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw config_error(std::string("InstrumentConfig: bad JSON: ") + e.what());
    }
    static const std::set<std::string> known = {
        "l1_m",    "l2_m",         "l3_m",           "latitude_deg",
        "theta_deg", "b0_tesla",   "rf_hz",          "c_se_um_per_ang2",
        "omega_rad_s", "lambda_min_ang", "lambda_max_ang"};
    for (const auto& [key, _] : j.items())
        if (!known.contains(key))
            throw config_error("InstrumentConfig: unknown key '" + key + "'");

    InstrumentConfig cfg;
    cfg.rf_hz.reset();
    auto get = [&j](const char* key, double& target) {
        if (j.contains(key)) target = j.at(key).get<double>();
    };
    get("l1_m", cfg.l1_m);
    get("l2_m", cfg.l2_m);
    get("l3_m", cfg.l3_m);
    get("latitude_deg", cfg.latitude_deg);
    get("theta_deg", cfg.theta_deg);
    get("omega_rad_s", cfg.omega_rad_s);
    get("lambda_min_ang", cfg.lambda_min_ang);
    get("lambda_max_ang", cfg.lambda_max_ang);
    if (j.contains("b0_tesla")) cfg.b0_tesla = j.at("b0_tesla").get<double>();
    if (j.contains("rf_hz")) cfg.rf_hz = j.at("rf_hz").get<double>();
    if (j.contains("c_se_um_per_ang2")) cfg.c_se_um_per_ang2 = j.at("c_se_um_per_ang2").get<double>();
    if (!cfg.b0_tesla && !cfg.rf_hz) cfg.rf_hz = 2.0e6;
    cfg.validate();
    return cfg;
}

double spin_echo_constant(const InstrumentConfig& cfg) {
    cfg.validate();
    if (cfg.c_se_um_per_ang2) return *cfg.c_se_um_per_ang2;
    const double b0 = cfg.static_field_tesla();
    const double c_se_inv_m = neutron_mass_kg * gyromagnetic_ratio_rad_per_s_t * b0 * cfg.l1_m /
                              (2.0 * pi * pi * hbar_j_s * std::tan(cfg.theta_rad()));
    return c_se_inv_m / units::inv_m_per_um_per_ang2;
}

double spin_echo_length(const InstrumentConfig& cfg, double lambda_ang) {
    check_lambda_sane(lambda_ang);
    return spin_echo_constant(cfg) * lambda_ang * lambda_ang;
}

double oam_eigenvalue(double delta_se_um, double lambda_ang) {
    if (!(delta_se_um >= 0.0) || delta_se_um > 1e4)
        throw config_error("oam_eigenvalue: delta_SE outside [0, 1e4] um");
    if (!(lambda_ang > 0.0)) throw config_error("oam_eigenvalue: lambda must be > 0");
    check_lambda_sane(lambda_ang);
    const double delta_se_ang = delta_se_um * units::angstrom_per_um;
    return 0.5 * delta_se_ang * (2.0 * pi / lambda_ang);
}

double sagnac_phase(const InstrumentConfig& cfg, double lambda_ang) {
    cfg.validate();
    check_lambda_sane(lambda_ang);
    if (lambda_ang == 0.0) return 0.0;

    const double delta_se_m = spin_echo_length(cfg, lambda_ang) * units::m_per_um;
    const double k_inv_m = 2.0 * pi / (lambda_ang * units::m_per_angstrom);
    const double sin_lat = std::sin(cfg.latitude_rad());

    // Per-mode form: (m Omega (ell+ - ell-) / (hbar |k|)) sin(Lat) (L1 + L3 + 2 L2).
    const double delta_ell = delta_se_m * k_inv_m; // ell+ - ell- = delta_SE |k|
    const double phase_modes = neutron_mass_kg * cfg.omega_rad_s * delta_ell /
                               (hbar_j_s * k_inv_m) * sin_lat *
                               (cfg.l1_m + cfg.l3_m + 2.0 * cfg.l2_m);

    // Area form: 2 m A Omega sin(Lat) / hbar with A = delta_SE ((L1+L3)/2 + L2).
    const double area_m2 = delta_se_m * (0.5 * (cfg.l1_m + cfg.l3_m) + cfg.l2_m);
    const double phase_area =
        2.0 * neutron_mass_kg * area_m2 * cfg.omega_rad_s * sin_lat / hbar_j_s;

    if (std::abs(phase_modes - phase_area) >
        1e-12 * std::max({std::abs(phase_modes), std::abs(phase_area), 1e-300}))
        throw consistency_error("sagnac_phase: mode and area routes disagree");
    return cfg.orientation_sign * phase_modes;
}

double predict_a2(const InstrumentConfig& cfg) {
    cfg.validate();
    const double c_se_inv_m = spin_echo_constant(cfg) * units::inv_m_per_um_per_ang2;
    const double a2_inv_m2 = c_se_inv_m * neutron_mass_kg * cfg.omega_rad_s / hbar_j_s *
                             cfg.geometry_factor_m();
    return cfg.orientation_sign * a2_inv_m2 * units::m_per_angstrom * units::m_per_angstrom;
}

double c_oam_from_a2(double a2_per_ang2, const InstrumentConfig& cfg) {
    cfg.validate();
    const double geom = cfg.geometry_factor_m();
    if (geom == 0.0 || cfg.omega_rad_s == 0.0)
        throw config_error("c_oam_from_a2: zero geometry factor or rotation rate");
    const double a2_inv_m2 = a2_per_ang2 / (units::m_per_angstrom * units::m_per_angstrom);
    const double c_oam_inv_m =
        2.0 * pi * hbar_j_s * a2_inv_m2 / (neutron_mass_kg * cfg.omega_rad_s * geom);
    return c_oam_inv_m * units::m_per_angstrom;
}

} // namespace seoam::instr
