#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "seoam/instrument.hpp"

#include <cmath>
#include <random>

using namespace seoam;
using instr::InstrumentConfig;

TEST_CASE("resonance ties the static field to the RF frequency") {
    InstrumentConfig cfg;
    cfg.rf_hz = 2.0e6;
    // B0 = 2 pi f / gamma with CODATA gamma
    const double b0 = 2.0 * constants::pi * 2.0e6 / 1.83247171e8;
    CHECK(cfg.static_field_tesla() == doctest::Approx(b0).epsilon(1e-12));
    CHECK(cfg.static_field_tesla() == doctest::Approx(0.0686).epsilon(2e-3));

    cfg.b0_tesla = b0 * 1.05; // violates the resonance by 5%
    CHECK_THROWS_AS(cfg.validate(), config_error);
}

TEST_CASE("spin-echo constant from the field settings") {
    InstrumentConfig cfg; // theta = 40 deg, f = 2 MHz, L1 = 1.137 m
    const double c_se = instr::spin_echo_constant(cfg);
    CHECK(c_se == doctest::Approx(0.137).epsilon(2e-3));

    // Inverting the expression with CODATA constants puts L1 near 1.14 m for
    // c_SE = 0.137 um/A^2 exactly.
    const double b0 = cfg.static_field_tesla();
    const double l1 = 0.137e14 * 2.0 * constants::pi * constants::pi * 1.054571817e-34 *
                      std::tan(cfg.theta_rad()) / (1.67492749804e-27 * 1.83247171e8 * b0);
    CHECK(l1 == doctest::Approx(1.14).epsilon(5e-3));

    SUBCASE("zero field gives zero constant") {
        cfg.rf_hz = 0.0;
        CHECK(instr::spin_echo_constant(cfg) == 0.0);
    }
    SUBCASE("explicit override wins") {
        cfg.c_se_um_per_ang2 = 0.137;
        CHECK(instr::spin_echo_constant(cfg) == 0.137);
    }
    SUBCASE("missing field configuration is an error") {
        cfg.rf_hz.reset();
        cfg.b0_tesla.reset();
        CHECK_THROWS_AS(instr::spin_echo_constant(cfg), config_error);
    }
}

TEST_CASE("spin-echo length is quadratic in wavelength") {
    InstrumentConfig cfg;
    cfg.c_se_um_per_ang2 = 0.137;
    CHECK(instr::spin_echo_length(cfg, 10.0) == doctest::Approx(13.7).epsilon(1e-12));
    CHECK(instr::spin_echo_length(cfg, 0.0) == 0.0);
    CHECK_THROWS_AS(instr::spin_echo_length(cfg, 120.0), config_error);

    // grating peaks: delta_SE(lambda_n) = n * 2 um inverts to sqrt(2n/0.137)
    for (int n : {1, 2, 5}) {
        const double lambda_n = std::sqrt(2.0 * n / 0.137);
        CHECK(instr::spin_echo_length(cfg, lambda_n) == doctest::Approx(2.0 * n).epsilon(1e-12));
    }
    CHECK(std::sqrt(2.0 / 0.137) == doctest::Approx(3.82).epsilon(1e-3));
}

TEST_CASE("OAM eigenvalue per wavelength") {
    CHECK(instr::oam_eigenvalue(0.0, 5.0) == 0.0);
    // delta_SE = 13.7 um at 10 A: ell = pi * 1370 * 10 ~ 4.30e4
    CHECK(instr::oam_eigenvalue(13.7, 10.0) ==
          doctest::Approx(constants::pi * 1370.0 * 10.0).epsilon(1e-12));
    CHECK(instr::oam_eigenvalue(13.7, 10.0) == doctest::Approx(4.30e4).epsilon(2e-3));

    // slope in lambda is pi * c_SE (A units): 4304 per A for c_SE = 0.137
    InstrumentConfig cfg;
    cfg.c_se_um_per_ang2 = 0.137;
    for (double lambda : {4.0, 8.0, 12.75}) {
        const double ell = instr::oam_eigenvalue(instr::spin_echo_length(cfg, lambda), lambda);
        CHECK(ell / lambda == doctest::Approx(constants::pi * 1370.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(instr::oam_eigenvalue(2e4, 10.0), config_error);
    CHECK_THROWS_AS(instr::oam_eigenvalue(-1.0, 10.0), config_error);
}

TEST_CASE("predicted a2 and c_OAM reproduce the reference configuration") {
    InstrumentConfig cfg;
    const double a2 = instr::predict_a2(cfg);
    CHECK(a2 == doctest::Approx(-1.15e-3).epsilon(5e-3));

    const double c_oam = instr::c_oam_from_a2(a2, cfg);
    CHECK(c_oam == doctest::Approx(-8.62e3).epsilon(5e-3));
    CHECK(instr::c_oam_from_a2(0.0, cfg) == 0.0);

    // 2 pi * 1370 = 8608 is the unit-conversion identity behind that value
    CHECK(2.0 * constants::pi * 1370.0 == doctest::Approx(8608.0).epsilon(1e-4));

    SUBCASE("zero rotation rate is rejected for the inverse map") {
        cfg.omega_rad_s = 0.0;
        CHECK(instr::predict_a2(cfg) == 0.0);
        CHECK(instr::sagnac_phase(cfg, 10.0) == 0.0);
        CHECK_THROWS_AS(instr::c_oam_from_a2(1e-3, cfg), config_error);
    }
}

TEST_CASE("Sagnac phase equals a2 lambda^2 and both routes agree") {
    InstrumentConfig cfg;
    const double a2 = instr::predict_a2(cfg);
    for (double lambda : {4.0, 10.0, 12.75}) {
        CHECK(instr::sagnac_phase(cfg, lambda) ==
              doctest::Approx(a2 * lambda * lambda).epsilon(1e-10));
    }
    CHECK(instr::sagnac_phase(cfg, 10.0) == doctest::Approx(-0.115).epsilon(5e-3));
}

TEST_CASE("route and composition identities on random configurations") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> len(0.2, 5.0), lat(5.0, 85.0), lam(0.5, 20.0),
        theta(10.0, 80.0);
    for (int i = 0; i < 10000; ++i) {
        InstrumentConfig cfg;
        cfg.l1_m = len(rng);
        cfg.l2_m = len(rng);
        cfg.l3_m = len(rng);
        cfg.latitude_deg = lat(rng);
        cfg.theta_deg = theta(rng);
        // mode-vs-area agreement is asserted to 1e-12 inside sagnac_phase
        (void)instr::sagnac_phase(cfg, lam(rng));

        // c_oam_from_a2(predict_a2(cfg)) = 2 pi c_SE in A/A^2, any geometry
        const double c_se_ang = instr::spin_echo_constant(cfg) * units::angstrom_per_um;
        const double identity = instr::c_oam_from_a2(instr::predict_a2(cfg), cfg);
        CHECK(std::abs(identity - cfg.orientation_sign * 2.0 * constants::pi * c_se_ang) <=
              1e-12 * std::abs(identity));
    }
}

TEST_CASE("config JSON round trip with strict keys") {
    InstrumentConfig cfg;
    cfg.c_se_um_per_ang2 = 0.137;
    const auto text = cfg.to_json();
    const auto back = InstrumentConfig::from_json(text);
    CHECK(back.l1_m == cfg.l1_m);
    CHECK(back.latitude_deg == cfg.latitude_deg);
    CHECK(back.c_se_um_per_ang2.has_value());
    CHECK(*back.c_se_um_per_ang2 == 0.137);

    CHECK_THROWS_AS(InstrumentConfig::from_json("{\"l1_m\": 1.0, \"bogus\": 2}"), config_error);
    CHECK_THROWS_AS(InstrumentConfig::from_json("not json"), config_error);
    CHECK_THROWS_AS(InstrumentConfig::from_json("{\"theta_deg\": 95.0}"), config_error);
    CHECK_THROWS_AS(InstrumentConfig::from_json("{\"lambda_min_ang\": 13.0}"), config_error);
}
