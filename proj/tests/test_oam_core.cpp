#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "seoam/oam_spectrum.hpp"
#include "oracles.hpp"

#include <cmath>
#include <complex>

using namespace seoam;
using oam::ModeWindow;
using oam::PacketKind;
using oam::WavePacket;

namespace {

WavePacket offset_packet(double delta, double sigma, double ky, double amplitude = 1.0) {
    WavePacket wp;
    wp.kind = PacketKind::single_offset;
    wp.offset = delta;
    wp.coherence_length = sigma;
    wp.transverse_momentum = ky;
    wp.amplitude = amplitude;
    return wp;
}

WavePacket pair_packet(double delta, double sigma, double beta) {
    WavePacket wp;
    wp.kind = PacketKind::split_pair;
    wp.offset = delta;
    wp.coherence_length = sigma;
    wp.relative_phase = beta;
    return wp;
}

} // namespace

TEST_CASE("centered packet is purely ell = 0") {
    const auto wp = offset_packet(0.0, 2.0, 0.0, 1.7);
    for (double r : {0.0, 0.5, 1.0, 3.0}) {
        const auto psi0 = oam::vortex_mode_amplitude(wp, 0, r);
        CHECK(psi0.real() == doctest::Approx(1.7 * std::exp(-r * r / 4.0)).epsilon(1e-14));
        CHECK(psi0.imag() == 0.0);
        for (int ell : {-3, -1, 1, 2, 5})
            CHECK(std::abs(oam::vortex_mode_amplitude(wp, ell, r)) == 0.0);
    }
}

TEST_CASE("mode amplitudes match the angular Fourier quadrature") {
    // Strongly split case (main vortex mode ell = 40); the ring region is
    // where the mode has weight.
    const auto strong = offset_packet(10.0, 2.0, 4.0);
    auto strong_field = [&](double x, double y) { return oracles::offset_planewave(strong, x, y); };
    for (int ell = 38; ell <= 42; ++ell) {
        for (double r : {6.0, 8.0, 10.0, 12.0, 14.0}) {
            const auto expected = oracles::angular_fourier(strong_field, ell, r);
            const auto got = oam::vortex_mode_amplitude(strong, ell, r);
            CHECK(std::abs(got - expected) <= 1e-8 * std::abs(expected));
        }
    }

    // Moderate case exercising the oscillatory branch (k_y > 2 delta / sigma^2).
    const auto mild = offset_packet(1.5, 2.0, 3.0);
    auto mild_field = [&](double x, double y) { return oracles::offset_planewave(mild, x, y); };
    for (int ell = -3; ell <= 7; ++ell) {
        for (double r : {0.5, 1.0, 2.0, 4.0, 6.0}) {
            const auto expected = oracles::angular_fourier(mild_field, ell, r);
            const auto got = oam::vortex_mode_amplitude(mild, ell, r);
            CHECK(std::abs(got - expected) <=
                  1e-8 * std::max(std::abs(expected), 1e-12));
        }
    }
}

TEST_CASE("main vortex mode has the ring profile of the parent packet") {
    const auto wp = offset_packet(10.0, 2.0, 4.0);
    double best_r = 0.0, best = 0.0;
    for (double r = 0.25; r < 20.0; r += 0.25) {
        const double mag = std::abs(oam::vortex_mode_amplitude(wp, 40, r));
        if (mag > best) {
            best = mag;
            best_r = r;
        }
    }
    CHECK(std::abs(oam::vortex_mode_amplitude(wp, 40, 0.0)) == 0.0);
    CHECK(best_r > 8.0);  // ring near the packet offset
    CHECK(best_r < 12.5);
}

TEST_CASE("split-pair modes match the quadrature oracle") {
    const auto wp = pair_packet(3.0, 2.0, 0.7);
    auto field = [&](double x, double y) { return oracles::split_pair(wp, x, y); };
    for (int ell = -4; ell <= 4; ++ell) {
        for (double r : {0.5, 1.5, 3.0, 5.0}) {
            const auto expected = oracles::angular_fourier(field, ell, r);
            const auto got = oam::vortex_mode_amplitude(wp, ell, r);
            CHECK(std::abs(got - expected) <= 1e-10 * std::max(std::abs(expected), 1e-10));
        }
    }
}

TEST_CASE("symmetric packet gives a symmetric spectrum with zero mean") {
    const auto dist = oam::oam_spectrum_offset_planewave(offset_packet(0.0, 4.0, 2.0));
    for (int ell = 0; ell <= dist.window().hi; ++ell)
        CHECK(dist.probability(ell) == doctest::Approx(dist.probability(-ell)).epsilon(1e-12));
    CHECK(oam::oam_moment(dist, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(oam::oam_moment(dist, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("central mode sits at k_y * delta") {
    const auto dist = oam::oam_spectrum_offset_planewave(offset_packet(100.0, 20.0, -1.0));
    int argmax = 0;
    double best = -1.0;
    for (const auto& [ell, p] : dist.entries())
        if (p > best) {
            best = p;
            argmax = ell;
        }
    CHECK(argmax >= -101);
    CHECK(argmax <= -99);
}

TEST_CASE("first-moment law <L_z> = k_y delta over the parameter sweep") {
    for (double sigma : {1.0, 5.0, 20.0, 50.0}) {
        for (double delta : {0.0, 7.0, 50.0, 100.0}) {
            for (double ky : {-5.0, -1.0, 0.5, 2.0}) {
                const auto wp = offset_packet(delta, sigma, ky);
                // Wide window so truncation cannot bias the mean.
                auto win = oam::default_mode_window(wp);
                const int center = static_cast<int>(std::lround(ky * delta));
                const int half = (win.hi - win.lo) / 2 + 64;
                const auto dist = oam::oam_spectrum_offset_planewave(
                    wp, ModeWindow{center - half, center + half});
                const double target = ky * delta;
                CHECK(std::abs(oam::oam_moment(dist, 1) - target) <=
                      1e-3 * std::max(1.0, std::abs(target)));
            }
        }
    }
}

TEST_CASE("closed-form spectrum matches the brute-force quadrature oracle") {
    // Small enough case for the dense oracle: every mode to 1e-6 absolute.
    const auto wp = offset_packet(4.0, 3.0, -1.5);
    const ModeWindow win{-26, 14};
    const auto dist = oam::oam_spectrum_offset_planewave(wp, win);
    auto field = [&](double x, double y) { return oracles::offset_planewave(wp, x, y); };
    const auto oracle = oracles::brute_force_spectrum(field, win.lo, win.hi, 4.0 + 8.0 * 3.0);
    for (int ell = win.lo; ell <= win.hi; ++ell)
        CHECK(std::abs(dist.probability(ell) - oracle[static_cast<size_t>(ell - win.lo)]) <=
              1e-6);
}

TEST_CASE("split-pair parity selection") {
    const auto even = oam::oam_spectrum_split_pair(pair_packet(5.0, 2.0, 0.0));
    double odd_mass = 0.0;
    for (const auto& [ell, p] : even.entries())
        if (ell % 2 != 0) odd_mass += p;
    CHECK(odd_mass < 1e-12);

    const auto odd = oam::oam_spectrum_split_pair(pair_packet(5.0, 2.0, oracles::pi));
    double even_mass = 0.0;
    for (const auto& [ell, p] : odd.entries())
        if (ell % 2 == 0) even_mass += p;
    CHECK(even_mass < 1e-12);
}

TEST_CASE("unsplit pair is the pure ell = 0 state") {
    const auto dist = oam::oam_spectrum_split_pair(pair_packet(0.0, 2.0, 0.0));
    CHECK(dist.probability(0) == doctest::Approx(1.0));
    CHECK(dist.captured_mass() == doctest::Approx(1.0));
}

TEST_CASE("beta = pi with small splitting concentrates on ell = +-1") {
    const auto dist = oam::oam_spectrum_split_pair(pair_packet(0.2, 2.0, oracles::pi));
    CHECK(dist.probability(1) == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(dist.probability(-1) == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(dist.probability(1) + dist.probability(-1) >= 0.99);
}

TEST_CASE("split-pair masses match the brute-force oracle") {
    const auto wp = pair_packet(3.0, 2.0, oracles::pi / 3.0);
    const ModeWindow win{-14, 14};
    const auto dist = oam::oam_spectrum_split_pair(wp, win);
    auto field = [&](double x, double y) { return oracles::split_pair(wp, x, y); };
    const auto oracle = oracles::brute_force_spectrum(field, win.lo, win.hi, 3.0 + 8.0 * 2.0);
    for (int ell = win.lo; ell <= win.hi; ++ell)
        CHECK(std::abs(dist.probability(ell) - oracle[static_cast<size_t>(ell - win.lo)]) <=
              1e-6);
}

TEST_CASE("distributions normalize and report captured mass") {
    const auto wp = offset_packet(50.0, 10.0, -1.0);
    const auto dist = oam::oam_spectrum_offset_planewave(wp);
    double total = 0.0;
    for (const auto& [ell, p] : dist.entries()) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(dist.captured_mass() >= 0.999);
}

TEST_CASE("too-small explicit windows raise a truncation error with a suggestion") {
    const auto wp = offset_packet(50.0, 10.0, -1.0);
    try {
        oam::oam_spectrum_offset_planewave(wp, ModeWindow{-55, -45});
        FAIL("expected truncation_error");
    } catch (const truncation_error& e) {
        CHECK(e.suggested_min() < -55);
        CHECK(e.suggested_max() > -45);
    }
}

TEST_CASE("moments") {
    const auto dist = oam::oam_spectrum_offset_planewave(offset_packet(10.0, 5.0, 2.0));
    CHECK(oam::oam_moment(dist, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(oam::oam_moment(dist, 1) == doctest::Approx(20.0).epsilon(1e-4));
    // Skellam-form variance: sigma^2 k_y^2 / 4 + delta^2 / sigma^2
    const double variance = oam::oam_moment(dist, 2) - std::pow(oam::oam_moment(dist, 1), 2);
    CHECK(variance == doctest::Approx(25.0 + 4.0).epsilon(1e-4));
    CHECK_THROWS_AS(oam::oam_moment(dist, -1), config_error);
}

TEST_CASE("extrinsic OAM equals <r> x <p>") {
    CHECK(oam::extrinsic_oam(offset_packet(10.0, 2.0, 4.0)) == doctest::Approx(40.0));
    CHECK(oam::extrinsic_oam(offset_packet(0.0, 2.0, 4.0)) == 0.0);
    CHECK(oam::extrinsic_oam(pair_packet(5.0, 2.0, 1.2)) == 0.0);
}

TEST_CASE("invalid packets are rejected") {
    auto bad = offset_packet(1.0, -1.0, 0.0);
    CHECK_THROWS_AS(bad.validate(), config_error);
    auto pair = pair_packet(1.0, 1.0, 0.0);
    pair.transverse_momentum = 0.5;
    CHECK_THROWS_AS(pair.validate(), config_error);
    CHECK_THROWS_AS(oam::vortex_mode_amplitude(offset_packet(1.0, 1.0, 0.0), 0, -0.5),
                    config_error);
}
