#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "seoam/polarization.hpp"
#include "seoam/series_io.hpp"
#include "oracles.hpp"

#include <cmath>
#include <sstream>

using namespace seoam;
using signal::GratingSpec;
using signal::PolarizationModelParams;
using signal::Polarity;
using signal::SimulationOptions;

namespace {

PolarizationModelParams reference_params() {
    PolarizationModelParams p;
    p.epsilon = 5e-3;
    p.a1_per_ang = -2e-4;
    p.a2_per_ang2 = -1.083e-3;
    p.wobble = {{14.4e-5, 2.15, 0.6}, {8.22e-5, 4.30, 1.1}};
    p.polarity = Polarity::plus;
    return p;
}

instr::InstrumentConfig band_config() {
    instr::InstrumentConfig cfg;
    cfg.c_se_um_per_ang2 = 0.137;
    return cfg;
}

} // namespace

TEST_CASE("flat model gives an identically zero ratio") {
    PolarizationModelParams p;
    for (double lambda : {4.0, 8.0, 12.0})
        CHECK(signal::polarization_model(p, lambda).ratio == 0.0);
}

TEST_CASE("quadratic term at the reference magnitude") {
    PolarizationModelParams p;
    p.a2_per_ang2 = -1.15e-3;
    CHECK(signal::polarization_model(p, 10.0).ratio == doctest::Approx(-0.115).epsilon(1e-12));
}

TEST_CASE("wobble decomposition identity 2 cos^2 = 1 + cos(2x)") {
    PolarizationModelParams p;
    p.wobble = {{14.4e-5, 2.15, 0.0}};
    for (double lambda : {4.0, 5.3, 8.0, 11.7}) {
        const double ratio = signal::polarization_model(p, lambda).ratio;
        const double dc_plus_osc =
            14.4e-5 * (1.0 + std::cos(2.0 * 2.15 * lambda)) * lambda * lambda;
        CHECK(ratio == doctest::Approx(dc_plus_osc).epsilon(1e-12));
    }
    // with polarity off the wobble does not enter; P_x is returned
    p.polarity = Polarity::off;
    CHECK(signal::polarization_model(p, 8.0).ratio ==
          doctest::Approx(p.p0 * std::cos(0.0)).epsilon(1e-12));
}

TEST_CASE("the wobble flips sign with the rotator polarity") {
    auto p = reference_params();
    p.epsilon = 0.0;
    p.a1_per_ang = 0.0;
    p.a2_per_ang2 = 0.0;
    auto m = p;
    m.polarity = Polarity::minus;
    for (double lambda : {4.0, 9.0, 12.5})
        CHECK(signal::polarization_model(p, lambda).ratio ==
              doctest::Approx(-signal::polarization_model(m, lambda).ratio).epsilon(1e-12));
}

TEST_CASE("simulation is deterministic for a fixed seed") {
    const auto cfg = band_config();
    SimulationOptions opts;
    opts.seed = 42;
    opts.n_pulses = 20000;
    const auto a = simulate_dataset(reference_params(), cfg, opts);
    const auto b = simulate_dataset(reference_params(), cfg, opts);
    REQUIRE(a.points.size() == b.points.size());
    for (size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].n_up == b.points[i].n_up);
        CHECK(a.points[i].value == b.points[i].value);
    }
    // bit-identical serialization too
    std::ostringstream sa, sb;
    io::write_polarization_csv(sa, a);
    io::write_polarization_csv(sb, b);
    CHECK(sa.str() == sb.str());

    SimulationOptions other = opts;
    other.seed = 43;
    const auto c = simulate_dataset(reference_params(), cfg, other);
    int differing = 0;
    for (size_t i = 0; i < a.points.size(); ++i)
        if (a.points[i].n_up != c.points[i].n_up) ++differing;
    CHECK(differing > 100);
}

TEST_CASE("counting variance scales inversely with the pulse count") {
    const auto cfg = band_config();
    const auto params = reference_params();

    auto spread = [&](std::int64_t pulses, std::uint64_t seed) {
        SimulationOptions opts;
        opts.n_pulses = pulses;
        opts.seed = seed;
        const auto series = simulate_dataset(params, cfg, opts);
        double acc = 0.0;
        for (size_t i = 0; i < series.points.size(); ++i) {
            const double mu =
                signal::polarization_model(params, series.points[i].lambda_ang).ratio;
            const double d = series.points[i].value - mu;
            acc += d * d;
        }
        return acc / static_cast<double>(series.points.size());
    };

    double lo = 0.0, hi = 0.0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        lo += spread(2000, seed);
        hi += spread(20000, seed);
    }
    CHECK(lo / hi == doctest::Approx(10.0).epsilon(0.05));
}

TEST_CASE("noiseless mode reproduces the model exactly") {
    const auto cfg = band_config();
    SimulationOptions opts;
    opts.noiseless = true;
    const auto params = reference_params();
    const auto series = simulate_dataset(params, cfg, opts);
    CHECK(series.provenance == "model");
    for (const auto& pt : series.points)
        CHECK(pt.value == signal::polarization_model(params, pt.lambda_ang).ratio);
}

TEST_CASE("reported per-bin variance matches the binomial value") {
    const auto cfg = band_config();
    SimulationOptions opts;
    opts.n_pulses = 50000;
    const auto series = simulate_dataset(reference_params(), cfg, opts);
    for (const auto& pt : series.points) {
        const double n = static_cast<double>(pt.n_up + pt.n_down);
        const double expected = 4.0 * static_cast<double>(pt.n_up) *
                                static_cast<double>(pt.n_down) / (n * n * n);
        if (pt.n_up > 0 && pt.n_down > 0)
            CHECK(pt.variance == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("grating autocorrelation closed form") {
    GratingSpec grating; // 2 um, duty 0.5
    CHECK(signal::grating_autocorrelation(grating, 0.0) == 1.0);
    CHECK(signal::grating_autocorrelation(grating, 1.0) == 1.0);
    CHECK(signal::grating_autocorrelation(grating, 0.5) == 0.0);
    // triangular between peaks at 50% duty
    for (double u : {0.1, 0.2, 0.3, 0.7})
        CHECK(signal::grating_autocorrelation(grating, u) ==
              doctest::Approx(1.0 - 2.0 * std::min(u, 1.0 - u)).epsilon(1e-12));

    // numeric autocorrelation of the discretized profile as oracle
    GratingSpec narrow;
    narrow.duty = 0.3;
    const int n = 6000;
    for (double u : {0.05, 0.17, 0.4, 0.62, 0.93}) {
        double acc = 0.0;
        const int shift = static_cast<int>(std::lround(u * n));
        for (int i = 0; i < n; ++i) {
            const bool a = (i % n) < 0.3 * n;
            const bool b = ((i + shift) % n) < 0.3 * n;
            acc += (a && b) ? 1.0 : 0.0;
        }
        acc /= 0.3 * n;
        CHECK(signal::grating_autocorrelation(narrow, u) == doctest::Approx(acc).epsilon(2e-3));
    }
}

TEST_CASE("grating correlation series peaks where delta_SE is a multiple of the period") {
    auto cfg = band_config();
    cfg.lambda_min_ang = 3.5;
    GratingSpec grating;
    const auto series = grating_correlation(grating, cfg, 400);
    CHECK(series.polarity == Polarity::off);

    // peak positions from the numeric series against sqrt(n * period / c_SE)
    const double bin = (12.75 - 3.5) / 400.0;
    for (int n = 1; n <= 10; ++n) {
        const double expected = std::sqrt(n * 2.0 / 0.137);
        double best_lambda = 0.0, best = -1.0;
        for (const auto& pt : series.points)
            if (std::abs(pt.lambda_ang - expected) < 0.4 && pt.value > best) {
                best = pt.value;
                best_lambda = pt.lambda_ang;
            }
        CHECK(std::abs(best_lambda - expected) <= bin);
        CHECK(best > 0.95);
    }
}

TEST_CASE("series CSV round trip") {
    const auto cfg = band_config();
    SimulationOptions opts;
    opts.n_pulses = 5000;
    const auto series = simulate_dataset(reference_params(), cfg, opts);

    std::ostringstream os;
    io::write_polarization_csv(os, series, {{"seed", "1"}});
    std::istringstream is(os.str());
    const auto back = io::read_polarization_csv(is);
    REQUIRE(back.points.size() == series.points.size());
    CHECK(back.polarity == series.polarity);
    for (size_t i = 0; i < series.points.size(); ++i) {
        CHECK(back.points[i].lambda_ang == series.points[i].lambda_ang);
        CHECK(back.points[i].value == series.points[i].value);
        CHECK(back.points[i].variance == series.points[i].variance);
        CHECK(back.points[i].n_up == series.points[i].n_up);
    }

    std::istringstream bad("lambda,value\n1,2\n");
    CHECK_THROWS_AS(io::read_polarization_csv(bad), config_error);
}

TEST_CASE("invalid parameters are rejected") {
    PolarizationModelParams p;
    p.p0 = 0.0;
    CHECK_THROWS_AS(p.validate(), config_error);
    p = PolarizationModelParams{};
    p.wobble = {{-1.0, 2.0, 0.0}};
    CHECK_THROWS_AS(p.validate(), config_error);
    p = PolarizationModelParams{};
    p.wobble = {{1e-5, 2.0, 0.0}, {1e-5, 8.0, 0.0}}; // k2 = 4 k1
    CHECK_THROWS_AS(p.validate(), config_error);

    GratingSpec g;
    g.duty = 1.0;
    CHECK_THROWS_AS(g.validate(), config_error);
}
