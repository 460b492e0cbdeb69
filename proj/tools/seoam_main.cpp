// seoam: spin-echo OAM analysis pipeline.
//
// Subcommands: predict, decompose, simulate, calibrate, fit, report.
// Exit codes: 0 success, 1 runtime/fit failure, 2 usage or config error.

#include "seoam/oam_spectrum.hpp"
#include "seoam/reduction.hpp"
#include "seoam/series_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace seoam;

namespace {

constexpr const char* kVersion = "0.1.0";

void require_keys(const json& j, const std::set<std::string>& known, const std::string& where) {
    if (!j.is_object()) throw config_error(where + ": expected a JSON object");
    for (const auto& [key, _] : j.items())
        if (!known.contains(key))
            throw config_error(where + ": unknown key '" + key + "'");
}

struct RunConfig {
    json raw = json::object();
    instr::InstrumentConfig instrument;
    std::string output_dir = "out";

    signal::GratingSpec grating() const {
        signal::GratingSpec g;
        if (raw.contains("grating")) {
            const auto& jg = raw.at("grating");
            require_keys(jg, {"period_um", "duty"}, "grating");
            if (jg.contains("period_um")) g.period_um = jg.at("period_um").get<double>();
            if (jg.contains("duty")) g.duty = jg.at("duty").get<double>();
        }
        g.validate();
        return g;
    }

    analysis::WobbleFitOptions wobble_options() const {
        analysis::WobbleFitOptions opts;
        if (raw.contains("analysis")) {
            const auto& ja = raw.at("analysis");
            require_keys(ja,
                         {"peak_prominence_sigmas", "k2_band", "k2_search_band",
                          "captured_mass_threshold"},
                         "analysis");
            if (ja.contains("k2_band")) {
                opts.accept_ratio_min = ja.at("k2_band").at(0).get<double>();
                opts.accept_ratio_max = ja.at("k2_band").at(1).get<double>();
            }
            if (ja.contains("k2_search_band")) {
                opts.k2_over_k1_min = ja.at("k2_search_band").at(0).get<double>();
                opts.k2_over_k1_max = ja.at("k2_search_band").at(1).get<double>();
            }
        }
        return opts;
    }

    analysis::CalibrationOptions calibration_options() const {
        analysis::CalibrationOptions opts;
        if (raw.contains("analysis") && raw.at("analysis").contains("peak_prominence_sigmas"))
            opts.peak_prominence_sigmas =
                raw.at("analysis").at("peak_prominence_sigmas").get<double>();
        return opts;
    }

    double captured_mass_threshold() const {
        if (raw.contains("analysis") && raw.at("analysis").contains("captured_mass_threshold"))
            return raw.at("analysis").at("captured_mass_threshold").get<double>();
        return 0.999;
    }
};

RunConfig load_config(const std::string& path) {
    RunConfig cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        cfg.raw = json::parse(buffer.str());
    } catch (const json::exception& e) {
        throw config_error("config '" + path + "': " + e.what());
    }
    require_keys(cfg.raw,
                 {"instrument", "simulation", "grating", "analysis", "decompose", "report",
                  "output_dir"},
                 "config");
    if (cfg.raw.contains("instrument"))
        cfg.instrument = instr::InstrumentConfig::from_json(cfg.raw.at("instrument").dump());
    if (cfg.raw.contains("output_dir"))
        cfg.output_dir = cfg.raw.at("output_dir").get<std::string>();
    return cfg;
}

struct Cli {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed_override;
    std::string format = "json";
};

json provenance(const RunConfig& cfg, const std::string& command,
                std::optional<std::uint64_t> seed) {
    json p;
    p["generator"] = std::string("seoam ") + kVersion;
    p["command"] = command;
    p["config_hash"] = io::fnv1a_hex(cfg.raw.dump());
    if (seed) p["seed"] = *seed;
    return p;
}

io::Metadata csv_metadata(const json& prov) {
    io::Metadata meta;
    for (const auto& [key, value] : prov.items())
        meta[key] = value.is_string() ? value.get<std::string>() : value.dump();
    return meta;
}

void atomic_write(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw error("cannot write '" + tmp.string() + "'");
        out << content;
    }
    fs::rename(tmp, path);
}

fs::path out_path(const RunConfig& cfg, const Cli& cli, const std::string& name) {
    const fs::path dir = cli.out_dir.empty() ? fs::path(cfg.output_dir) : fs::path(cli.out_dir);
    return dir / name;
}

// ---------------------------------------------------------------------------
// predict

int run_predict(const RunConfig& cfg, const Cli& cli) {
    const auto& inst = cfg.instrument;
    const double c_se = instr::spin_echo_constant(inst);
    const double a2 = instr::predict_a2(inst);
    const double c_oam = instr::c_oam_from_a2(a2, inst);

    json j;
    j["provenance"] = provenance(cfg, "predict", std::nullopt);
    j["c_se_um_per_ang2"] = c_se;
    j["a2_per_ang2"] = a2;
    j["c_oam_per_ang"] = c_oam;
    j["ell_slope_per_ang"] = 0.5 * std::abs(c_oam);
    j["geometry_factor_m"] = inst.geometry_factor_m();
    json table = json::array();
    const int n = 24;
    for (int i = 0; i <= n; ++i) {
        const double lambda =
            inst.lambda_min_ang + (inst.lambda_max_ang - inst.lambda_min_ang) * i / n;
        const double dse = instr::spin_echo_length(inst, lambda);
        table.push_back({{"lambda_ang", lambda},
                         {"delta_se_um", dse},
                         {"ell_plus", instr::oam_eigenvalue(dse, lambda)},
                         {"sagnac_phase_rad", instr::sagnac_phase(inst, lambda)}});
    }
    j["band_table"] = table;
    atomic_write(out_path(cfg, cli, "predict.json"), j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// decompose

oam::WavePacket packet_from_json(const json& jp) {
    require_keys(jp,
                 {"kind", "amplitude", "offset", "coherence_length", "transverse_momentum",
                  "relative_phase", "label"},
                 "decompose.packets[]");
    oam::WavePacket wp;
    const std::string kind = jp.value("kind", "single-offset");
    if (kind == "single-offset")
        wp.kind = oam::PacketKind::single_offset;
    else if (kind == "split-pair")
        wp.kind = oam::PacketKind::split_pair;
    else
        throw config_error("decompose: unknown packet kind '" + kind + "'");
    wp.amplitude = jp.value("amplitude", 1.0);
    wp.offset = jp.value("offset", 0.0);
    wp.coherence_length = jp.value("coherence_length", 1.0);
    wp.transverse_momentum = jp.value("transverse_momentum", 0.0);
    wp.relative_phase = jp.value("relative_phase", 0.0);
    wp.validate();
    return wp;
}

int run_decompose(const RunConfig& cfg, const Cli& cli) {
    if (!cfg.raw.contains("decompose") || !cfg.raw.at("decompose").contains("packets"))
        throw config_error("decompose: config needs decompose.packets");
    require_keys(cfg.raw.at("decompose"), {"packets"}, "decompose");
    const auto prov = provenance(cfg, "decompose", std::nullopt);

    int index = 0;
    for (const auto& jp : cfg.raw.at("decompose").at("packets")) {
        const auto wp = packet_from_json(jp);
        const std::string label = jp.value("label", "packet" + std::to_string(index));
        const auto dist = wp.kind == oam::PacketKind::single_offset
                              ? oam::oam_spectrum_offset_planewave(
                                    wp, std::nullopt, cfg.captured_mass_threshold())
                              : oam::oam_spectrum_split_pair(wp, std::nullopt,
                                                             cfg.captured_mass_threshold());
        std::ostringstream os;
        io::write_distribution_csv(os, dist, csv_metadata(prov));
        atomic_write(out_path(cfg, cli, "decompose_" + label + ".csv"), os.str());
        std::cout << "decompose_" << label << ".csv: modes [" << dist.window().lo << ", "
                  << dist.window().hi << "], captured mass " << dist.captured_mass() << "\n";
        ++index;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulationPlan {
    signal::PolarizationModelParams params;
    signal::SimulationOptions options;
    bool both_polarities = false;
};

SimulationPlan simulation_plan(const RunConfig& cfg, const Cli& cli) {
    if (!cfg.raw.contains("simulation"))
        throw config_error("simulate: config needs a simulation section");
    const auto& js = cfg.raw.at("simulation");
    require_keys(js, {"seed", "n_pulses", "bins", "noiseless", "params", "both_polarities"},
                 "simulation");

    SimulationPlan plan;
    if (js.contains("n_pulses")) plan.options.n_pulses = js.at("n_pulses").get<std::int64_t>();
    if (js.contains("bins")) plan.options.n_bins = js.at("bins").get<int>();
    if (js.contains("noiseless")) plan.options.noiseless = js.at("noiseless").get<bool>();
    plan.both_polarities = js.value("both_polarities", false);

    if (cli.seed_override)
        plan.options.seed = *cli.seed_override;
    else if (js.contains("seed"))
        plan.options.seed = js.at("seed").get<std::uint64_t>();
    else
        throw config_error("simulate: a seed is required (simulation.seed or --seed)");

    if (js.contains("params")) {
        const auto& jp = js.at("params");
        require_keys(jp, {"p0", "epsilon", "a1_per_ang", "a2_per_ang2", "wobble", "polarity"},
                     "simulation.params");
        plan.params.p0 = jp.value("p0", 0.75);
        plan.params.epsilon = jp.value("epsilon", 0.0);
        plan.params.a1_per_ang = jp.value("a1_per_ang", 0.0);
        plan.params.a2_per_ang2 = jp.value("a2_per_ang2", 0.0);
        if (jp.contains("polarity"))
            plan.params.polarity =
                signal::polarity_from_string(jp.at("polarity").get<std::string>());
        if (jp.contains("wobble")) {
            for (const auto& jw : jp.at("wobble")) {
                require_keys(jw, {"amplitude_per_ang2", "frequency_per_ang", "phase_rad"},
                             "simulation.params.wobble[]");
                plan.params.wobble.push_back({jw.value("amplitude_per_ang2", 0.0),
                                              jw.value("frequency_per_ang", 0.0),
                                              jw.value("phase_rad", 0.0)});
            }
        }
    }
    plan.params.validate();
    return plan;
}

// The minus dataset measures the sign-flipped precession phase; the wobble
// keeps its field amplitudes and flips only through the polarity factor.
signal::PolarizationModelParams mirrored(const signal::PolarizationModelParams& plus) {
    signal::PolarizationModelParams minus = plus;
    minus.polarity = signal::Polarity::minus;
    minus.epsilon = -plus.epsilon;
    minus.a1_per_ang = -plus.a1_per_ang;
    minus.a2_per_ang2 = -plus.a2_per_ang2;
    return minus;
}

int run_simulate(const RunConfig& cfg, const Cli& cli) {
    auto plan = simulation_plan(cfg, cli);
    const auto prov = provenance(cfg, "simulate", plan.options.seed);

    auto emit = [&](const signal::PolarizationSeries& series, const std::string& name) {
        std::ostringstream os;
        io::write_polarization_csv(os, series, csv_metadata(prov));
        atomic_write(out_path(cfg, cli, name), os.str());
        for (const auto& w : series.warnings) std::cerr << "warning: " << w << "\n";
        std::cout << name << ": " << series.points.size() << " bins\n";
    };

    if (plan.both_polarities) {
        plan.params.polarity = signal::Polarity::plus;
        emit(simulate_dataset(plan.params, cfg.instrument, plan.options), "dataset_plus.csv");
        auto opts_minus = plan.options;
        opts_minus.seed = plan.options.seed + 1;
        emit(simulate_dataset(mirrored(plan.params), cfg.instrument, opts_minus),
             "dataset_minus.csv");
    } else {
        emit(simulate_dataset(plan.params, cfg.instrument, plan.options), "dataset.csv");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// calibrate

int run_calibrate(const RunConfig& cfg, const Cli& cli) {
    const auto grating = cfg.grating();
    signal::PolarizationSeries series;
    std::optional<std::uint64_t> seed;

    if (cfg.raw.contains("report") && cfg.raw.at("report").contains("calibration_csv")) {
        const std::string path = cfg.raw.at("report").at("calibration_csv").get<std::string>();
        std::ifstream in(path);
        if (!in) throw config_error("calibrate: cannot open '" + path + "'");
        series = io::read_polarization_csv(in);
    } else {
        // synthesize a counting-noise measurement of the grating correlation
        std::int64_t n_pulses = 100000;
        int n_bins = 200;
        std::uint64_t used_seed = cli.seed_override.value_or(1);
        if (cfg.raw.contains("simulation")) {
            const auto plan = simulation_plan(cfg, cli);
            n_pulses = plan.options.n_pulses;
            n_bins = plan.options.n_bins;
            used_seed = plan.options.seed;
        }
        seed = used_seed;
        const auto clean = grating_correlation(grating, cfg.instrument, n_bins);
        series.polarity = signal::Polarity::off;
        series.provenance = "synthetic seed=" + std::to_string(used_seed);
        std::mt19937_64 rng(used_seed);
        for (const auto& pt : clean.points) {
            signal::PolarizationPoint noisy = pt;
            const double p_up = 0.5 * (1.0 + std::clamp(pt.value, -1.0, 1.0));
            std::binomial_distribution<std::int64_t> binom(n_pulses, p_up);
            noisy.n_up = binom(rng);
            noisy.n_down = n_pulses - noisy.n_up;
            const double n = static_cast<double>(n_pulses);
            const double nu = std::max(0.5, static_cast<double>(noisy.n_up));
            const double nd = std::max(0.5, static_cast<double>(noisy.n_down));
            noisy.value = static_cast<double>(noisy.n_up - noisy.n_down) / n;
            noisy.variance = 4.0 * nu * nd / (n * n * n);
            series.points.push_back(noisy);
        }
    }

    const auto cal =
        analysis::calibrate_spin_echo_constant(series, grating, cfg.calibration_options());
    json j;
    j["provenance"] = provenance(cfg, "calibrate", seed);
    j["c_se_um_per_ang2"] = {{"value", cal.c_se_um_per_ang2.value},
                             {"error", cal.c_se_um_per_ang2.error}};
    j["peaks"] = json::array();
    for (size_t i = 0; i < cal.peak_lambdas_ang.size(); ++i)
        j["peaks"].push_back(
            {{"order", cal.peak_orders[i]}, {"lambda_ang", cal.peak_lambdas_ang[i]}});
    atomic_write(out_path(cfg, cli, "calibration.json"), j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// fit and report

signal::PolarizationSeries read_series_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open dataset '" + path + "'");
    return io::read_polarization_csv(in);
}

json fit_json(const analysis::PolarityReduction& red) {
    json j;
    j["a2_raw_per_ang2"] = {{"value", red.a2.raw.value}, {"error", red.a2.raw.error}};
    j["a2_corrected_per_ang2"] = {{"value", red.a2.corrected.value},
                                  {"error", red.a2.corrected.error}};
    j["epsilon"] = red.fit.epsilon;
    j["a1_per_ang"] = red.fit.a1_per_ang;
    j["reduced_chi2"] = red.fit.reduced_chi2;
    j["error_convention"] = red.a2.error_convention;
    j["wobble"] = {{"significant", red.wobble.significant},
                   {"amp1_per_ang2", red.wobble.amp1_per_ang2},
                   {"amp1_err", red.wobble.amp1_err},
                   {"k1_per_ang", red.wobble.k1_per_ang},
                   {"k1_err", red.wobble.k1_err},
                   {"phi1_rad", red.wobble.phi1_rad},
                   {"amp2_per_ang2", red.wobble.amp2_per_ang2},
                   {"amp2_err", red.wobble.amp2_err},
                   {"k2_per_ang", red.wobble.k2_per_ang},
                   {"k2_err", red.wobble.k2_err},
                   {"phi2_rad", red.wobble.phi2_rad},
                   {"dc_offset", red.wobble.dc_offset}};
    return j;
}

int run_fit(const RunConfig& cfg, const Cli& cli) {
    if (!cfg.raw.contains("report") || !cfg.raw.at("report").contains("data_csv"))
        throw config_error("fit: config needs report.data_csv");
    const auto series = read_series_file(cfg.raw.at("report").at("data_csv").get<std::string>());
    const auto red = analysis::reduce_polarization(series, cfg.wobble_options());
    json j = fit_json(red);
    j["provenance"] = provenance(cfg, "fit", std::nullopt);
    atomic_write(out_path(cfg, cli, "fit.json"), j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
}

void write_curve_csv(const RunConfig& cfg, const Cli& cli, const std::string& name,
                     const signal::PolarizationSeries& data, const analysis::FitResult& fit,
                     const json& prov) {
    std::ostringstream os;
    for (const auto& [key, value] : csv_metadata(prov)) os << "# " << key << "=" << value << "\n";
    os << "lambda_ang,value,variance,fit,residual_over_lambda2\n";
    for (const auto& pt : data.points) {
        const double model = fit.evaluate(pt.lambda_ang);
        os << pt.lambda_ang << ',' << pt.value << ',' << pt.variance << ',' << model << ','
           << (pt.value - model) / (pt.lambda_ang * pt.lambda_ang) << '\n';
    }
    atomic_write(out_path(cfg, cli, name), os.str());
}

int run_report(const RunConfig& cfg, const Cli& cli) {
    if (!cfg.raw.contains("report")) throw config_error("report: config needs a report section");
    const auto& jr = cfg.raw.at("report");
    require_keys(jr,
                 {"plus_csv", "minus_csv", "table_inputs", "c_oam_per_a2_ang", "data_csv",
                  "calibration_csv"},
                 "report");
    const auto prov = provenance(cfg, "report", std::nullopt);

    analysis::ConversionSpec conversion;
    conversion.instrument = cfg.instrument;
    if (jr.contains("c_oam_per_a2_ang"))
        conversion.c_oam_per_a2_ang = jr.at("c_oam_per_a2_ang").get<double>();

    analysis::ReportInputs inputs;
    std::optional<analysis::ValueWithError> series_raw, series_corrected;
    json per_polarity_fits = json::object();

    if (jr.contains("table_inputs")) {
        const auto& jt = jr.at("table_inputs");
        require_keys(jt, {"plus", "minus"}, "report.table_inputs");
        auto load_side = [](const json& side, signal::Polarity polarity,
                            std::optional<double>& override_err, analysis::ValueWithError& amp1,
                            analysis::ValueWithError& amp2) {
            require_keys(side,
                         {"a2_per_ang2", "a2_err", "amp1_per_ang2", "amp1_err", "amp2_per_ang2",
                          "amp2_err", "corrected_err_override"},
                         "report.table_inputs side");
            analysis::FitResult fit;
            fit.a2_per_ang2 = side.at("a2_per_ang2").get<double>();
            fit.covariance[2][2] = std::pow(side.at("a2_err").get<double>(), 2);
            analysis::WobbleFit wobble;
            wobble.significant = true;
            wobble.amp1_per_ang2 = side.at("amp1_per_ang2").get<double>();
            wobble.amp1_err = side.value("amp1_err", 0.0);
            wobble.amp2_per_ang2 = side.at("amp2_per_ang2").get<double>();
            wobble.amp2_err = side.value("amp2_err", 0.0);
            if (side.contains("corrected_err_override"))
                override_err = side.at("corrected_err_override").get<double>();
            amp1 = {wobble.amp1_per_ang2, wobble.amp1_err};
            amp2 = {wobble.amp2_per_ang2, wobble.amp2_err};
            return analysis::correct_a2(fit, wobble, polarity);
        };
        inputs.plus = load_side(jt.at("plus"), signal::Polarity::plus, inputs.corrected_err_plus,
                                inputs.amp_plus, inputs.amp2_plus);
        inputs.minus = load_side(jt.at("minus"), signal::Polarity::minus,
                                 inputs.corrected_err_minus, inputs.amp_minus, inputs.amp2_minus);
    } else if (jr.contains("plus_csv") && jr.contains("minus_csv")) {
        const auto plus_series = read_series_file(jr.at("plus_csv").get<std::string>());
        const auto minus_series = read_series_file(jr.at("minus_csv").get<std::string>());
        const auto red_plus = analysis::reduce_polarization(plus_series, cfg.wobble_options());
        const auto red_minus = analysis::reduce_polarization(minus_series, cfg.wobble_options());
        inputs.plus = red_plus.a2;
        inputs.minus = red_minus.a2;
        inputs.amp_plus = {red_plus.wobble.amp1_per_ang2, red_plus.wobble.amp1_err};
        inputs.amp2_plus = {red_plus.wobble.amp2_per_ang2, red_plus.wobble.amp2_err};
        inputs.amp_minus = {red_minus.wobble.amp1_per_ang2, red_minus.wobble.amp1_err};
        inputs.amp2_minus = {red_minus.wobble.amp2_per_ang2, red_minus.wobble.amp2_err};
        per_polarity_fits["plus"] = fit_json(red_plus);
        per_polarity_fits["minus"] = fit_json(red_minus);

        // Series-level combination of the oscillation-subtracted data.
        const auto aggregated =
            analysis::aggregate_polarities(red_plus.cleaned, red_minus.cleaned);
        const auto agg_fit = analysis::weighted_quadratic_fit(aggregated);
        series_raw = analysis::ValueWithError{agg_fit.a2_per_ang2, agg_fit.sigma_a2()};
        const double bias =
            0.5 * (red_plus.wobble.amplitude_sum() + red_minus.wobble.amplitude_sum());
        const double bias_err = 0.5 * std::hypot(red_plus.wobble.amplitude_sum_err(),
                                                 red_minus.wobble.amplitude_sum_err());
        series_corrected = analysis::ValueWithError{agg_fit.a2_per_ang2 - bias,
                                                    std::hypot(agg_fit.sigma_a2(), bias_err)};

        write_curve_csv(cfg, cli, "report_plus_curve.csv", red_plus.cleaned, red_plus.fit, prov);
        write_curve_csv(cfg, cli, "report_minus_curve.csv", red_minus.cleaned, red_minus.fit,
                        prov);
        write_curve_csv(cfg, cli, "report_combined_curve.csv", aggregated, agg_fit, prov);
    } else {
        throw config_error("report: needs either table_inputs or plus_csv + minus_csv");
    }

    auto report = analysis::physics_report(inputs, conversion);
    report.a2_series_raw = series_raw;
    report.a2_series_corrected = series_corrected;
    if (report.same_sign_warning)
        std::cerr << "warning: both polarities carry the same sign of a2\n";

    json full = json::parse(report.to_json(prov.dump()));
    if (!per_polarity_fits.empty()) full["fits"] = per_polarity_fits;
    atomic_write(out_path(cfg, cli, "report.json"), full.dump(2) + "\n");
    std::cout << full.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spin-echo OAM analysis: Sagnac prediction, mode decomposition, synthetic "
                 "datasets, calibration and the full reduction pipeline"};
    app.require_subcommand(1);

    Cli cli;
    app.add_option("--config", cli.config_path, "JSON run configuration");
    app.add_option("--out", cli.out_dir, "output directory (default from config)");
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "override the configured seed");
    app.add_option("--format", cli.format, "output format hint")
        ->check(CLI::IsMember({"json", "csv"}));

    auto* predict = app.add_subcommand("predict", "Sagnac phase, a2 and c_OAM from the config");
    auto* decompose = app.add_subcommand("decompose", "OAM distributions of configured packets");
    auto* simulate = app.add_subcommand("simulate", "seeded synthetic polarization datasets");
    auto* calibrate = app.add_subcommand("calibrate", "spin-echo constant from grating data");
    auto* fit = app.add_subcommand("fit", "quadratic + wobble reduction of one dataset");
    auto* report = app.add_subcommand("report", "full per-polarity analysis and physics summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (seed_opt->count() > 0) cli.seed_override = seed_value;
        const RunConfig cfg = load_config(cli.config_path);
        if (predict->parsed()) return run_predict(cfg, cli);
        if (decompose->parsed()) return run_decompose(cfg, cli);
        if (simulate->parsed()) return run_simulate(cfg, cli);
        if (calibrate->parsed()) return run_calibrate(cfg, cli);
        if (fit->parsed()) return run_fit(cfg, cli);
        if (report->parsed()) return run_report(cfg, cli);
        return 2;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
