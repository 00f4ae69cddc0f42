#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dcemon/config.hpp"
#include "dcemon/errors.hpp"
#include "dcemon/evolve.hpp"
#include "dcemon/monitor.hpp"
#include "dcemon/output.hpp"
#include "dcemon/spectral.hpp"

namespace fs = std::filesystem;
using namespace dcemon;

namespace {

struct Common {
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    int threads = 1;
};

fs::path prepare_out(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + dir + ": " + ec.message());
    return fs::path(dir);
}

void warn(const std::vector<std::string>& warnings)
{
    for (const auto& w : warnings)
        std::cerr << "warning: " << w << '\n';
}

Manifest base_manifest(const std::string& command, const ExperimentConfig& cfg, const Common& common,
                       std::uint64_t seed)
{
    return {{"command", command},
            {"config_path", common.config},
            {"config_hash", config_hash(cfg)},
            {"seed", std::to_string(seed)},
            {"code_version", code_version()},
            {"threads", std::to_string(common.threads)}};
}

void finish(Manifest manifest, const fs::path& out, std::chrono::steady_clock::time_point start,
            const ExperimentConfig& cfg)
{
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    manifest.emplace_back("wall_time_s", format_double(wall, 6));
    manifest.emplace_back("config", to_json(cfg).dump());
    write_file((out / "manifest.txt").string(), manifest_text(manifest));
}

CsvOptions csv_options(const ExperimentConfig& cfg)
{
    return {cfg.output.absolute_time, cfg.output.precision};
}

void cmd_run(const Common& common)
{
    const auto start = std::chrono::steady_clock::now();
    const auto cfg = load_config(common.config);
    const auto out = prepare_out(common.out);
    warn(cfg.modulation.validate());
    warn(rwa_warnings(cfg.detector, cfg.modulation, cfg.evolution.n_max));

    const auto result = run_experiment(cfg.detector, cfg.modulation, cfg.evolution);
    const auto opts = csv_options(cfg);
    write_file((out / cfg.output.series).string(),
               series_csv(result.series, opts, oracle_columns(cfg, result.series)));
    for (std::size_t k = 0; k < result.series.snapshots.size(); ++k)
        write_file((out / (cfg.output.snapshot_prefix + std::to_string(k) + ".csv")).string(),
                   snapshot_csv(result.series, k, opts));

    auto manifest = base_manifest("run", cfg, common, common.seed.value_or(cfg.monitor.seed));
    manifest.emplace_back("dt", format_double(result.dt));
    finish(std::move(manifest), out, start, cfg);
    std::cout << "wrote " << result.series.size() << " samples to " << (out / cfg.output.series).string() << '\n';
}

void cmd_catalog(const Common& common)
{
    const auto start = std::chrono::steady_clock::now();
    const auto cfg = load_config(common.config);
    const auto out = prepare_out(common.out);
    const auto entries = resonance_catalog(cfg.detector, cfg.modulation);
    std::cout << "2r/omega0               regime                          formula\n";
    for (const auto& e : entries) {
        std::string regime = to_string(e.regime.kind);
        if (e.regime.kind == RegimeKind::bounded)
            regime += " (<= " + std::to_string(e.regime.max_photons) + ")";
        if (e.regime.kind == RegimeKind::two_state_oscillation)
            regime += " (w=" + format_double(e.regime.frequency, 6) + ")";
        std::string two_r = format_double(2.0 * e.r, 10);
        two_r.resize(std::max<std::size_t>(two_r.size(), 24), ' ');
        regime.resize(std::max<std::size_t>(regime.size() + 1, 32), ' ');
        std::cout << two_r << regime << e.formula << '\n';
    }
    write_file((out / "catalog.csv").string(), catalog_csv(entries, cfg.output.precision));
    finish(base_manifest("catalog", cfg, common, common.seed.value_or(cfg.monitor.seed)), out, start, cfg);
}

void cmd_spectrum(const Common& common, int m_cap)
{
    const auto start = std::chrono::steady_clock::now();
    const auto cfg = load_config(common.config);
    const auto out = prepare_out(common.out);
    const auto couplings = dressed_coupling_matrix(cfg.detector, cfg.modulation, m_cap, cfg.evolution.n_max);
    write_file((out / "spectrum.csv").string(), spectrum_csv(couplings, cfg.output.precision));
    write_file((out / "couplings.csv").string(), coupling_csv(couplings, cfg.output.precision));
    auto manifest = base_manifest("spectrum", cfg, common, common.seed.value_or(cfg.monitor.seed));
    manifest.emplace_back("m_cap", std::to_string(m_cap));
    finish(std::move(manifest), out, start, cfg);
    std::cout << couplings.states.size() << " dressed states, " << couplings.entries.size()
              << " modulation couplings\n";
}

void cmd_trajectory(const Common& common, std::optional<double> rate, std::optional<int> count, bool keep)
{
    const auto start = std::chrono::steady_clock::now();
    auto cfg = load_config(common.config);
    if (rate)
        cfg.monitor.rates = {*rate};
    if (count)
        cfg.monitor.trajectories = *count;
    if (cfg.monitor.rates.empty())
        throw PhysicsError("trajectory: no read-out rate (monitor.rates or --rate)");
    const auto out = prepare_out(common.out);
    cfg.modulation.validate();

    const auto h = experiment_hamiltonian(cfg.detector, cfg.modulation, cfg.evolution);
    const int transitions = h.space().n_levels() - 1;
    std::vector<double> rates = cfg.monitor.rates;
    if (rates.size() == 1)
        rates.assign(std::max(transitions, 1), rates.front());
    const auto jumps = default_jump_model(h.space(), rates);

    TrajectoryConfig tc;
    tc.t_end = cfg.evolution.t_end;
    tc.dt = cfg.monitor.dt;
    if (tc.dt <= 0.0) {
        tc.dt = cfg.evolution.dt > 0.0 ? cfg.evolution.dt
                                       : default_time_step(cfg.detector, cfg.modulation, h, cfg.evolution.n_max);
        if (jumps.max_rate() > 0.0)
            tc.dt = std::min(tc.dt, 0.05 / jumps.max_rate());
    }
    tc.sample_times = output_grid(cfg.evolution);
    tc.snapshot_times = cfg.evolution.snapshot_times;
    tc.max_clicks = cfg.monitor.max_clicks;

    const std::uint64_t seed = common.seed.value_or(cfg.monitor.seed);
    const auto initial = cfg.evolution.initial.build(h.space());
    const auto ens = run_ensemble(h, jumps, initial, tc, seed, cfg.monitor.trajectories, common.threads, keep);

    const auto opts = csv_options(cfg);
    const double eps = cfg.modulation.epsilon;
    write_file((out / "clicks.csv").string(), clicks_csv(ens.trajectories, opts, eps));
    write_file((out / "ensemble.csv").string(), ensemble_csv(ens.averages, opts, eps));
    if (keep)
        for (std::size_t i = 0; i < ens.trajectories.size(); ++i) {
            auto series = ens.trajectories[i].series;
            series.epsilon = eps;
            write_file((out / ("trajectory_" + std::to_string(i) + ".csv")).string(), series_csv(series, opts));
        }

    auto manifest = base_manifest("trajectory", cfg, common, seed);
    manifest.emplace_back("dt", format_double(tc.dt));
    manifest.emplace_back("trajectories", std::to_string(cfg.monitor.trajectories));
    finish(std::move(manifest), out, start, cfg);
    std::size_t clicks = 0;
    for (const auto& t : ens.trajectories)
        clicks += t.click_times.size();
    std::cout << ens.trajectories.size() << " trajectories, " << clicks << " clicks\n";
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Dynamical Casimir effect with a monitored multi-level detector"};
    app.require_subcommand(1);
    Common common;
    int m_cap = 4;
    std::optional<double> rate;
    std::optional<int> count;
    bool keep = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "experiment JSON")->required();
        sub->add_option("--out", common.out, "output directory");
        sub->add_option("--seed", common.seed, "RNG seed (overrides monitor.seed)");
        sub->add_option("--threads", common.threads, "worker threads")->check(CLI::PositiveNumber);
    };
    auto* run = app.add_subcommand("run", "integrate the Schroedinger equation and write observables");
    add_common(run);
    auto* catalog = app.add_subcommand("catalog", "list resonant modulation frequencies");
    add_common(catalog);
    auto* spectrum = app.add_subcommand("spectrum", "dump dressed eigenstates and modulation couplings");
    add_common(spectrum);
    spectrum->add_option("--m-cap", m_cap, "highest excitation block")->check(CLI::NonNegativeNumber);
    auto* trajectory = app.add_subcommand("trajectory", "Monte Carlo ensemble under continuous read-out");
    add_common(trajectory);
    trajectory->add_option("--rate", rate, "read-out rate for every transition")->check(CLI::NonNegativeNumber);
    trajectory->add_option("--trajectories", count, "ensemble size")->check(CLI::PositiveNumber);
    trajectory->add_flag("--keep-series", keep, "also write each conditioned trajectory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run)
            cmd_run(common);
        else if (*catalog)
            cmd_catalog(common);
        else if (*spectrum)
            cmd_spectrum(common, m_cap);
        else if (*trajectory)
            cmd_trajectory(common, rate, count, keep);
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        for (const auto& p : e.problems())
            std::cerr << "config error: " << p << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
