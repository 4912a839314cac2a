// wgqed — command-line front end: scatter, sweep, oracle, validate

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wgqed/config.hpp"
#include "wgqed/io.hpp"
#include "wgqed/oracle.hpp"
#include "wgqed/validate.hpp"

namespace {

using namespace wgqed;

constexpr int exit_failure = 1;
constexpr int exit_config = 2;

struct Common {
    std::string config;
    std::string out;
    int workers = 0;
    bool seedless = true;
    std::string command;
};

RunConfig load(const Common& c)
{
    RunConfig cfg = load_config(c.config);
    if (!c.out.empty()) cfg.output_dir = c.out;
    if (c.workers > 0) cfg.workers = c.workers;
    return cfg;
}

void print_summary(const ScatterRecord& rec)
{
    std::printf("I_R = %.9g  I_L = %.9g  R = %.9g  T = %.9g\n", rec.I_R, rec.I_L, rec.R, rec.T);
    std::printf("balance defect = %.3g  residual excitation = %.3g  t_final = %.6g  steps = %ld\n",
                rec.balance_defect, rec.residual_excitation, rec.t_final, rec.steps);
}

int cmd_scatter(const Common& c)
{
    const RunConfig cfg = load(c);
    OutputWriter out(cfg.output_dir, cfg.overwrite);
    std::vector<std::string> files = {"trajectory.csv", "summary.json", "manifest.json"};
    if (!cfg.scenario.observables.empty()) files.push_back("observables.csv");
    out.preflight(files);

    const ScatterRecord rec = run_scatter(cfg.scenario);
    out.write("trajectory.csv", trajectory_csv(rec));
    out.write("summary.json", summary_json(rec).dump(2) + "\n");
    if (!cfg.scenario.observables.empty()) out.write("observables.csv", observables_csv(rec));
    out.write("manifest.json", manifest_json(cfg, c.command).dump(2) + "\n", true);
    print_summary(rec);
    std::printf("wrote %s\n", out.directory().c_str());
    return 0;
}

int cmd_sweep(const Common& c)
{
    const RunConfig cfg = load(c);
    if (!cfg.sweep) throw ConfigError(c.config + ": the sweep command needs a 'sweep' section");
    OutputWriter out(cfg.output_dir, cfg.overwrite);
    out.preflight({"sweep.csv", "manifest.json"});

    const SweepTable table = run_sweep(*cfg.sweep, cfg.workers);
    out.write("sweep.csv", sweep_csv(table));
    out.write("manifest.json", manifest_json(cfg, c.command).dump(2) + "\n", true);
    int failed = 0;
    for (const auto& r : table.rows) {
        if (!r.ok()) {
            ++failed;
            std::fprintf(stderr, "%s = %g: %s\n", axis_name(table.axis), r.value, r.status.c_str());
        }
    }
    std::printf("%zu points (%d failed), wrote %s\n", table.rows.size(), failed,
                out.directory().c_str());
    return failed ? exit_failure : 0;
}

// Transfer-matrix rows for a detuning sweep; the wavefunction solver otherwise.
int cmd_oracle(const Common& c)
{
    const RunConfig cfg = load(c);
    OutputWriter out(cfg.output_dir, cfg.overwrite);
    const Scenario& s = cfg.scenario;

    if (cfg.sweep) {
        if (cfg.sweep->axis != SweepAxis::detuning) {
            throw ConfigError("the transfer-matrix oracle only sweeps detuning");
        }
        out.preflight({"oracle_sweep.csv", "manifest.json"});
        const auto model = TransferMatrixModel::from_array(s.array);
        SweepTable table;
        table.axis = SweepAxis::detuning;
        for (double d : cfg.sweep->values) {
            const StationaryRT rt = stationary_rt(model, d);
            SweepRow row;
            row.value = d;
            row.R = rt.R();
            row.T = rt.T();
            row.n_reflected = rt.R() * s.pulse.incident_photons();
            row.balance_defect = std::abs(1.0 - rt.R() - rt.T()); // loss channel when gamma > 0
            row.convergence_defect = std::nan("");
            table.rows.push_back(row);
        }
        out.write("oracle_sweep.csv", sweep_csv(table));
        out.write("manifest.json", manifest_json(cfg, c.command).dump(2) + "\n", true);
        std::printf("%zu transfer-matrix points, wrote %s\n", table.rows.size(),
                    out.directory().c_str());
        return 0;
    }

    WavefunctionGrid grid;
    if (s.integrator.t_final > 0) grid.t_final = s.integrator.t_final;
    if (s.sample_dt > 0) grid.sample_dt = s.sample_dt;
    const bool fock1 = s.pulse.statistics == Statistics::fock && s.pulse.photons == 1;
    const bool decay = s.pulse.statistics == Statistics::vacuum && s.initially_excited.size() == 1;
    if (fock1 && !s.initially_excited.empty()) {
        throw ConfigError("the wavefunction oracle holds one excitation: a Fock-1 pulse needs "
                          "all emitters in the ground state");
    }
    if (!fock1 && !decay) {
        throw ConfigError("the wavefunction oracle needs a Fock N=1 pulse, a vacuum pulse with "
                          "one excited emitter, or a detuning sweep section");
    }
    if (decay) grid.excited_emitter = s.initially_excited.front();
    out.preflight({"oracle_trajectory.csv", "manifest.json"});
    const SingleExcitationResult res = evolve_single_photon(s.array, s.pulse, grid);
    out.write("oracle_trajectory.csv", trajectory_csv(res));
    out.write("manifest.json", manifest_json(cfg, c.command).dump(2) + "\n", true);
    std::printf("reflected = %.9g  transmitted = %.9g  norm drift = %.3g\n", res.reflected_norm,
                res.transmitted_norm, res.norm_drift);
    std::printf("wrote %s\n", out.directory().c_str());
    return 0;
}

int cmd_validate(const std::string& level, const std::string& fault, const std::string& out_dir,
                 bool overwrite)
{
    const ValidationLevel lv = parse_level(level);
    const Fault f = parse_fault(fault);
    std::optional<OutputWriter> out;
    if (!out_dir.empty()) {
        out.emplace(out_dir, overwrite ? OverwritePolicy::overwrite : OverwritePolicy::fail);
        out->preflight({"validation.json"});
    }
    auto progress = [](const CheckResult& r) {
        std::printf("%-4s %-28s %-10.3g %s %-8.3g %s\n", r.passed ? "ok" : "FAIL", r.name.c_str(),
                    r.value, r.relation.empty() ? "  " : r.relation.c_str(), r.tolerance,
                    r.scenario.c_str());
        if (!r.passed && !r.detail.empty()) std::printf("     %s\n", r.detail.c_str());
        std::fflush(stdout);
    };
    const ValidationReport report = run_validation(lv, f, progress);
    const std::string json = report.to_json().dump(2) + "\n";
    if (out) out->write("validation.json", json);
    const auto failures = report.failures();
    std::printf("%zu checks, %zu failed, %.1f s\n", report.checks.size(), failures.size(),
                report.seconds);
    for (const auto& name : failures) std::printf("failed: %s\n", name.c_str());
    return report.passed() ? 0 : exit_failure;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"wgqed — multiphoton pulse scattering in waveguide QED"};
    app.set_version_flag("--version", std::string(WGQED_VERSION));
    app.require_subcommand(1);

    Common common;
    // argv[0] is normalised so manifests do not depend on the install path
    common.command = "wgqed";
    for (int i = 1; i < argc; ++i) common.command += std::string(" ") + argv[i];

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "run configuration (JSON)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", common.out, "output directory (overrides output.directory)");
        sub->add_option("--workers", common.workers, "worker threads for sweeps")
            ->check(CLI::PositiveNumber);
        sub->add_flag("--seedless", common.seedless,
                      "deterministic mode (the default; no random numbers are drawn)");
    };

    auto* scatter = app.add_subcommand("scatter", "one scattering run");
    add_common(scatter);
    auto* sweep = app.add_subcommand("sweep", "parameter sweep (needs a 'sweep' section)");
    add_common(sweep);
    auto* oracle = app.add_subcommand(
        "oracle", "independent reference: transfer matrix (sweep) or single-photon wavefunction");
    add_common(oracle);

    auto* validate = app.add_subcommand("validate", "run the invariant suite");
    std::string level = "quick", fault, vout;
    bool voverwrite = false;
    validate->add_option("--level", level, "quick or full")
        ->check(CLI::IsMember({"quick", "full"}));
    validate->add_option("--out", vout, "write validation.json into this directory");
    validate->add_flag("--overwrite", voverwrite, "replace an existing validation.json");
    validate->add_option("--inject-fault", fault, "test hook: corrupt the model on purpose")
        ->check(CLI::IsMember({"lambda-sign"}));
    validate->add_option("--workers", common.workers, "accepted for symmetry; checks run serially");
    validate->add_flag("--seedless", common.seedless, "deterministic mode (the default)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*scatter) return cmd_scatter(common);
        if (*sweep) return cmd_sweep(common);
        if (*oracle) return cmd_oracle(common);
        if (*validate) return cmd_validate(level, fault, vout, voverwrite);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "wgqed: configuration error: %s\n", e.what());
        return exit_config;
    } catch (const FormatError& e) {
        std::fprintf(stderr, "wgqed: format error: %s\n", e.what());
        return exit_config;
    } catch (const Error& e) {
        std::fprintf(stderr, "wgqed: %s error: %s\n", e.category().c_str(), e.what());
        return exit_failure;
    }
    return 0;
}
