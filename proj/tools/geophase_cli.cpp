// geophase: experiment runner
//
//   geophase <experiment> [flags]      experiments: fig2-grid, fig3-dyn-fidelity,
//                                      fig4-contour, fig6-avg-fidelity,
//                                      fig7-concurrence, single-run
//   geophase rerun <sidecar.json>      regenerate a dataset from its sidecar
//
// Exit codes: 0 success, 2 usage or configuration error, 3 I/O error.

#include "geophase/experiments.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace geophase;

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct Flags {
    double b0{10.0};
    double jm{5.0};
    double lambda{1e-3};
    double omega_cutoff{0.0};
    std::vector<double> kT;
    int n_alpha{0};
    double alpha_min{0.0};
    double alpha_max{std::numbers::pi};
    int n_phi{0};
    double phi_min{0.0};
    double phi_max{std::numbers::pi};
    double phi{0.0};
    double alpha{0.0};
    std::string axis{"z"};
    std::vector<std::string> topologies;
    std::size_t n_states{1000};
    std::uint64_t seed{20110101};
    std::string sampler{"haar"};
    int time_samples{0};
    double t_end{0.0};
    std::string gate{"aa-two"};
    std::string input;
    unsigned threads{0};
    std::string output;
};

struct OptionHandles {
    CLI::Option* omega_cutoff{};
    CLI::Option* n_alpha{};
    CLI::Option* n_phi{};
    CLI::Option* phi{};
    CLI::Option* alpha{};
    CLI::Option* time_samples{};
    CLI::Option* t_end{};
};

OptionHandles add_flags(CLI::App& app, Flags& f) {
    OptionHandles h;
    app.add_option("--b0", f.b0, "single-qubit field scale B0 (GHz)")->capture_default_str();
    app.add_option("--jm", f.jm, "two-qubit coupling scale Jm (GHz)")->capture_default_str();
    app.add_option("--lambda", f.lambda, "bath coupling strength")->capture_default_str();
    h.omega_cutoff = app.add_option("--omega-cutoff", f.omega_cutoff,
                                    "bath cutoff (default 50*B0 or 50*Jm)");
    app.add_option("--kT", f.kT, "temperatures (GHz), comma separated")->delimiter(',');
    h.n_alpha = app.add_option("--n-alpha", f.n_alpha, "alpha grid points");
    app.add_option("--alpha-min", f.alpha_min)->capture_default_str();
    app.add_option("--alpha-max", f.alpha_max)->capture_default_str();
    h.n_phi = app.add_option("--n-phi", f.n_phi, "phi grid points");
    app.add_option("--phi-min", f.phi_min)->capture_default_str();
    app.add_option("--phi-max", f.phi_max)->capture_default_str();
    h.phi = app.add_option("--phi", f.phi, "fixed phase (default pi/4)");
    h.alpha = app.add_option("--alpha", f.alpha, "fixed alpha for single-qubit single-run (default pi/4)");
    app.add_option("--axis", f.axis, "bath coupling axis")->check(CLI::IsMember({"z", "x"}))
        ->capture_default_str();
    app.add_option("--topology", f.topologies, "bath topologies, comma separated")
        ->delimiter(',')->check(CLI::IsMember({"common", "independent"}));
    app.add_option("--n-states", f.n_states, "input states per average fidelity")->capture_default_str();
    app.add_option("--seed", f.seed, "sampler seed")->capture_default_str();
    app.add_option("--sampler", f.sampler)->check(CLI::IsMember({"haar", "hyperspherical"}))
        ->capture_default_str();
    h.time_samples = app.add_option("--time-samples", f.time_samples, "uniform trajectory samples");
    h.t_end = app.add_option("--t-end", f.t_end, "trajectory end time (ns, default gate duration)");
    app.add_option("--gate", f.gate, "gate for single-run")
        ->check(CLI::IsMember({"aa-single", "dyn-single", "aa-two", "dyn-two"}))->capture_default_str();
    app.add_option("--input", f.input, "input state for single-run");
    app.add_option("--threads", f.threads, "worker threads (0 = all cores)")->capture_default_str();
    app.add_option("-o,--output", f.output, "CSV output path (sidecar written next to it)");
    return h;
}

ExperimentConfig to_config(ExperimentKind kind, const Flags& f, const OptionHandles& h) {
    ExperimentConfig c;
    c.experiment = kind;
    c.b0 = f.b0;
    c.jm = f.jm;
    c.lambda = f.lambda;
    if (h.omega_cutoff->count()) c.omega_cutoff = f.omega_cutoff;
    c.kT = f.kT;
    if (h.n_alpha->count()) c.n_alpha = f.n_alpha;
    c.alpha_min = f.alpha_min;
    c.alpha_max = f.alpha_max;
    if (h.n_phi->count()) c.n_phi = f.n_phi;
    c.phi_min = f.phi_min;
    c.phi_max = f.phi_max;
    if (h.phi->count()) c.phi = f.phi;
    if (h.alpha->count()) c.alpha = f.alpha;
    c.axis = parse_coupling_axis(f.axis);
    for (const auto& t : f.topologies) c.topologies.push_back(parse_bath_topology(t));
    c.n_states = f.n_states;
    c.seed = f.seed;
    c.sampler = parse_state_sampler(f.sampler);
    if (h.time_samples->count()) c.time_samples = f.time_samples;
    if (h.t_end->count()) c.t_end = f.t_end;
    c.gate = parse_gate_kind(f.gate);
    c.input = f.input;
    c.threads = f.threads;
    c.output = f.output;
    return c;
}

ExperimentConfig load_sidecar(const std::string& path, const std::string& output) {
    std::ifstream in(path);
    if (!in) throw OutputError("cannot read sidecar '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config", std::string("sidecar is not valid JSON: ") + e.what());
    }
    if (!j.contains("schema_version") || j["schema_version"] != kSidecarSchemaVersion) {
        throw ConfigError("schema_version", "unsupported sidecar schema");
    }
    ExperimentConfig c = config_from_json(j.at("config"));
    if (!output.empty()) c.output = output;
    return c;
}

int run(const ExperimentConfig& raw) {
    const ExperimentConfig config = resolve(raw);
    validate(config);
    const Dataset data = run_experiment(config);
    write_outputs(config, data);
    std::cerr << "wrote " << config.output.string() << " (" << data.rows.size() << " rows) and "
              << sidecar_path(config.output).string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geometric versus dynamical phase gates under Bloch-Redfield decoherence"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI file of flag values; command-line flags override it");

    Flags flags;
    const OptionHandles handles = add_flags(app, flags);

    const std::vector<std::pair<ExperimentKind, std::string>> kinds{
        {ExperimentKind::fig2_grid, "AA single-qubit fidelity over (alpha, phi)"},
        {ExperimentKind::fig3_dyn_fidelity, "dynamical single-qubit fidelity over alpha, numeric and closed form"},
        {ExperimentKind::fig4_contour, "AA minus dynamical single-qubit fidelity over (alpha, phi)"},
        {ExperimentKind::fig6_avg_fidelity, "two-qubit average fidelity over phi"},
        {ExperimentKind::fig7_concurrence, "concurrence trajectories from the four Bell inputs"},
        {ExperimentKind::single_run, "one gate, one input, full trajectory"},
    };
    std::vector<std::pair<CLI::App*, ExperimentKind>> subcommands;
    for (const auto& [kind, description] : kinds) {
        auto* sub = app.add_subcommand(to_string(kind), description);
        sub->fallthrough();
        subcommands.emplace_back(sub, kind);
    }
    std::string sidecar;
    std::string rerun_output;
    auto* rerun = app.add_subcommand("rerun", "regenerate a dataset from its JSON sidecar");
    rerun->add_option("sidecar", sidecar)->required();
    rerun->add_option("-o,--output", rerun_output, "override the recorded CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (rerun->parsed()) return run(load_sidecar(sidecar, rerun_output));
        for (const auto& [sub, kind] : subcommands) {
            if (sub->parsed()) return run(to_config(kind, flags, handles));
        }
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "error: invalid configuration: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const OutputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
