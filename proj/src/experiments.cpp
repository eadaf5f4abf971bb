// experiments.cpp: Figure-analog sweeps, single runs and dataset emission

#include "geophase/experiments.hpp"

#include "geophase/parallel.hpp"

#include <fmt/format.h>

#include <cmath>
#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

namespace geophase {

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<std::pair<ExperimentKind, std::string>>& experiment_names() {
    static const std::vector<std::pair<ExperimentKind, std::string>> names{
        {ExperimentKind::fig2_grid, "fig2-grid"},
        {ExperimentKind::fig3_dyn_fidelity, "fig3-dyn-fidelity"},
        {ExperimentKind::fig4_contour, "fig4-contour"},
        {ExperimentKind::fig6_avg_fidelity, "fig6-avg-fidelity"},
        {ExperimentKind::fig7_concurrence, "fig7-concurrence"},
        {ExperimentKind::single_run, "single-run"},
    };
    return names;
}

bool uses_two_qubits(const ExperimentConfig& c) {
    switch (c.experiment) {
    case ExperimentKind::fig6_avg_fidelity:
    case ExperimentKind::fig7_concurrence: return true;
    case ExperimentKind::single_run: return is_two_qubit(c.gate);
    default: return false;
    }
}

double field_scale(const ExperimentConfig& c, GateKind kind) {
    return is_two_qubit(kind) ? c.jm : c.b0;
}

BathSpec bath_at(const ExperimentConfig& c, double kT) {
    return BathSpec{c.lambda, *c.omega_cutoff, kT};
}

void require(bool ok, const char* field, const std::string& message) {
    if (!ok) throw ConfigError(field, message);
}

bool finite(double v) { return std::isfinite(v); }

const std::vector<std::string>& single_qubit_inputs() {
    static const std::vector<std::string> v{"alpha", "z+", "z-", "x+", "x-"};
    return v;
}

const std::vector<std::string>& two_qubit_inputs() {
    static const std::vector<std::string> v{"phi+", "phi-", "psi+", "psi-", "++"};
    return v;
}

StateVector input_state(const ExperimentConfig& c) {
    const std::string& s = c.input;
    if (s == "alpha") return ket::alpha_state(*c.alpha);
    if (s == "z+") return ket::z_plus();
    if (s == "z-") return ket::z_minus();
    if (s == "x+") return ket::x_plus();
    if (s == "x-") return ket::x_minus();
    if (s == "++") return qmath::kron(ket::x_plus(), ket::x_plus());
    return bell_state(parse_bell_state(s));
}

std::vector<CouplingSpec> couplings_for(const ExperimentConfig& c, GateKind kind, double kT,
                                        BathTopology topology) {
    const BathSpec bath = bath_at(c, kT);
    return is_two_qubit(kind) ? two_qubit_couplings(topology, bath, c.axis)
                              : single_qubit_coupling(bath, c.axis);
}

unsigned thread_count(const ExperimentConfig& c) {
    return c.threads == 0 ? default_thread_count() : c.threads;
}

// Single-qubit fidelities on an (α, Φ) grid; result indexed [phi][alpha].
std::vector<std::vector<double>> single_qubit_grid(const ExperimentConfig& c, GateKind kind,
                                                   double kT, const std::vector<double>& alphas,
                                                   const std::vector<double>& phis) {
    const auto couplings = couplings_for(c, kind, kT, BathTopology::common);
    std::vector<std::vector<double>> out(phis.size(), std::vector<double>(alphas.size()));
    parallel_for(phis.size(), thread_count(c), [&](std::size_t ip) {
        const CompiledSequence gate(make_sequence(kind, phis[ip], c.b0), couplings);
        for (std::size_t ia = 0; ia < alphas.size(); ++ia) {
            const StateVector psi = ket::alpha_state(alphas[ia]);
            out[ip][ia] = fidelity(psi, gate.sequence().target_unitary,
                                   gate.final_state(qmath::projector(psi)));
        }
    });
    return out;
}

Dataset run_fig2(const ExperimentConfig& c) {
    const auto alphas = linspace(c.alpha_min, c.alpha_max, *c.n_alpha);
    const auto phis = linspace(c.phi_min, c.phi_max, *c.n_phi);
    const auto grid = single_qubit_grid(c, GateKind::aa_single, c.kT.front(), alphas, phis);
    Dataset d{{"alpha", "phi", "fidelity_aa"}, {}};
    for (std::size_t ia = 0; ia < alphas.size(); ++ia) {
        for (std::size_t ip = 0; ip < phis.size(); ++ip) {
            d.rows.push_back({alphas[ia], phis[ip], grid[ip][ia]});
        }
    }
    return d;
}

Dataset run_fig3(const ExperimentConfig& c) {
    const auto alphas = linspace(c.alpha_min, c.alpha_max, *c.n_alpha);
    Dataset d{{"alpha", "fidelity_dyn", "fidelity_dyn_closed_form", "kT"}, {}};
    for (double kT : c.kT) {
        const auto grid = single_qubit_grid(c, GateKind::dyn_single, kT, alphas, {*c.phi});
        for (std::size_t ia = 0; ia < alphas.size(); ++ia) {
            d.rows.push_back({alphas[ia], grid[0][ia],
                              f_d_closed_form(alphas[ia], *c.phi, bath_at(c, kT), c.b0), kT});
        }
    }
    return d;
}

Dataset run_fig4(const ExperimentConfig& c) {
    const auto alphas = linspace(c.alpha_min, c.alpha_max, *c.n_alpha);
    const auto phis = linspace(c.phi_min, c.phi_max, *c.n_phi);
    Dataset d{{"alpha", "phi", "f_aa", "f_dyn", "diff", "kT"}, {}};
    for (double kT : c.kT) {
        const auto aa = single_qubit_grid(c, GateKind::aa_single, kT, alphas, phis);
        const auto dyn = single_qubit_grid(c, GateKind::dyn_single, kT, alphas, phis);
        for (std::size_t ia = 0; ia < alphas.size(); ++ia) {
            for (std::size_t ip = 0; ip < phis.size(); ++ip) {
                const double fa = aa[ip][ia];
                const double fd = dyn[ip][ia];
                d.rows.push_back({alphas[ia], phis[ip], fa, fd, fa - fd, kT});
            }
        }
    }
    return d;
}

Dataset run_fig6(const ExperimentConfig& c) {
    const auto phis = linspace(c.phi_min, c.phi_max, *c.n_phi);
    const std::vector<GateKind> gates{GateKind::aa_two, GateKind::dyn_two};
    Dataset d{{"topology", "gate", "phi", "avg_fidelity", "std_error", "kT"}, {}};
    for (double kT : c.kT) {
        for (auto topology : c.topologies) {
            for (auto kind : gates) {
                const auto couplings = couplings_for(c, kind, kT, topology);
                std::vector<AverageFidelity> results(phis.size());
                parallel_for(phis.size(), thread_count(c), [&](std::size_t ip) {
                    const CompiledSequence gate(make_sequence(kind, phis[ip], c.jm), couplings);
                    results[ip] = average_fidelity(gate, c.n_states, c.seed, c.sampler, 1);
                });
                for (std::size_t ip = 0; ip < phis.size(); ++ip) {
                    d.rows.push_back({to_string(topology), to_string(kind), phis[ip],
                                      results[ip].mean, results[ip].standard_error, kT});
                }
            }
        }
    }
    return d;
}

// Concurrence, or NaN where the Redfield state has left the positivity tolerance.
double concurrence_or_nan(const ComplexMatrix& rho) {
    try {
        return concurrence(rho);
    } catch (const PositivityError&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

Dataset run_fig7(const ExperimentConfig& c) {
    const std::vector<GateKind> gates{GateKind::aa_two, GateKind::dyn_two};
    const std::vector<BellState> inputs{BellState::phi_plus, BellState::phi_minus,
                                        BellState::psi_plus, BellState::psi_minus};
    Dataset d{{"topology", "gate", "input", "t", "concurrence", "min_eigenvalue", "kT"}, {}};
    for (double kT : c.kT) {
        for (auto topology : c.topologies) {
            for (auto kind : gates) {
                const auto couplings = couplings_for(c, kind, kT, topology);
                const CompiledSequence gate(make_sequence(kind, *c.phi, c.jm), couplings,
                                            *c.time_samples, *c.t_end);
                for (auto input : inputs) {
                    const auto traj = gate.trajectory(qmath::projector(bell_state(input)));
                    for (std::size_t k = 0; k < traj.size(); ++k) {
                        d.rows.push_back({to_string(topology), to_string(kind), to_string(input),
                                          traj.times[k], concurrence_or_nan(traj.states[k]),
                                          qmath::min_eigenvalue(traj.states[k]), kT});
                    }
                }
            }
        }
    }
    return d;
}

Dataset run_single(const ExperimentConfig& c) {
    const bool two = is_two_qubit(c.gate);
    const auto couplings = couplings_for(c, c.gate, c.kT.front(), c.topologies.front());
    const CompiledSequence gate(make_sequence(c.gate, *c.phi, field_scale(c, c.gate)), couplings,
                                *c.time_samples, *c.t_end);
    const StateVector psi = input_state(c);
    const auto traj = gate.trajectory(qmath::projector(psi));

    Dataset d;
    d.columns = two ? std::vector<std::string>{"t", "fidelity", "concurrence", "trace", "min_eigenvalue"}
                    : std::vector<std::string>{"t", "fidelity", "trace", "min_eigenvalue"};
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const ComplexMatrix& rho = traj.states[k];
        const double f = fidelity(psi, gate.ideal_unitary(k), rho);
        std::vector<Cell> row{traj.times[k], f};
        if (two) row.emplace_back(concurrence_or_nan(rho));
        row.emplace_back(rho.trace().real());
        row.emplace_back(qmath::min_eigenvalue(rho));
        d.rows.push_back(std::move(row));
    }
    return d;
}

template <class T, class F>
nlohmann::json list_to_json(const std::vector<T>& v, F&& convert) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& x : v) arr.push_back(convert(x));
    return arr;
}

} // namespace

std::string to_string(ExperimentKind kind) {
    for (const auto& [k, name] : experiment_names()) {
        if (k == kind) return name;
    }
    return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& text) {
    for (const auto& [k, name] : experiment_names()) {
        if (name == text) return k;
    }
    throw ConfigError("experiment", "unknown experiment '" + text + "'");
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v;
    if (n <= 0) return v;
    if (n == 1) return {lo};
    v.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        v.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1));
    }
    v.back() = hi;
    return v;
}

ExperimentConfig resolve(ExperimentConfig c) {
    const bool two = uses_two_qubits(c);
    if (!c.omega_cutoff) c.omega_cutoff = 50.0 * (two ? c.jm : c.b0);

    if (c.kT.empty()) {
        switch (c.experiment) {
        case ExperimentKind::fig2_grid:
        case ExperimentKind::single_run: c.kT = {0.0}; break;
        case ExperimentKind::fig3_dyn_fidelity:
        case ExperimentKind::fig4_contour: c.kT = {0.0, 0.05 * c.b0, 0.1 * c.b0}; break;
        case ExperimentKind::fig6_avg_fidelity:
        case ExperimentKind::fig7_concurrence: c.kT = {0.0, 0.05 * c.jm, 0.1 * c.jm}; break;
        }
    }

    if (!c.n_alpha) {
        c.n_alpha = c.experiment == ExperimentKind::fig2_grid          ? 50
                    : c.experiment == ExperimentKind::fig3_dyn_fidelity ? 101
                                                                        : 40;
    }
    if (!c.n_phi) {
        c.n_phi = c.experiment == ExperimentKind::fig2_grid           ? 50
                  : c.experiment == ExperimentKind::fig6_avg_fidelity ? 9
                                                                      : 40;
    }
    if (!c.phi) c.phi = kPi / 4.0;
    if (!c.alpha) c.alpha = kPi / 4.0;

    if (c.topologies.empty()) {
        if (c.experiment == ExperimentKind::fig6_avg_fidelity ||
            c.experiment == ExperimentKind::fig7_concurrence) {
            c.topologies = {BathTopology::common, BathTopology::independent};
        } else {
            c.topologies = {BathTopology::common};
        }
    }
    if (!c.time_samples) c.time_samples = 201;
    if (!c.t_end) {
        if (c.experiment == ExperimentKind::fig7_concurrence) {
            c.t_end = 4.0 * two_qubit_tm1(c.jm);
        } else if (c.experiment == ExperimentKind::single_run) {
            c.t_end = is_two_qubit(c.gate) ? 4.0 * two_qubit_tm1(c.jm) : 4.0 * single_qubit_t1(c.b0);
        } else {
            c.t_end = 0.0;
        }
    }
    if (c.input.empty() && c.experiment == ExperimentKind::single_run) {
        c.input = is_two_qubit(c.gate) ? "phi+" : "alpha";
    }
    if (c.output.empty()) c.output = to_string(c.experiment) + ".csv";
    return c;
}

void validate(const ExperimentConfig& c) {
    require(finite(c.b0) && c.b0 > 0.0, "b0", "must be finite and > 0");
    require(finite(c.jm) && c.jm > 0.0, "jm", "must be finite and > 0");
    require(finite(c.lambda) && c.lambda >= 0.0, "lambda", "must be finite and >= 0");
    require(c.omega_cutoff && finite(*c.omega_cutoff) && *c.omega_cutoff > 0.0, "omega-cutoff",
            "must be finite and > 0");
    require(!c.kT.empty(), "kT", "list must not be empty");
    for (double t : c.kT) require(finite(t) && t >= 0.0, "kT", "values must be finite and >= 0");
    if (c.experiment == ExperimentKind::fig2_grid || c.experiment == ExperimentKind::single_run) {
        require(c.kT.size() == 1, "kT", "this experiment takes exactly one temperature");
    }
    require(c.n_alpha && *c.n_alpha >= 1, "n-alpha", "must be >= 1");
    require(c.n_phi && *c.n_phi >= 1, "n-phi", "must be >= 1");
    require(finite(c.alpha_min) && finite(c.alpha_max) && c.alpha_min <= c.alpha_max, "alpha-range",
            "must be finite with alpha-min <= alpha-max");
    require(finite(c.phi_min) && finite(c.phi_max) && c.phi_min <= c.phi_max, "phi-range",
            "must be finite with phi-min <= phi-max");
    require(c.phi && finite(*c.phi), "phi", "must be finite");
    require(c.alpha && finite(*c.alpha), "alpha", "must be finite");
    require(!c.topologies.empty(), "topology", "must name at least one bath topology");
    require(c.n_states >= 1, "n-states", "must be >= 1");
    require(c.time_samples && *c.time_samples >= 2, "time-samples", "must be >= 2");
    require(c.t_end && finite(*c.t_end) && *c.t_end >= 0.0, "t-end", "must be finite and >= 0");

    const bool sweeps_dyn_two = c.experiment == ExperimentKind::fig6_avg_fidelity;
    if (sweeps_dyn_two) {
        require(c.phi_min >= 0.0 && c.phi_max <= kPi, "phi-range", "dyn-two requires phi in [0, pi]");
    }
    if (c.experiment == ExperimentKind::fig7_concurrence ||
        (c.experiment == ExperimentKind::single_run && c.gate == GateKind::dyn_two)) {
        require(*c.phi >= 0.0 && *c.phi <= kPi, "phi", "dyn-two requires phi in [0, pi]");
    }
    if (c.experiment == ExperimentKind::fig7_concurrence) {
        require(*c.t_end >= 4.0 * two_qubit_tm1(c.jm) * (1.0 - 1e-12), "t-end",
                "must cover the gate duration");
    }
    if (c.experiment == ExperimentKind::single_run) {
        require(c.topologies.size() == 1, "topology", "single-run takes exactly one topology");
        const double duration = is_two_qubit(c.gate) ? 4.0 * two_qubit_tm1(c.jm)
                                                     : 4.0 * single_qubit_t1(c.b0);
        require(*c.t_end >= duration * (1.0 - 1e-12), "t-end", "must cover the gate duration");
        const auto& allowed = is_two_qubit(c.gate) ? two_qubit_inputs() : single_qubit_inputs();
        require(std::find(allowed.begin(), allowed.end(), c.input) != allowed.end(), "input",
                "'" + c.input + "' is not a valid input state for gate " + to_string(c.gate));
    }
    require(!c.output.empty(), "output", "path must not be empty");
}

nlohmann::json to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["experiment"] = to_string(c.experiment);
    j["b0"] = c.b0;
    j["jm"] = c.jm;
    j["lambda"] = c.lambda;
    j["omega_cutoff"] = c.omega_cutoff.value_or(0.0);
    j["kT"] = c.kT;
    j["n_alpha"] = c.n_alpha.value_or(0);
    j["alpha_min"] = c.alpha_min;
    j["alpha_max"] = c.alpha_max;
    j["n_phi"] = c.n_phi.value_or(0);
    j["phi_min"] = c.phi_min;
    j["phi_max"] = c.phi_max;
    j["phi"] = c.phi.value_or(0.0);
    j["alpha"] = c.alpha.value_or(0.0);
    j["axis"] = to_string(c.axis);
    j["topologies"] = list_to_json(c.topologies, [](BathTopology t) { return to_string(t); });
    j["n_states"] = c.n_states;
    j["seed"] = c.seed;
    j["sampler"] = to_string(c.sampler);
    j["time_samples"] = c.time_samples.value_or(0);
    j["t_end"] = c.t_end.value_or(0.0);
    j["gate"] = to_string(c.gate);
    j["input"] = c.input;
    j["output"] = c.output.string();
    return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    try {
        c.experiment = parse_experiment_kind(j.at("experiment").get<std::string>());
        c.b0 = j.at("b0").get<double>();
        c.jm = j.at("jm").get<double>();
        c.lambda = j.at("lambda").get<double>();
        c.omega_cutoff = j.at("omega_cutoff").get<double>();
        c.kT = j.at("kT").get<std::vector<double>>();
        c.n_alpha = j.at("n_alpha").get<int>();
        c.alpha_min = j.at("alpha_min").get<double>();
        c.alpha_max = j.at("alpha_max").get<double>();
        c.n_phi = j.at("n_phi").get<int>();
        c.phi_min = j.at("phi_min").get<double>();
        c.phi_max = j.at("phi_max").get<double>();
        c.phi = j.at("phi").get<double>();
        c.alpha = j.at("alpha").get<double>();
        c.axis = parse_coupling_axis(j.at("axis").get<std::string>());
        c.topologies.clear();
        for (const auto& t : j.at("topologies")) c.topologies.push_back(parse_bath_topology(t.get<std::string>()));
        c.n_states = j.at("n_states").get<std::size_t>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.sampler = parse_state_sampler(j.at("sampler").get<std::string>());
        c.time_samples = j.at("time_samples").get<int>();
        c.t_end = j.at("t_end").get<double>();
        c.gate = parse_gate_kind(j.at("gate").get<std::string>());
        c.input = j.at("input").get<std::string>();
        c.output = j.at("output").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config", std::string("malformed sidecar: ") + e.what());
    }
    return c;
}

Dataset run_experiment(const ExperimentConfig& c) {
    switch (c.experiment) {
    case ExperimentKind::fig2_grid: return run_fig2(c);
    case ExperimentKind::fig3_dyn_fidelity: return run_fig3(c);
    case ExperimentKind::fig4_contour: return run_fig4(c);
    case ExperimentKind::fig6_avg_fidelity: return run_fig6(c);
    case ExperimentKind::fig7_concurrence: return run_fig7(c);
    case ExperimentKind::single_run: return run_single(c);
    }
    throw ConfigError("experiment", "unhandled experiment");
}

std::string format_cell(const Cell& cell) {
    if (const auto* v = std::get_if<double>(&cell)) return fmt::format("{:.17g}", *v);
    return std::get<std::string>(cell);
}

std::string to_csv(const Dataset& data) {
    std::string out;
    for (std::size_t k = 0; k < data.columns.size(); ++k) {
        if (k) out += ',';
        out += data.columns[k];
    }
    out += '\n';
    for (const auto& row : data.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out += ',';
            out += format_cell(row[k]);
        }
        out += '\n';
    }
    return out;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
    std::filesystem::path p = csv_path;
    if (p.extension() == ".csv") return p.replace_extension(".json");
    p += ".json";
    return p;
}

void write_outputs(const ExperimentConfig& config, const Dataset& data) {
    auto write_file = [](const std::filesystem::path& path, const std::string& text) {
        std::error_code ec;
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw OutputError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw OutputError("cannot open '" + path.string() + "' for writing");
        f << text;
        f.flush();
        if (!f) throw OutputError("failed writing '" + path.string() + "'");
    };
    write_file(config.output, to_csv(data));

    nlohmann::json sidecar;
    sidecar["schema_version"] = kSidecarSchemaVersion;
    sidecar["experiment"] = to_string(config.experiment);
    sidecar["csv"] = config.output.filename().string();
    sidecar["columns"] = data.columns;
    sidecar["n_rows"] = data.rows.size();
    sidecar["units"] = {{"energy", "GHz (angular, hbar = k_B = 1)"}, {"time", "ns"}};
    sidecar["config"] = to_json(config);
    write_file(sidecar_path(config.output), sidecar.dump(2) + "\n");
}

} // namespace geophase
