// experiments.hpp: Figure-analog sweeps and single trajectory runs
//
// Every run produces one CSV (header row, LF line ends, 17 significant digits)
// and a JSON sidecar holding the fully resolved configuration, so a dataset can
// be regenerated from its sidecar alone.

#pragma once

#include "geophase/gates.hpp"
#include "geophase/metrics.hpp"
#include "geophase/redfield.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace geophase {

inline constexpr int kSidecarSchemaVersion = 1;

enum class ExperimentKind {
    fig2_grid,
    fig3_dyn_fidelity,
    fig4_contour,
    fig6_avg_fidelity,
    fig7_concurrence,
    single_run,
};

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& text);

/// Invalid configuration; field() names the offending option.
class ConfigError : public InvalidInput {
public:
    ConfigError(std::string field, const std::string& message)
        : InvalidInput(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unset optionals and empty lists take the experiment default in resolve().
struct ExperimentConfig {
    ExperimentKind experiment{ExperimentKind::single_run};

    double b0{10.0};  // single-qubit field scale B₀ (GHz)
    double jm{5.0};   // two-qubit coupling scale J_m (GHz)
    double lambda{1e-3};
    std::optional<double> omega_cutoff;  // default 50·B₀ (single qubit) or 50·J_m (two qubits)
    std::vector<double> kT;              // GHz

    std::optional<int> n_alpha;
    double alpha_min{0.0};
    double alpha_max{std::numbers::pi};
    std::optional<int> n_phi;
    double phi_min{0.0};
    double phi_max{std::numbers::pi};

    std::optional<double> phi;    // fixed Φ for fig3, fig7 and single-run (default π/4)
    std::optional<double> alpha;  // fixed α for single-qubit single-run (default π/4)

    CouplingAxis axis{CouplingAxis::z};
    std::vector<BathTopology> topologies;

    std::size_t n_states{1000};
    std::uint64_t seed{20110101};
    StateSampler sampler{StateSampler::haar};

    std::optional<int> time_samples;
    std::optional<double> t_end;  // default: duration of the gate sequence

    GateKind gate{GateKind::aa_two};
    std::string input;  // single-run input state label

    unsigned threads{0};  // 0 → hardware concurrency
    std::filesystem::path output;
};

/// Fills every defaulted field for the selected experiment.
ExperimentConfig resolve(ExperimentConfig config);

/// Throws ConfigError naming the first invalid field. Expects a resolved config.
void validate(const ExperimentConfig& config);

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

using Cell = std::variant<double, std::string>;

struct Dataset {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// Evenly spaced grid including both end points (a single point gives lo).
std::vector<double> linspace(double lo, double hi, int n);

/// Runs the experiment on a resolved, valid configuration.
Dataset run_experiment(const ExperimentConfig& config);

std::string format_cell(const Cell& cell);
std::string to_csv(const Dataset& data);
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

/// Writes the CSV and the JSON sidecar; throws OutputError on I/O failure.
void write_outputs(const ExperimentConfig& config, const Dataset& data);

} // namespace geophase
