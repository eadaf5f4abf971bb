// gates.hpp: Multistep geometric (AA) gates and their dynamical equivalents
//
// Hamiltonians:
//   single qubit   H = −½ (B_z σ_z + B_x σ_x)
//   two qubits     H = Σ_i −½ (B_z⁽ⁱ⁾ σ_z⁽ⁱ⁾ + B_x⁽ⁱ⁾ σ_x⁽ⁱ⁾) − J σ_x⁽¹⁾ σ_x⁽²⁾
//
// Field signs are chosen so that the noiseless propagators equal the target
// unitaries exactly:
//   aa_single:  e^{−iπ/4 σ_x} · e^{−iπ/2 (sinΦ σ_z − cosΦ σ_x)} · e^{−iπ/4 σ_x}
//   dyn_single: e^{−iΦ σ_z}
//   aa_two:     e^{−iπ/4 σ_z⁽¹⁾} · e^{−iπ/2 (cosΦ σ_z⁽¹⁾ − sinΦ σ_x⁽¹⁾σ_x⁽²⁾)} · e^{−iπ/4 σ_z⁽¹⁾}
//   dyn_two:    e^{i(π−Φ) σ_x⁽¹⁾σ_x⁽²⁾}

#pragma once

#include "geophase/qmath.hpp"
#include "geophase/redfield.hpp"

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace geophase {

struct SingleQubitFields {
    double bz{0.0};
    double bx{0.0};
};

struct TwoQubitFields {
    double bz1{0.0};
    double bx1{0.0};
    double bz2{0.0};
    double bx2{0.0};
    double j{0.0};
};

struct GateSegment {
    std::variant<SingleQubitFields, TwoQubitFields> fields;
    double duration{0.0};

    ComplexMatrix hamiltonian() const;
};

enum class GateKind { aa_single, dyn_single, aa_two, dyn_two };

std::string to_string(GateKind kind);
GateKind parse_gate_kind(const std::string& text);
bool is_two_qubit(GateKind kind);

struct GateSequence {
    GateKind kind{GateKind::aa_single};
    double phi{0.0};
    std::vector<GateSegment> segments;
    ComplexMatrix target_unitary;

    std::string label() const { return to_string(kind); }
    Eigen::Index dim() const { return target_unitary.rows(); }
    double total_duration() const;

    /// Cumulative segment end times, starting with 0.
    std::vector<double> boundaries() const;

    /// Noiseless propagator of the whole sequence.
    ComplexMatrix ideal_propagator() const;
};

ComplexMatrix single_qubit_hamiltonian(const SingleQubitFields& f);
ComplexMatrix two_qubit_hamiltonian(const TwoQubitFields& f);

/// t₁ = π/(2B₀): duration of the first AA rotation.
double single_qubit_t1(double b0);
/// t_m1 = π/(4J_m).
double two_qubit_tm1(double jm);

/// diag(e^{−iΦ}, e^{iΦ})
ComplexMatrix u_single(double phi);

/// Phases e^{i(π−Φ)}, e^{i(π+Φ)}, e^{−i(π−Φ)}, e^{−i(π+Φ)} on |++⟩_x, |+−⟩_x,
/// |−+⟩_x, |−−⟩_x, in the computational basis.
ComplexMatrix u_two(double phi);

/// Columns |++⟩_x, |+−⟩_x, |−+⟩_x, |−−⟩_x in the computational basis.
ComplexMatrix x_product_basis();

GateSequence aa_single(double phi, double b0);
GateSequence dyn_single(double phi, double b0);
GateSequence aa_two(double phi, double jm);
GateSequence dyn_two(double phi, double jm);
GateSequence make_sequence(GateKind kind, double phi, double field_scale);

/// CNOT with qubit 1 as control, acting in the {|±⟩_x|±⟩_x} basis, written in
/// the computational basis.
ComplexMatrix cnot_x_basis();

/// The printed decomposition
///   e^{i π/(2√2)(σ_z⁽²⁾−σ_x⁽²⁾)} e^{iπ/4 σ_x⁽¹⁾} e^{iπ/4 σ_x⁽²⁾} U_two(π/4)
///   e^{iπ/2 σ_x⁽¹⁾} e^{i π/(2√2)(σ_z⁽²⁾−σ_x⁽²⁾)}
/// with U_two(π/4) taken from the noiseless aa_two(π/4, J_m) sequence.
ComplexMatrix cnot_composition(double jm);

/// A gate sequence bound to a bath, with propagators precomputed for a time grid.
///
/// The grid is n_time_samples uniform points on [0, t_end] merged with every
/// segment boundary. If t_end exceeds the sequence duration the last segment's
/// Hamiltonian is held for the remaining time.
class CompiledSequence {
public:
    CompiledSequence(const GateSequence& seq, std::span<const CouplingSpec> couplings,
                     int n_time_samples = 2, double t_end = -1.0);

    const GateSequence& sequence() const { return seq_; }
    const std::vector<double>& times() const { return times_; }
    double t_end() const { return times_.back(); }

    /// Superoperator ρ(0) ↦ ρ(t_end).
    const ComplexMatrix& superoperator() const { return sample_superops_.back(); }

    /// Noiseless propagator from 0 to the k-th sample time.
    const ComplexMatrix& ideal_unitary(std::size_t k) const { return sample_unitaries_.at(k); }

    ComplexMatrix final_state(const ComplexMatrix& rho0) const;
    Trajectory trajectory(const ComplexMatrix& rho0) const;

private:
    GateSequence seq_;
    std::vector<double> times_;
    std::vector<ComplexMatrix> sample_superops_;
    std::vector<ComplexMatrix> sample_unitaries_;
};

Trajectory run_sequence(const GateSequence& seq, const ComplexMatrix& rho0,
                        std::span<const CouplingSpec> couplings, int n_time_samples);

} // namespace geophase
