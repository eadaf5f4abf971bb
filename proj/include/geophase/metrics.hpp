// metrics.hpp: Gate fidelities, averaged fidelities and two-qubit concurrence

#pragma once

#include "geophase/bath.hpp"
#include "geophase/gates.hpp"
#include "geophase/qmath.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace geophase {

/// A density matrix had an eigenvalue below the −1e-6 tolerance.
class PositivityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// ⟨ψ|U† ρ U|ψ⟩.
double fidelity(const StateVector& psi_in, const ComplexMatrix& target, const ComplexMatrix& rho_out);

/// F_D = cos⁴α + sin⁴α + 2 e^{−4πkTλ t_d} cos²α sin²α with t_d = 2π/B₀.
/// Independent of Φ; the argument is kept for symmetry with the numeric route.
double f_d_closed_form(double alpha, double phi, const BathSpec& bath, double b0);

enum class StateSampler {
    haar,          // normalized complex Gaussian amplitudes
    hyperspherical // uniform hyperspherical angles in [0, π/2] and phases in [0, 2π)
};

std::string to_string(StateSampler sampler);
StateSampler parse_state_sampler(const std::string& text);

/// Pure state number `index` of the stream identified by `seed`. Each index has
/// its own generator, so any partition of the indices reproduces the same states.
StateVector sample_pure_state(Eigen::Index dim, StateSampler sampler, std::uint64_t seed,
                              std::uint64_t index);

struct AverageFidelity {
    double mean{0.0};
    double standard_error{0.0};
    std::size_t n_states{0};
};

AverageFidelity average_fidelity(const CompiledSequence& gate, std::size_t n_states,
                                 std::uint64_t seed, StateSampler sampler = StateSampler::haar,
                                 unsigned threads = 1);

AverageFidelity average_fidelity(const GateSequence& seq, std::span<const CouplingSpec> couplings,
                                 std::size_t n_states = 1000, std::uint64_t seed = 20110101,
                                 StateSampler sampler = StateSampler::haar, unsigned threads = 1);

/// Wootters concurrence of a two-qubit density matrix, spin flip taken in the
/// z⊗z product basis. Eigenvalues of ρ in [−1e-6, 0) are clipped; lower ones
/// raise PositivityError.
double concurrence(const ComplexMatrix& rho);

/// Bell states in the σ_x eigenbasis of each qubit:
///   φ± = (|+−⟩ ± |−+⟩)/√2,  ψ± = (|++⟩ ± |−−⟩)/√2.
enum class BellState { phi_plus, phi_minus, psi_plus, psi_minus };

std::string to_string(BellState state);
BellState parse_bell_state(const std::string& text);
StateVector bell_state(BellState state);

struct PopulationPair {
    double p{0.0};  // weight on |ψ₊⟩⟨ψ₊|
    double q{1.0};  // weight on |φ₊⟩⟨φ₊|
};

/// ρ(t) = P|ψ₊⟩⟨ψ₊| + Q|φ₊⟩⟨φ₊| for the dynamical two-qubit gate with exchange
/// J in a common bath, starting from |φ₊⟩.
PopulationPair analytic_pq(double t, double j, const BathSpec& bath);

} // namespace geophase
