// redfield.hpp: Bloch-Redfield generators for piecewise-constant Hamiltonians
//
// A generator M acts on row-major vectorized density matrices, ρ(t) = exp(M t) ρ(0).
// For a system coupled to baths through Hermitian operators A_k,
//
//   ρ̇ = −i[H, ρ] + Σ_k (Λ_k ρ A_k + A_k ρ Λ_k† − A_k Λ_k ρ − ρ Λ_k† A_k),
//   (Λ_k)_{mn} = (A_k)_{mn} Γ_k((E_n − E_m)/2)      (eigenbasis of H)
//
// which is the full, non-secular Redfield tensor. Population-coherence terms
// are kept.

#pragma once

#include "geophase/bath.hpp"
#include "geophase/qmath.hpp"

#include <span>
#include <string>
#include <vector>

namespace geophase {

struct CouplingSpec {
    ComplexMatrix op;  // Hermitian system operator
    BathSpec bath;
    std::string label;
};

enum class CouplingAxis { z, x };
enum class BathTopology { common, independent };

std::string to_string(CouplingAxis axis);
std::string to_string(BathTopology topology);
CouplingAxis parse_coupling_axis(const std::string& text);
BathTopology parse_bath_topology(const std::string& text);

std::vector<CouplingSpec> single_qubit_coupling(const BathSpec& bath,
                                                CouplingAxis axis = CouplingAxis::z);

/// common: one bath coupled to σ⁽¹⁾ + σ⁽²⁾. independent: one bath per qubit,
/// identical spectral densities.
std::vector<CouplingSpec> two_qubit_couplings(BathTopology topology, const BathSpec& bath,
                                              CouplingAxis axis = CouplingAxis::z);

struct Generator {
    ComplexMatrix matrix;  // d² × d², expressed in `basis`
    ComplexMatrix basis;   // columns are the basis vectors (identity = computational)
    std::vector<double> bohr_frequencies;

    Eigen::Index system_dim() const { return basis.rows(); }

    /// The same generator in the computational basis.
    ComplexMatrix computational() const;

    /// The same generator re-expressed in another orthonormal basis.
    Generator expressed_in(const ComplexMatrix& new_basis) const;
};

/// The printed single-qubit generator for H = −(b_z σ_z + b_x σ_x), whose Bohr
/// gap is 2B with B = √(b_z² + b_x²), coupled to σ_z. Expressed in the
/// eigenbasis (excited, ground) = ((−sin θ/2, cos θ/2), (cos θ/2, sin θ/2)),
/// tan θ = b_x / b_z. For b_x = 0 it is diagonal.
Generator closed_form_single_qubit(double bz, double bx, const BathSpec& bath);

/// Full Redfield generator in the computational basis. Eigenvalues of H closer
/// than `degeneracy_tol` are treated as one level when forming Bohr frequencies.
Generator build_generator(const ComplexMatrix& hamiltonian,
                          std::span<const CouplingSpec> couplings,
                          double degeneracy_tol = 1e-9,
                          RateCache& cache = RateCache::shared());

/// exp(M t) in the computational basis.
ComplexMatrix propagator(const Generator& gen, double t);

/// Applies a computational-basis superoperator to ρ.
ComplexMatrix apply_superop(const ComplexMatrix& superop, const ComplexMatrix& rho);

/// Throws InvalidInput unless ρ is square, Hermitian and of unit trace (1e-9).
void validate_density_matrix(const ComplexMatrix& rho, Eigen::Index dim);

ComplexMatrix evolve(const Generator& gen, const ComplexMatrix& rho0, double t);

struct Trajectory {
    std::vector<double> times;
    std::vector<ComplexMatrix> states;

    std::size_t size() const { return times.size(); }
    double max_trace_error() const;
    double max_hermiticity_defect() const;
    double min_eigenvalue() const;
};

/// States at n_samples uniformly spaced times in [0, t_end] (both ends included).
Trajectory evolve_trajectory(const Generator& gen, const ComplexMatrix& rho0, double t_end,
                             int n_samples);

} // namespace geophase
