// qmath.hpp: Dense complex linear algebra for 2-, 4- and 16-dimensional problems
//
// Pauli operators, tensor products, the matrix exponential and the row-major
// density-matrix vectorization used by every superoperator in the project.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

namespace geophase {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr cplx I_UNIT{0.0, 1.0};

/// Raised for malformed numerical input (non-finite entries, wrong shapes, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace qmath {

ComplexMatrix identity(Eigen::Index dim);
ComplexMatrix sigma_x();
ComplexMatrix sigma_y();
ComplexMatrix sigma_z();

/// Standard Kronecker product a ⊗ b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Embeds a single-qubit operator on qubit `index` (0 = leftmost factor) of an
/// n-qubit register.
ComplexMatrix on_qubit(const ComplexMatrix& op, int index, int n_qubits);

/// Matrix exponential by Padé scaling-and-squaring. Valid for non-normal and
/// non-diagonalizable input. Throws InvalidInput on non-finite entries.
ComplexMatrix expm(const ComplexMatrix& m);

/// Row-major stacking: vec(ρ)[i*d + j] = ρ(i, j). For a 2×2 matrix the order is
/// (ρ00, ρ01, ρ10, ρ11).
StateVector vectorize(const ComplexMatrix& rho);
ComplexMatrix devectorize(const StateVector& v);

/// Superoperator of ρ ↦ left·ρ·right under the row-major convention,
/// i.e. left ⊗ rightᵀ.
ComplexMatrix sandwich(const ComplexMatrix& left, const ComplexMatrix& right);

/// Re-expresses a superoperator given in the computational basis in the
/// orthonormal basis whose vectors are the columns of `basis`
/// (ρ' = basis† ρ basis).
ComplexMatrix superop_to_basis(const ComplexMatrix& superop, const ComplexMatrix& basis);
ComplexMatrix superop_from_basis(const ComplexMatrix& superop, const ComplexMatrix& basis);

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// min over χ of ‖a − e^{iχ} b‖_F.
double phase_distance(const ComplexMatrix& a, const ComplexMatrix& b);

double hermiticity_defect(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = 1e-12);

/// Normalizes to unit norm; throws InvalidInput on a zero vector.
StateVector normalized(const StateVector& v);

ComplexMatrix projector(const StateVector& psi);

/// Smallest eigenvalue of the Hermitian part of `m`.
double min_eigenvalue(const ComplexMatrix& m);

} // namespace qmath

namespace ket {

StateVector z_plus();
StateVector z_minus();
StateVector x_plus();
StateVector x_minus();

/// cos α |+⟩_z + sin α |−⟩_z
StateVector alpha_state(double alpha);

} // namespace ket

} // namespace geophase
