// qmath.cpp: Dense complex linear algebra helpers

#include "geophase/qmath.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace geophase {
namespace qmath {

ComplexMatrix identity(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix sigma_x() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

ComplexMatrix sigma_y() {
    ComplexMatrix m(2, 2);
    m << 0.0, -I_UNIT, I_UNIT, 0.0;
    return m;
}

ComplexMatrix sigma_z() {
    ComplexMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

ComplexMatrix on_qubit(const ComplexMatrix& op, int index, int n_qubits) {
    if (op.rows() != 2 || op.cols() != 2) {
        throw InvalidInput("on_qubit: operator must be 2x2");
    }
    if (index < 0 || index >= n_qubits) {
        throw InvalidInput("on_qubit: qubit index out of range");
    }
    ComplexMatrix out = identity(1);
    for (int q = 0; q < n_qubits; ++q) {
        out = kron(out, q == index ? op : identity(2));
    }
    return out;
}

ComplexMatrix expm(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        throw InvalidInput("expm: matrix must be square");
    }
    if (!m.allFinite()) {
        throw InvalidInput("expm: non-finite entries");
    }
    return m.exp();
}

StateVector vectorize(const ComplexMatrix& rho) {
    if (rho.rows() != rho.cols()) {
        throw InvalidInput("vectorize: matrix must be square");
    }
    const Eigen::Index d = rho.rows();
    StateVector v(d * d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            v(i * d + j) = rho(i, j);
        }
    }
    return v;
}

ComplexMatrix devectorize(const StateVector& v) {
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (d * d != v.size()) {
        throw InvalidInput("devectorize: length is not a perfect square");
    }
    ComplexMatrix rho(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            rho(i, j) = v(i * d + j);
        }
    }
    return rho;
}

ComplexMatrix sandwich(const ComplexMatrix& left, const ComplexMatrix& right) {
    return kron(left, right.transpose());
}

ComplexMatrix superop_to_basis(const ComplexMatrix& superop, const ComplexMatrix& basis) {
    // vec(V† ρ V) = (V† ⊗ Vᵀ) vec(ρ); the inverse map is V ⊗ V*.
    const ComplexMatrix fwd = sandwich(basis.adjoint(), basis);
    const ComplexMatrix inv = sandwich(basis, basis.adjoint());
    return fwd * superop * inv;
}

ComplexMatrix superop_from_basis(const ComplexMatrix& superop, const ComplexMatrix& basis) {
    const ComplexMatrix fwd = sandwich(basis.adjoint(), basis);
    const ComplexMatrix inv = sandwich(basis, basis.adjoint());
    return inv * superop * fwd;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidInput("max_abs_diff: shape mismatch");
    }
    return (a - b).cwiseAbs().maxCoeff();
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return max_abs_diff(a, b) <= tol;
}

double phase_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidInput("phase_distance: shape mismatch");
    }
    const cplx overlap = (b.adjoint() * a).trace();
    const cplx phase = overlap == cplx{} ? cplx{1.0, 0.0} : overlap / std::abs(overlap);
    return (a - phase * b).norm();
}

double hermiticity_defect(const ComplexMatrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
    return m.rows() == m.cols() && hermiticity_defect(m) <= tol;
}

StateVector normalized(const StateVector& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw InvalidInput("normalized: vector has zero or non-finite norm");
    }
    return v / n;
}

ComplexMatrix projector(const StateVector& psi) { return psi * psi.adjoint(); }

double min_eigenvalue(const ComplexMatrix& m) {
    const ComplexMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

} // namespace qmath

namespace ket {

StateVector z_plus() { return StateVector::Unit(2, 0); }
StateVector z_minus() { return StateVector::Unit(2, 1); }

StateVector x_plus() {
    StateVector v(2);
    v << M_SQRT1_2, M_SQRT1_2;
    return v;
}

StateVector x_minus() {
    StateVector v(2);
    v << M_SQRT1_2, -M_SQRT1_2;
    return v;
}

StateVector alpha_state(double alpha) {
    StateVector v(2);
    v << std::cos(alpha), std::sin(alpha);
    return v;
}

} // namespace ket

} // namespace geophase
