// redfield.cpp: Redfield generator construction and density-matrix evolution

#include "geophase/redfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace geophase {

using qmath::sandwich;

std::string to_string(CouplingAxis axis) { return axis == CouplingAxis::z ? "z" : "x"; }

std::string to_string(BathTopology topology) {
    return topology == BathTopology::common ? "common" : "independent";
}

CouplingAxis parse_coupling_axis(const std::string& text) {
    if (text == "z") return CouplingAxis::z;
    if (text == "x") return CouplingAxis::x;
    throw InvalidInput("unknown coupling axis '" + text + "' (expected z or x)");
}

BathTopology parse_bath_topology(const std::string& text) {
    if (text == "common") return BathTopology::common;
    if (text == "independent") return BathTopology::independent;
    throw InvalidInput("unknown bath topology '" + text + "' (expected common or independent)");
}

namespace {

ComplexMatrix axis_operator(CouplingAxis axis) {
    return axis == CouplingAxis::z ? qmath::sigma_z() : qmath::sigma_x();
}

double scale_of(const ComplexMatrix& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

} // namespace

std::vector<CouplingSpec> single_qubit_coupling(const BathSpec& bath, CouplingAxis axis) {
    bath.validate();
    return {CouplingSpec{axis_operator(axis), bath, "sigma_" + to_string(axis)}};
}

std::vector<CouplingSpec> two_qubit_couplings(BathTopology topology, const BathSpec& bath,
                                              CouplingAxis axis) {
    bath.validate();
    const ComplexMatrix s = axis_operator(axis);
    const ComplexMatrix s1 = qmath::on_qubit(s, 0, 2);
    const ComplexMatrix s2 = qmath::on_qubit(s, 1, 2);
    const std::string name = "sigma_" + to_string(axis);
    if (topology == BathTopology::common) {
        return {CouplingSpec{s1 + s2, bath, name + "1+" + name + "2"}};
    }
    return {CouplingSpec{s1, bath, name + "1"}, CouplingSpec{s2, bath, name + "2"}};
}

ComplexMatrix Generator::computational() const {
    return qmath::superop_from_basis(matrix, basis);
}

Generator Generator::expressed_in(const ComplexMatrix& new_basis) const {
    if (new_basis.rows() != basis.rows() || new_basis.cols() != basis.cols()) {
        throw InvalidInput("Generator::expressed_in: basis dimension mismatch");
    }
    Generator out;
    out.matrix = qmath::superop_to_basis(computational(), new_basis);
    out.basis = new_basis;
    out.bohr_frequencies = bohr_frequencies;
    return out;
}

Generator closed_form_single_qubit(double bz, double bx, const BathSpec& bath) {
    bath.validate();
    const double b = std::hypot(bz, bx);
    const double theta = std::atan2(bx, bz);
    const double s2 = std::sin(theta) * std::sin(theta);
    const double c2 = std::cos(theta) * std::cos(theta);
    const double sin2t = std::sin(2.0 * theta);

    auto& cache = RateCache::shared();
    const cplx g_p = cache.gamma(b, bath);
    const cplx g_m = cache.gamma(-b, bath);
    const cplx g_0 = cache.gamma(0.0, bath);
    const cplx mu_p_b = g_p + std::conj(g_p);
    const cplx mu_p_mb = g_m + std::conj(g_m);
    const cplx mu_p_0 = g_0 + std::conj(g_0);
    const cplx mu_m_0 = g_0 - std::conj(g_0);
    const cplx xi_p = g_m + std::conj(g_p);
    const cplx ib = I_UNIT * b;

    ComplexMatrix m(4, 4);
    m(0, 0) = -s2 * mu_p_b;
    m(0, 1) = 0.5 * sin2t * mu_p_0;
    m(0, 2) = 0.5 * sin2t * mu_p_0;
    m(0, 3) = s2 * mu_p_mb;

    m(1, 0) = 0.5 * sin2t * (mu_m_0 + 2.0 * std::conj(g_p));
    m(1, 1) = -2.0 * ib - 2.0 * c2 * mu_p_0 - s2 * std::conj(xi_p);
    m(1, 2) = s2 * xi_p;
    m(1, 3) = 0.5 * sin2t * (mu_m_0 - 2.0 * g_m);

    m(2, 0) = 0.5 * sin2t * (-mu_m_0 + 2.0 * g_p);
    m(2, 1) = s2 * std::conj(xi_p);
    m(2, 2) = 2.0 * ib - 2.0 * c2 * mu_p_0 - s2 * xi_p;
    m(2, 3) = -0.5 * sin2t * (mu_m_0 + 2.0 * std::conj(g_m));

    m(3, 0) = s2 * mu_p_b;
    m(3, 1) = -0.5 * sin2t * mu_p_0;
    m(3, 2) = -0.5 * sin2t * mu_p_0;
    m(3, 3) = -s2 * mu_p_mb;

    ComplexMatrix basis(2, 2);
    basis << -std::sin(0.5 * theta), std::cos(0.5 * theta),
              std::cos(0.5 * theta), std::sin(0.5 * theta);

    Generator gen;
    gen.matrix = std::move(m);
    gen.basis = std::move(basis);
    if (b > 0.0) {
        gen.bohr_frequencies = {-2.0 * b, 0.0, 2.0 * b};
    } else {
        gen.bohr_frequencies = {0.0};
    }
    return gen;
}

Generator build_generator(const ComplexMatrix& hamiltonian,
                          std::span<const CouplingSpec> couplings, double degeneracy_tol,
                          RateCache& cache) {
    if (hamiltonian.rows() != hamiltonian.cols() || hamiltonian.rows() == 0) {
        throw InvalidInput("build_generator: Hamiltonian must be square and non-empty");
    }
    if (!hamiltonian.allFinite()) {
        throw InvalidInput("build_generator: Hamiltonian has non-finite entries");
    }
    if (!qmath::is_hermitian(hamiltonian, 1e-12 * scale_of(hamiltonian))) {
        throw InvalidInput("build_generator: Hamiltonian is not Hermitian");
    }
    const Eigen::Index d = hamiltonian.rows();
    for (const auto& c : couplings) {
        if (c.op.rows() != d || c.op.cols() != d) {
            throw InvalidInput("build_generator: coupling '" + c.label + "' has wrong dimension");
        }
        if (!qmath::is_hermitian(c.op, 1e-12 * scale_of(c.op))) {
            throw InvalidInput("build_generator: coupling '" + c.label + "' is not Hermitian");
        }
        c.bath.validate();
    }

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hamiltonian);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("build_generator: eigendecomposition failed");
    }
    const ComplexMatrix v = solver.eigenvectors();
    Eigen::VectorXd energy = solver.eigenvalues();  // ascending

    // Snap near-degenerate levels onto one representative energy.
    for (Eigen::Index k = 1; k < d; ++k) {
        if (energy(k) - energy(k - 1) < degeneracy_tol) energy(k) = energy(k - 1);
    }

    std::vector<double> bohr;
    for (Eigen::Index m = 0; m < d; ++m) {
        for (Eigen::Index n = 0; n < d; ++n) bohr.push_back(energy(m) - energy(n));
    }
    std::sort(bohr.begin(), bohr.end());
    bohr.erase(std::unique(bohr.begin(), bohr.end()), bohr.end());

    const ComplexMatrix id = qmath::identity(d);
    ComplexMatrix m = -I_UNIT * (sandwich(hamiltonian, id) - sandwich(id, hamiltonian));

    for (const auto& c : couplings) {
        const ComplexMatrix a_eig = v.adjoint() * c.op * v;
        ComplexMatrix lambda_eig = ComplexMatrix::Zero(d, d);
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) {
                if (a_eig(i, j) == cplx{0.0, 0.0}) continue;
                const double half_gap = 0.5 * (energy(j) - energy(i));
                lambda_eig(i, j) = a_eig(i, j) * cache.gamma(half_gap, c.bath);
            }
        }
        const ComplexMatrix lam = v * lambda_eig * v.adjoint();
        const ComplexMatrix lam_dag = lam.adjoint();
        const ComplexMatrix& a = c.op;
        m += sandwich(lam, a) + sandwich(a, lam_dag) - sandwich(a * lam, id) -
             sandwich(id, lam_dag * a);
    }

    Generator gen;
    gen.matrix = std::move(m);
    gen.basis = id;
    gen.bohr_frequencies = std::move(bohr);
    return gen;
}

ComplexMatrix propagator(const Generator& gen, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw InvalidInput("propagator: time must be finite and >= 0");
    }
    return qmath::expm(gen.computational() * t);
}

ComplexMatrix apply_superop(const ComplexMatrix& superop, const ComplexMatrix& rho) {
    if (superop.rows() != rho.size()) {
        throw InvalidInput("apply_superop: dimension mismatch");
    }
    return qmath::devectorize(superop * qmath::vectorize(rho));
}

void validate_density_matrix(const ComplexMatrix& rho, Eigen::Index dim) {
    if (rho.rows() != dim || rho.cols() != dim) {
        throw InvalidInput("density matrix has wrong dimension");
    }
    if (!rho.allFinite()) {
        throw InvalidInput("density matrix has non-finite entries");
    }
    if (qmath::hermiticity_defect(rho) > 1e-9) {
        throw InvalidInput("density matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - cplx{1.0, 0.0}) > 1e-9) {
        throw InvalidInput("density matrix does not have unit trace");
    }
}

ComplexMatrix evolve(const Generator& gen, const ComplexMatrix& rho0, double t) {
    validate_density_matrix(rho0, gen.system_dim());
    if (t < 0.0) {
        throw InvalidInput("evolve: negative time");
    }
    return apply_superop(propagator(gen, t), rho0);
}

double Trajectory::max_trace_error() const {
    double worst = 0.0;
    for (const auto& rho : states) worst = std::max(worst, std::abs(rho.trace() - cplx{1.0, 0.0}));
    return worst;
}

double Trajectory::max_hermiticity_defect() const {
    double worst = 0.0;
    for (const auto& rho : states) worst = std::max(worst, qmath::hermiticity_defect(rho));
    return worst;
}

double Trajectory::min_eigenvalue() const {
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& rho : states) lowest = std::min(lowest, qmath::min_eigenvalue(rho));
    return lowest;
}

Trajectory evolve_trajectory(const Generator& gen, const ComplexMatrix& rho0, double t_end,
                             int n_samples) {
    validate_density_matrix(rho0, gen.system_dim());
    if (!(t_end >= 0.0)) {
        throw InvalidInput("evolve_trajectory: negative end time");
    }
    if (n_samples < 2) {
        throw InvalidInput("evolve_trajectory: need at least two samples");
    }
    const ComplexMatrix mc = gen.computational();
    Trajectory traj;
    traj.times.reserve(static_cast<std::size_t>(n_samples));
    traj.states.reserve(static_cast<std::size_t>(n_samples));
    const StateVector v0 = qmath::vectorize(rho0);
    for (int k = 0; k < n_samples; ++k) {
        const double t = t_end * static_cast<double>(k) / static_cast<double>(n_samples - 1);
        traj.times.push_back(t);
        traj.states.push_back(qmath::devectorize(qmath::expm(mc * t) * v0));
    }
    return traj;
}

} // namespace geophase
