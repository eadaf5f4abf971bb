// metrics.cpp: Fidelity, sampling, concurrence and closed-form population dynamics

#include "geophase/metrics.hpp"

#include "geophase/parallel.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace geophase {

namespace {

constexpr double kPi = std::numbers::pi;

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

ComplexMatrix spin_flip() {
    return qmath::kron(qmath::sigma_y(), qmath::sigma_y());
}

} // namespace

double fidelity(const StateVector& psi_in, const ComplexMatrix& target, const ComplexMatrix& rho_out) {
    const Eigen::Index d = psi_in.size();
    if (target.rows() != d || target.cols() != d || rho_out.rows() != d || rho_out.cols() != d) {
        throw InvalidInput("fidelity: dimension mismatch");
    }
    if (std::abs(psi_in.norm() - 1.0) > 1e-12) {
        throw InvalidInput("fidelity: input state is not normalized");
    }
    const StateVector ideal = target * psi_in;
    const cplx f = ideal.dot(rho_out * ideal);
    if (std::abs(f.imag()) > 1e-10) {
        throw std::runtime_error("fidelity: overlap has a non-negligible imaginary part");
    }
    return f.real();
}

double f_d_closed_form(double alpha, double /*phi*/, const BathSpec& bath, double b0) {
    const double t_d = 2.0 * kPi / b0;
    const double c2 = std::cos(alpha) * std::cos(alpha);
    const double s2 = std::sin(alpha) * std::sin(alpha);
    return c2 * c2 + s2 * s2 + 2.0 * std::exp(-4.0 * kPi * bath.kT * bath.lambda * t_d) * c2 * s2;
}

std::string to_string(StateSampler sampler) {
    return sampler == StateSampler::haar ? "haar" : "hyperspherical";
}

StateSampler parse_state_sampler(const std::string& text) {
    if (text == "haar") return StateSampler::haar;
    if (text == "hyperspherical") return StateSampler::hyperspherical;
    throw InvalidInput("unknown sampler '" + text + "' (expected haar or hyperspherical)");
}

StateVector sample_pure_state(Eigen::Index dim, StateSampler sampler, std::uint64_t seed,
                              std::uint64_t index) {
    if (dim < 1) throw InvalidInput("sample_pure_state: dimension must be >= 1");
    auto rng = substream(seed, index);
    StateVector v(dim);
    if (sampler == StateSampler::haar) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (Eigen::Index k = 0; k < dim; ++k) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            v(k) = cplx{re, im};
        }
        return qmath::normalized(v);
    }
    std::uniform_real_distribution<double> angle(0.0, 0.5 * kPi);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    double remaining = 1.0;
    for (Eigen::Index k = 0; k + 1 < dim; ++k) {
        const double a = angle(rng);
        const double ph = k == 0 ? 0.0 : phase(rng);
        v(k) = std::polar(remaining * std::cos(a), ph);
        remaining *= std::sin(a);
    }
    v(dim - 1) = std::polar(remaining, dim > 1 ? phase(rng) : 0.0);
    return qmath::normalized(v);
}

AverageFidelity average_fidelity(const CompiledSequence& gate, std::size_t n_states,
                                 std::uint64_t seed, StateSampler sampler, unsigned threads) {
    if (n_states < 1) throw InvalidInput("average_fidelity: n_states must be >= 1");
    const auto& seq = gate.sequence();
    const Eigen::Index d = seq.dim();
    std::vector<double> values(n_states);
    parallel_for(n_states, threads, [&](std::size_t i) {
        const StateVector psi = sample_pure_state(d, sampler, seed, i);
        const ComplexMatrix rho = gate.final_state(qmath::projector(psi));
        values[i] = fidelity(psi, seq.target_unitary, rho);
    });
    double sum = 0.0;
    for (double f : values) sum += f;
    const double mean = sum / static_cast<double>(n_states);
    double var = 0.0;
    for (double f : values) var += (f - mean) * (f - mean);
    AverageFidelity out;
    out.mean = mean;
    out.n_states = n_states;
    out.standard_error = n_states > 1
        ? std::sqrt(var / static_cast<double>(n_states - 1) / static_cast<double>(n_states))
        : 0.0;
    return out;
}

AverageFidelity average_fidelity(const GateSequence& seq, std::span<const CouplingSpec> couplings,
                                 std::size_t n_states, std::uint64_t seed, StateSampler sampler,
                                 unsigned threads) {
    return average_fidelity(CompiledSequence(seq, couplings), n_states, seed, sampler, threads);
}

double concurrence(const ComplexMatrix& rho) {
    if (rho.rows() != 4 || rho.cols() != 4) {
        throw InvalidInput("concurrence: expected a 4x4 density matrix");
    }
    if (qmath::hermiticity_defect(rho) > 1e-8) {
        throw InvalidInput("concurrence: density matrix is not Hermitian");
    }
    const ComplexMatrix h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    Eigen::VectorXd w = solver.eigenvalues();
    if (w.minCoeff() < -1e-6) {
        throw PositivityError("concurrence: density matrix eigenvalue below -1e-6");
    }
    w = w.cwiseMax(0.0);
    const ComplexMatrix& v = solver.eigenvectors();
    const ComplexMatrix root = v * w.cwiseSqrt().asDiagonal() * v.adjoint();
    // Singular values of √ρ Ỹ √ρ* are the square roots of the eigenvalues of ρ Ỹ ρ* Ỹ.
    const ComplexMatrix t = root * spin_flip() * root.conjugate();
    Eigen::JacobiSVD<ComplexMatrix> svd(t);
    const Eigen::VectorXd s = svd.singularValues();  // descending
    return std::max(0.0, s(0) - s(1) - s(2) - s(3));
}

std::string to_string(BellState state) {
    switch (state) {
    case BellState::phi_plus: return "phi+";
    case BellState::phi_minus: return "phi-";
    case BellState::psi_plus: return "psi+";
    case BellState::psi_minus: return "psi-";
    }
    return "unknown";
}

BellState parse_bell_state(const std::string& text) {
    for (auto b : {BellState::phi_plus, BellState::phi_minus, BellState::psi_plus, BellState::psi_minus}) {
        if (text == to_string(b)) return b;
    }
    throw InvalidInput("unknown Bell state '" + text + "' (expected phi+, phi-, psi+ or psi-)");
}

StateVector bell_state(BellState state) {
    const StateVector pp = qmath::kron(ket::x_plus(), ket::x_plus());
    const StateVector pm = qmath::kron(ket::x_plus(), ket::x_minus());
    const StateVector mp = qmath::kron(ket::x_minus(), ket::x_plus());
    const StateVector mm = qmath::kron(ket::x_minus(), ket::x_minus());
    switch (state) {
    case BellState::phi_plus: return (pm + mp) * M_SQRT1_2;
    case BellState::phi_minus: return (pm - mp) * M_SQRT1_2;
    case BellState::psi_plus: return (pp + mm) * M_SQRT1_2;
    case BellState::psi_minus: return (pp - mm) * M_SQRT1_2;
    }
    throw InvalidInput("bell_state: unknown state");
}

PopulationPair analytic_pq(double t, double j, const BathSpec& bath) {
    if (!(j > 0.0)) throw InvalidInput("analytic_pq: J must be > 0");
    if (t < 0.0) throw InvalidInput("analytic_pq: negative time");
    bath.validate();
    const double mu_up = 2.0 * gamma_real(j, bath);
    const double mu_down = 2.0 * gamma_real(-j, bath);
    const double total = mu_up + mu_down;
    if (total == 0.0) return {0.0, 1.0};
    const double decay = std::exp(-4.0 * t * total);
    return {mu_up * (1.0 - decay) / total, (mu_down + mu_up * decay) / total};
}

} // namespace geophase
