#include "geophase/gates.hpp"
#include "geophase/metrics.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace geophase;

namespace {

constexpr double kPi = std::numbers::pi;

// exp(−iθ P) for an involutory P (P² = I).
ComplexMatrix involution_exp(double theta, const ComplexMatrix& p) {
    return std::cos(theta) * qmath::identity(p.rows()) - I_UNIT * std::sin(theta) * p;
}

ComplexMatrix printed_aa_single(double phi) {
    const ComplexMatrix u1 = oracle::pauli_rotation(kPi / 4.0, 1.0, 0.0, 0.0);
    const ComplexMatrix u2 = oracle::pauli_rotation(kPi / 2.0, -std::cos(phi), 0.0, std::sin(phi));
    return u1 * u2 * u1;
}

ComplexMatrix printed_aa_two(double phi) {
    const ComplexMatrix z1 = qmath::on_qubit(qmath::sigma_z(), 0, 2);
    const ComplexMatrix xx = qmath::kron(qmath::sigma_x(), qmath::sigma_x());
    // cosΦ z1 − sinΦ xx squares to the identity since z1 and xx anticommute.
    const ComplexMatrix u1 = involution_exp(kPi / 4.0, z1);
    const ComplexMatrix u2 = involution_exp(kPi / 2.0, std::cos(phi) * z1 - std::sin(phi) * xx);
    return u1 * u2 * u1;
}

ComplexMatrix printed_dyn_two(double phi) {
    return involution_exp(-(kPi - phi), qmath::kron(qmath::sigma_x(), qmath::sigma_x()));
}

ComplexMatrix x_basis_phases(double phi) {
    Eigen::VectorXcd d(4);
    d << std::polar(1.0, kPi - phi), std::polar(1.0, kPi + phi), std::polar(1.0, -(kPi - phi)),
        std::polar(1.0, -(kPi + phi));
    const ComplexMatrix v = x_product_basis();
    return v * d.asDiagonal() * v.adjoint();
}

ComplexMatrix noiseless_superop(const GateSequence& seq) {
    const BathSpec bath{0.0, 500.0, 0.0};
    const auto couplings = seq.dim() == 2 ? single_qubit_coupling(bath)
                                          : two_qubit_couplings(BathTopology::common, bath);
    return CompiledSequence(seq, couplings).superoperator();
}

}  // namespace

TEST_CASE("printed unitaries agree with the target constructors") {
    for (double phi : {0.0, 0.3, kPi / 4.0, 1.9, kPi}) {
        CHECK(qmath::phase_distance(printed_aa_single(phi), u_single(phi)) < 1e-12);
        CHECK(qmath::phase_distance(printed_aa_two(phi), u_two(phi)) < 1e-12);
        CHECK(qmath::phase_distance(printed_dyn_two(phi), u_two(phi)) < 1e-12);
        CHECK(qmath::max_abs_diff(u_two(phi), x_basis_phases(phi)) < 1e-12);
    }
    ComplexMatrix d(2, 2);
    d << std::polar(1.0, -kPi / 3.0), 0.0, 0.0, std::polar(1.0, kPi / 3.0);
    CHECK(qmath::max_abs_diff(u_single(kPi / 3.0), d) < 1e-15);
}

TEST_CASE("noiseless sequences realize their targets") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(0.0, kPi);
    for (int trial = 0; trial < 20; ++trial) {
        const double phi = u(rng);
        for (auto kind : {GateKind::aa_single, GateKind::dyn_single, GateKind::aa_two, GateKind::dyn_two}) {
            const double scale = is_two_qubit(kind) ? 5.0 : 10.0;
            const GateSequence seq = make_sequence(kind, phi, scale);
            const ComplexMatrix target = seq.dim() == 2 ? u_single(phi) : u_two(phi);
            CAPTURE(to_string(kind));
            CAPTURE(phi);
            CHECK(qmath::phase_distance(seq.ideal_propagator(), target) < 1e-9);
            CHECK(qmath::max_abs_diff(seq.target_unitary, target) < 1e-15);
            CHECK(qmath::max_abs_diff(noiseless_superop(seq), qmath::sandwich(target, target.adjoint())) < 1e-9);
        }
    }
}

TEST_CASE("sequence propagators match explicit products of segment exponentials") {
    for (auto kind : {GateKind::aa_single, GateKind::aa_two}) {
        const GateSequence seq = make_sequence(kind, 0.8, kind == GateKind::aa_two ? 5.0 : 10.0);
        ComplexMatrix u = qmath::identity(seq.dim());
        for (const auto& s : seq.segments) u = oracle::unitary_from_spectrum(s.hamiltonian(), s.duration) * u;
        CHECK(qmath::max_abs_diff(u, seq.ideal_propagator()) < 1e-12);
    }
}

TEST_CASE("single-qubit special phases") {
    CHECK(qmath::phase_distance(aa_single(0.0, 10.0).ideal_propagator(), qmath::identity(2)) < 1e-10);
    CHECK(qmath::phase_distance(dyn_single(0.0, 10.0).ideal_propagator(), qmath::identity(2)) < 1e-12);
    CHECK(qmath::max_abs_diff(dyn_single(kPi, 10.0).ideal_propagator(), -qmath::identity(2)) < 1e-12);
    CHECK(qmath::phase_distance(aa_single(kPi / 3.0, 10.0).ideal_propagator(), u_single(kPi / 3.0)) < 1e-10);

    const double alpha = 0.6;
    const double phi = 1.1;
    const StateVector out = dyn_single(phi, 10.0).ideal_propagator() * ket::alpha_state(alpha);
    CHECK(std::abs(out(0) - std::polar(std::cos(alpha), -phi)) < 1e-12);
    CHECK(std::abs(out(1) - std::polar(std::sin(alpha), phi)) < 1e-12);
}

TEST_CASE("two-qubit special phases") {
    CHECK(qmath::phase_distance(dyn_two(kPi, 5.0).ideal_propagator(), qmath::identity(4)) < 1e-12);
    CHECK(qmath::phase_distance(aa_two(0.0, 5.0).ideal_propagator(), qmath::identity(4)) < 1e-10);
    CHECK(qmath::phase_distance(aa_two(kPi / 4.0, 5.0).ideal_propagator(),
                                dyn_two(kPi / 4.0, 5.0).ideal_propagator()) < 1e-10);
    // Diagonal in the x⊗x basis with the stated phases.
    const ComplexMatrix v = x_product_basis();
    const ComplexMatrix in_x = v.adjoint() * aa_two(kPi / 4.0, 5.0).ideal_propagator() * v;
    const ComplexMatrix expected = v.adjoint() * x_basis_phases(kPi / 4.0) * v;
    CHECK(qmath::phase_distance(in_x, expected) < 1e-10);
    CHECK(in_x.diagonal().cwiseAbs().minCoeff() > 1.0 - 1e-12);
}

TEST_CASE("x-basis Bell state is an eigenvector of the dynamical conditional gate") {
    const StateVector psi = bell_state(BellState::psi_plus);
    const StateVector out = dyn_two(0.7, 5.0).ideal_propagator() * psi;
    CHECK(std::abs(std::abs(psi.dot(out)) - 1.0) < 1e-12);
}

TEST_CASE("durations and segment structure") {
    const double b0 = 10.0;
    const double jm = 5.0;
    const double t1 = single_qubit_t1(b0);
    const double tm1 = two_qubit_tm1(jm);
    CHECK(t1 == kPi / (2.0 * b0));
    CHECK(tm1 == kPi / (4.0 * jm));
    for (double phi : {0.0, 1.0, 2.5}) {
        const auto a1 = aa_single(phi, b0);
        const auto d1 = dyn_single(phi, b0);
        const auto a2 = aa_two(phi, jm);
        const auto d2 = dyn_two(phi, jm);
        CHECK(a1.total_duration() == d1.total_duration());
        CHECK(a1.total_duration() == 4.0 * t1);
        CHECK(d1.total_duration() == doctest::Approx(2.0 * kPi / b0).epsilon(1e-15));
        CHECK(a2.total_duration() == d2.total_duration());
        CHECK(a2.total_duration() == 4.0 * tm1);
        CHECK(a1.segments.size() == 3);
        CHECK(a2.segments.size() == 3);
        CHECK(d1.segments.size() == 1);
        CHECK(d2.segments.size() == 1);
        CHECK(a1.segments[0].duration == t1);
        CHECK(a1.segments[1].duration == 2.0 * t1);
        CHECK(a2.segments[1].duration == 2.0 * tm1);
        const auto bounds = a2.boundaries();
        REQUIRE(bounds.size() == 4);
        CHECK(bounds.front() == 0.0);
        CHECK(bounds.back() == a2.total_duration());
    }
}

TEST_CASE("idle two-qubit fields are exactly zero") {
    const auto seq = aa_two(0.9, 5.0);
    for (const auto& s : seq.segments) {
        const auto& f = std::get<TwoQubitFields>(s.fields);
        CHECK(f.bx1 == 0.0);
        CHECK(f.bz2 == 0.0);
        CHECK(f.bx2 == 0.0);
    }
    CHECK(std::get<TwoQubitFields>(seq.segments[0].fields).j == 0.0);
    const auto dyn = dyn_two(0.9, 5.0);
    const auto& f = std::get<TwoQubitFields>(dyn.segments[0].fields);
    CHECK(f.bz1 == 0.0);
    CHECK(f.j == doctest::Approx((kPi - 0.9) * 5.0 / kPi).epsilon(1e-15));
}

TEST_CASE("dynamical conditional gate requires phi in [0, pi]") {
    CHECK_THROWS_AS(dyn_two(-0.1, 5.0), InvalidInput);
    CHECK_THROWS_AS(dyn_two(kPi + 0.1, 5.0), InvalidInput);
    CHECK_THROWS_AS(aa_single(0.3, 0.0), InvalidInput);
}

TEST_CASE("printed CNOT composition") {
    const ComplexMatrix c = cnot_composition(5.0);
    const ComplexMatrix target = cnot_x_basis();
    CHECK(qmath::phase_distance(c * target.adjoint(), qmath::identity(4)) < 1e-9);

    const StateVector pp = qmath::kron(ket::x_plus(), ket::x_plus());
    const StateVector mp = qmath::kron(ket::x_minus(), ket::x_plus());
    const StateVector mm = qmath::kron(ket::x_minus(), ket::x_minus());
    CHECK(std::abs(std::abs(pp.dot(c * pp)) - 1.0) < 1e-9);
    CHECK(std::abs(std::abs(mm.dot(c * mp)) - 1.0) < 1e-9);
}

TEST_CASE("compiled sequence time grid") {
    const BathSpec bath{1e-3, 250.0, 0.0};
    const auto seq = aa_two(0.5, 5.0);
    const auto couplings = two_qubit_couplings(BathTopology::common, bath);
    const CompiledSequence c(seq, couplings, 10);
    for (double b : seq.boundaries()) {
        bool found = false;
        for (double t : c.times()) found = found || t == b;
        CHECK(found);
    }
    CHECK(c.times().front() == 0.0);
    CHECK(c.t_end() == seq.total_duration());
    for (std::size_t k = 1; k < c.times().size(); ++k) CHECK(c.times()[k] > c.times()[k - 1]);

    const CompiledSequence longer(seq, couplings, 50, 3.0 * seq.total_duration());
    CHECK(longer.t_end() == doctest::Approx(3.0 * seq.total_duration()));
    const ComplexMatrix rho0 = qmath::projector(bell_state(BellState::phi_plus));
    const auto traj = longer.trajectory(rho0);
    CHECK(traj.size() == longer.times().size());
    CHECK(qmath::max_abs_diff(traj.states.back(), longer.final_state(rho0)) < 1e-14);

    // The state at the sequence end agrees between the two grids.
    std::size_t k_end = 0;
    for (std::size_t k = 0; k < longer.times().size(); ++k)
        if (longer.times()[k] == seq.total_duration()) k_end = k;
    REQUIRE(k_end > 0);
    CHECK(qmath::max_abs_diff(traj.states[k_end], c.final_state(rho0)) < 1e-12);
    CHECK(qmath::phase_distance(longer.ideal_unitary(k_end), seq.ideal_propagator()) < 1e-12);
}

TEST_CASE("run_sequence noiseless and zero-temperature limits") {
    const double alpha = kPi / 4.0;
    const StateVector psi = ket::alpha_state(alpha);
    {
        const auto seq = aa_single(kPi / 2.0, 10.0);
        const auto traj = run_sequence(seq, qmath::projector(psi), single_qubit_coupling(BathSpec{0.0, 500.0, 0.0}), 21);
        CHECK(fidelity(psi, seq.target_unitary, traj.states.back()) == doctest::Approx(1.0).epsilon(1e-10));
    }
    {
        const auto seq = dyn_single(kPi / 2.0, 10.0);
        const auto traj = run_sequence(seq, qmath::projector(psi), single_qubit_coupling(BathSpec{1e-3, 500.0, 0.0}), 21);
        CHECK(std::abs(fidelity(psi, seq.target_unitary, traj.states.back()) - 1.0) < 1e-10);
    }
    {
        const auto seq = aa_single(kPi / 2.0, 10.0);
        const auto traj = run_sequence(seq, qmath::projector(psi), single_qubit_coupling(BathSpec{1e-3, 500.0, 0.0}), 21);
        CHECK(fidelity(psi, seq.target_unitary, traj.states.back()) < 1.0 - 1e-6);
    }
}

TEST_CASE("gate labels round-trip") {
    for (auto k : {GateKind::aa_single, GateKind::dyn_single, GateKind::aa_two, GateKind::dyn_two}) {
        CHECK(parse_gate_kind(to_string(k)) == k);
    }
    CHECK_THROWS(parse_gate_kind("cnot"));
}
