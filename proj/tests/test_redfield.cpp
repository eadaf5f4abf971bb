#include "geophase/redfield.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace geophase;

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<std::pair<double, double>> kFieldGrid{
    {10.0, 0.0}, {0.0, 10.0}, {3.0, 4.0}, {-3.0, 4.0}, {3.0, -4.0}, {-5.0, -1.0}, {0.5, 7.0}, {6.0, 6.0}};

ComplexMatrix half_gap_hamiltonian(double bz, double bx) {
    return -(bz * qmath::sigma_z() + bx * qmath::sigma_x());
}

ComplexMatrix random_density(Eigen::Index d, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    ComplexMatrix a(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) a(i, j) = cplx{g(rng), g(rng)};
    ComplexMatrix rho = a * a.adjoint();
    return rho / rho.trace().real();
}

ComplexMatrix two_qubit_h(double bz1, double bx1, double bz2, double bx2, double j) {
    const auto z = qmath::sigma_z();
    const auto x = qmath::sigma_x();
    return -0.5 * (bz1 * qmath::on_qubit(z, 0, 2) + bx1 * qmath::on_qubit(x, 0, 2) +
                   bz2 * qmath::on_qubit(z, 1, 2) + bx2 * qmath::on_qubit(x, 1, 2)) -
           j * qmath::kron(x, x);
}

}  // namespace

TEST_CASE("generic builder reproduces the closed-form single-qubit generator") {
    for (double kT : {0.0, 0.5, 2.0}) {
        const BathSpec bath{1e-3, 500.0, kT};
        const auto coupling = single_qubit_coupling(bath);
        for (const auto& [bz, bx] : kFieldGrid) {
            const Generator cf = closed_form_single_qubit(bz, bx, bath);
            const Generator gen = build_generator(half_gap_hamiltonian(bz, bx), coupling);
            const Generator in_cf = gen.expressed_in(cf.basis);
            CAPTURE(bz);
            CAPTURE(bx);
            CAPTURE(kT);
            CHECK(qmath::max_abs_diff(in_cf.matrix, cf.matrix) < 1e-10);
            CHECK(qmath::max_abs_diff(cf.computational(), gen.computational()) < 1e-10);
        }
    }
}

TEST_CASE("pure sigma_z field gives the diagonal dephasing generator") {
    const double b = 10.0;
    for (double kT : {0.0, 0.5, 2.0}) {
        const BathSpec bath{1e-3, 500.0, kT};
        const Generator cf = closed_form_single_qubit(b, 0.0, bath);
        const double mu0 = 2.0 * kPi * bath.lambda * kT;
        ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
        expected(1, 1) = cplx{-2.0 * mu0, -2.0 * b};
        expected(2, 2) = cplx{-2.0 * mu0, 2.0 * b};
        CHECK(qmath::max_abs_diff(cf.matrix, expected) < 1e-12);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (i != j) CHECK(cf.matrix(i, j) == cplx{});

        const Generator gen = build_generator(half_gap_hamiltonian(b, 0.0), single_qubit_coupling(bath));
        CHECK(qmath::max_abs_diff(gen.expressed_in(cf.basis).matrix, expected) < 1e-10);
    }
}

TEST_CASE("zero coupling leaves only the commutator") {
    const BathSpec bath{0.0, 500.0, 1.0};
    const Generator cf = closed_form_single_qubit(3.0, 4.0, bath);
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected(1, 1) = cplx{0.0, -10.0};
    expected(2, 2) = cplx{0.0, 10.0};
    CHECK(qmath::max_abs_diff(cf.matrix, expected) < 1e-14);
}

TEST_CASE("free evolution generator vanishes") {
    const Generator cf = closed_form_single_qubit(0.0, 0.0, BathSpec{0.0, 500.0, 0.0});
    CHECK(cf.matrix.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("two-qubit evolution without a bath is unitary conjugation") {
    std::mt19937_64 rng(41);
    const BathSpec bath{0.0, 250.0, 0.0};
    const ComplexMatrix h = two_qubit_h(1.3, -0.4, 0.0, 2.0, 0.7);
    for (auto topology : {BathTopology::common, BathTopology::independent}) {
        const auto couplings = two_qubit_couplings(topology, bath);
        const Generator gen = build_generator(h, couplings);
        const ComplexMatrix rho0 = random_density(4, rng);
        for (double t : {0.0, 0.3, 2.5}) {
            const ComplexMatrix u = oracle::unitary_from_spectrum(h, t);
            CHECK(qmath::max_abs_diff(evolve(gen, rho0, t), u * rho0 * u.adjoint()) < 1e-10);
        }
    }
}

TEST_CASE("coherence of the dephasing generator decays as a scalar exponential") {
    const double b = 10.0;
    const BathSpec bath{1e-3, 500.0, 0.5};
    const Generator cf = closed_form_single_qubit(b, 0.0, bath);
    const double mu0 = 2.0 * gamma(0.0, bath).real();
    ComplexMatrix rho0(2, 2);
    rho0 << 0.3, cplx{0.2, 0.1}, cplx{0.2, -0.1}, 0.7;
    for (double t : {0.1, 1.0, 7.0}) {
        const StateVector v = qmath::expm(cf.matrix * t) * qmath::vectorize(rho0);
        const cplx expected = rho0(0, 1) * std::exp(cplx{-2.0 * mu0, -2.0 * b} * t);
        CHECK(std::abs(v(1) - expected) < 1e-10);
        CHECK(std::abs(v(0) - rho0(0, 0)) < 1e-10);
        CHECK(std::abs(v(3) - rho0(1, 1)) < 1e-10);
    }
}

TEST_CASE("commuting field and coupling freeze populations") {
    const BathSpec bath{1e-3, 500.0, 2.0};
    const Generator gen = build_generator(-0.5 * 7.0 * qmath::sigma_z(), single_qubit_coupling(bath));
    std::mt19937_64 rng(43);
    const ComplexMatrix rho0 = random_density(2, rng);
    const auto traj = evolve_trajectory(gen, rho0, 20.0, 11);
    for (const auto& rho : traj.states) {
        CHECK(std::abs(rho(0, 0) - rho0(0, 0)) < 1e-10);
        CHECK(std::abs(rho(1, 1) - rho0(1, 1)) < 1e-10);
    }
}

TEST_CASE("evolution preserves trace and hermiticity") {
    std::mt19937_64 rng(47);
    const BathSpec bath{1e-3, 250.0, 0.5};
    std::vector<Generator> gens;
    gens.push_back(build_generator(-0.5 * (3.0 * qmath::sigma_z() + 4.0 * qmath::sigma_x()),
                                   single_qubit_coupling(bath)));
    gens.push_back(build_generator(-0.5 * (3.0 * qmath::sigma_z() + 4.0 * qmath::sigma_x()),
                                   single_qubit_coupling(bath, CouplingAxis::x)));
    for (auto topology : {BathTopology::common, BathTopology::independent}) {
        for (auto axis : {CouplingAxis::z, CouplingAxis::x}) {
            gens.push_back(build_generator(two_qubit_h(10.0, 0.0, 0.0, 0.0, 0.0),
                                           two_qubit_couplings(topology, bath, axis)));
            gens.push_back(build_generator(two_qubit_h(7.0, 0.0, 0.0, 0.0, 3.5),
                                           two_qubit_couplings(topology, bath, axis)));
        }
    }
    for (const auto& gen : gens) {
        const ComplexMatrix rho0 = random_density(gen.system_dim(), rng);
        const auto traj = evolve_trajectory(gen, rho0, 10.0, 21);
        CHECK(traj.max_trace_error() < 1e-9);
        CHECK(traj.max_hermiticity_defect() < 1e-9);
        CHECK(traj.size() == 21);
        CHECK(traj.times.back() == 10.0);
        CHECK(qmath::max_abs_diff(traj.states.front(), rho0) < 1e-15);
    }
}

TEST_CASE("generator columns conserve trace") {
    const BathSpec bath{1e-3, 250.0, 1.0};
    const Generator gen = build_generator(two_qubit_h(7.0, 1.0, -2.0, 0.5, 3.5),
                                          two_qubit_couplings(BathTopology::independent, bath));
    const ComplexMatrix m = gen.computational();
    for (Eigen::Index col = 0; col < m.cols(); ++col) {
        cplx s{};
        for (Eigen::Index i = 0; i < 4; ++i) s += m(i * 4 + i, col);
        CHECK(std::abs(s) < 1e-10);
    }
}

TEST_CASE("degenerate levels are grouped into one frequency class") {
    // J = 0 with a field on qubit 1 only: each level is doubly degenerate.
    const BathSpec bath{1e-3, 250.0, 0.5};
    const ComplexMatrix h = two_qubit_h(10.0, 0.0, 0.0, 0.0, 0.0);
    const Generator gen = build_generator(h, two_qubit_couplings(BathTopology::common, bath));
    std::vector<double> distinct;
    for (double w : gen.bohr_frequencies) {
        bool seen = false;
        for (double d : distinct) seen = seen || std::abs(d - w) < 1e-9;
        if (!seen) distinct.push_back(w);
    }
    CHECK(distinct.size() == 3);  // −10, 0, +10
    // A tiny perturbation splitting the degeneracy below the tolerance gives the same generator.
    const ComplexMatrix hp = h + 1e-12 * qmath::on_qubit(qmath::sigma_z(), 1, 2);
    const Generator gp = build_generator(hp, two_qubit_couplings(BathTopology::common, bath));
    CHECK(qmath::max_abs_diff(gp.computational(), gen.computational()) < 1e-9);
}

TEST_CASE("independent baths add their dissipators") {
    const BathSpec bath{1e-3, 250.0, 0.5};
    const ComplexMatrix h = two_qubit_h(7.0, 0.0, 0.0, 0.0, 3.5);
    const auto both = two_qubit_couplings(BathTopology::independent, bath);
    const Generator g12 = build_generator(h, both);
    const Generator g1 = build_generator(h, std::span<const CouplingSpec>(both.data(), 1));
    const Generator g2 = build_generator(h, std::span<const CouplingSpec>(both.data() + 1, 1));
    const Generator g0 = build_generator(h, std::span<const CouplingSpec>{});
    CHECK(qmath::max_abs_diff(g12.computational(), g1.computational() + g2.computational() - g0.computational()) < 1e-12);
}

TEST_CASE("input validation") {
    const BathSpec bath{};
    ComplexMatrix h = qmath::sigma_z();
    h(0, 1) = 1.0;
    CHECK_THROWS_AS(build_generator(h, single_qubit_coupling(bath)), InvalidInput);
    const Generator gen = build_generator(qmath::sigma_z(), single_qubit_coupling(bath));
    CHECK_THROWS_AS(propagator(gen, -1.0), InvalidInput);
    CHECK_THROWS_AS(evolve(gen, qmath::identity(2), 1.0), InvalidInput);  // trace 2
    CHECK_THROWS_AS(build_generator(qmath::identity(4), single_qubit_coupling(bath)), InvalidInput);
    CHECK(qmath::max_abs_diff(evolve(gen, qmath::projector(ket::x_plus()), 0.0),
                              qmath::projector(ket::x_plus())) < 1e-15);
}

TEST_CASE("coupling axis and topology labels round-trip") {
    for (auto a : {CouplingAxis::z, CouplingAxis::x}) CHECK(parse_coupling_axis(to_string(a)) == a);
    for (auto t : {BathTopology::common, BathTopology::independent}) CHECK(parse_bath_topology(to_string(t)) == t);
    CHECK_THROWS(parse_coupling_axis("y"));
    CHECK(two_qubit_couplings(BathTopology::common, BathSpec{}).size() == 1);
    CHECK(two_qubit_couplings(BathTopology::independent, BathSpec{}).size() == 2);
}
