// gates.cpp: AA and dynamical gate programs

#include "geophase/gates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace geophase {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw InvalidInput(std::string(what) + " must be finite and > 0");
    }
}

ComplexMatrix diagonal_phases(std::initializer_list<double> phases) {
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(phases.size()),
                                          static_cast<Eigen::Index>(phases.size()));
    Eigen::Index k = 0;
    for (double p : phases) {
        m(k, k) = std::polar(1.0, p);
        ++k;
    }
    return m;
}

ComplexMatrix rotation(double angle, const ComplexMatrix& generator) {
    return qmath::expm(I_UNIT * angle * generator);
}

} // namespace

std::string to_string(GateKind kind) {
    switch (kind) {
    case GateKind::aa_single: return "aa-single";
    case GateKind::dyn_single: return "dyn-single";
    case GateKind::aa_two: return "aa-two";
    case GateKind::dyn_two: return "dyn-two";
    }
    return "unknown";
}

GateKind parse_gate_kind(const std::string& text) {
    for (auto k : {GateKind::aa_single, GateKind::dyn_single, GateKind::aa_two, GateKind::dyn_two}) {
        if (text == to_string(k)) return k;
    }
    throw InvalidInput("unknown gate '" + text +
                       "' (expected aa-single, dyn-single, aa-two or dyn-two)");
}

bool is_two_qubit(GateKind kind) { return kind == GateKind::aa_two || kind == GateKind::dyn_two; }

ComplexMatrix single_qubit_hamiltonian(const SingleQubitFields& f) {
    return -0.5 * (f.bz * qmath::sigma_z() + f.bx * qmath::sigma_x());
}

ComplexMatrix two_qubit_hamiltonian(const TwoQubitFields& f) {
    const ComplexMatrix h1 = single_qubit_hamiltonian({f.bz1, f.bx1});
    const ComplexMatrix h2 = single_qubit_hamiltonian({f.bz2, f.bx2});
    const ComplexMatrix id = qmath::identity(2);
    return qmath::kron(h1, id) + qmath::kron(id, h2) -
           f.j * qmath::kron(qmath::sigma_x(), qmath::sigma_x());
}

ComplexMatrix GateSegment::hamiltonian() const {
    return std::visit(
        [](const auto& f) -> ComplexMatrix {
            if constexpr (std::is_same_v<std::decay_t<decltype(f)>, SingleQubitFields>) {
                return single_qubit_hamiltonian(f);
            } else {
                return two_qubit_hamiltonian(f);
            }
        },
        fields);
}

double GateSequence::total_duration() const {
    double total = 0.0;
    for (const auto& s : segments) total += s.duration;
    return total;
}

std::vector<double> GateSequence::boundaries() const {
    std::vector<double> out{0.0};
    for (const auto& s : segments) out.push_back(out.back() + s.duration);
    return out;
}

ComplexMatrix GateSequence::ideal_propagator() const {
    ComplexMatrix u = qmath::identity(dim());
    for (const auto& s : segments) u = qmath::expm(-I_UNIT * s.hamiltonian() * s.duration) * u;
    return u;
}

double single_qubit_t1(double b0) { return kPi / (2.0 * b0); }
double two_qubit_tm1(double jm) { return kPi / (4.0 * jm); }

ComplexMatrix u_single(double phi) { return diagonal_phases({-phi, phi}); }

ComplexMatrix x_product_basis() {
    ComplexMatrix single(2, 2);
    single.col(0) = ket::x_plus();
    single.col(1) = ket::x_minus();
    return qmath::kron(single, single);
}

ComplexMatrix u_two(double phi) {
    const ComplexMatrix d = diagonal_phases({kPi - phi, kPi + phi, -(kPi - phi), -(kPi + phi)});
    const ComplexMatrix x = x_product_basis();
    return x * d * x.adjoint();
}

GateSequence aa_single(double phi, double b0) {
    require_positive(b0, "B0");
    const double t1 = single_qubit_t1(b0);
    const GateSegment outer{SingleQubitFields{0.0, -b0}, t1};
    const GateSegment middle{SingleQubitFields{-b0 * std::sin(phi), b0 * std::cos(phi)}, 2.0 * t1};
    return GateSequence{GateKind::aa_single, phi, {outer, middle, outer}, u_single(phi)};
}

GateSequence dyn_single(double phi, double b0) {
    require_positive(b0, "B0");
    const double t_d = 4.0 * single_qubit_t1(b0);
    const GateSegment only{SingleQubitFields{-2.0 * phi / t_d, 0.0}, t_d};
    return GateSequence{GateKind::dyn_single, phi, {only}, u_single(phi)};
}

GateSequence aa_two(double phi, double jm) {
    require_positive(jm, "Jm");
    const double tm1 = two_qubit_tm1(jm);
    TwoQubitFields outer;
    outer.bz1 = -2.0 * jm;
    TwoQubitFields middle;
    middle.bz1 = -2.0 * jm * std::cos(phi);
    middle.j = jm * std::sin(phi);
    return GateSequence{GateKind::aa_two, phi,
                        {GateSegment{outer, tm1}, GateSegment{middle, 2.0 * tm1},
                         GateSegment{outer, tm1}},
                        u_two(phi)};
}

GateSequence dyn_two(double phi, double jm) {
    require_positive(jm, "Jm");
    if (phi < 0.0 || phi > kPi) {
        throw InvalidInput("dyn_two: phi must lie in [0, pi]");
    }
    TwoQubitFields f;
    f.j = (kPi - phi) * jm / kPi;
    return GateSequence{GateKind::dyn_two, phi, {GateSegment{f, 4.0 * two_qubit_tm1(jm)}},
                        u_two(phi)};
}

GateSequence make_sequence(GateKind kind, double phi, double field_scale) {
    switch (kind) {
    case GateKind::aa_single: return aa_single(phi, field_scale);
    case GateKind::dyn_single: return dyn_single(phi, field_scale);
    case GateKind::aa_two: return aa_two(phi, field_scale);
    case GateKind::dyn_two: return dyn_two(phi, field_scale);
    }
    throw InvalidInput("make_sequence: unknown gate kind");
}

ComplexMatrix cnot_x_basis() {
    ComplexMatrix perm = ComplexMatrix::Zero(4, 4);
    perm(0, 0) = 1.0;
    perm(1, 1) = 1.0;
    perm(2, 3) = 1.0;
    perm(3, 2) = 1.0;
    const ComplexMatrix x = x_product_basis();
    return x * perm * x.adjoint();
}

ComplexMatrix cnot_composition(double jm) {
    const ComplexMatrix sz2 = qmath::on_qubit(qmath::sigma_z(), 1, 2);
    const ComplexMatrix sx2 = qmath::on_qubit(qmath::sigma_x(), 1, 2);
    const ComplexMatrix sx1 = qmath::on_qubit(qmath::sigma_x(), 0, 2);
    const ComplexMatrix hadamard_like = rotation(kPi / (2.0 * std::sqrt(2.0)), sz2 - sx2);
    const ComplexMatrix u = aa_two(kPi / 4.0, jm).ideal_propagator();
    return hadamard_like * rotation(kPi / 4.0, sx1) * rotation(kPi / 4.0, sx2) * u *
           rotation(kPi / 2.0, sx1) * hadamard_like;
}

CompiledSequence::CompiledSequence(const GateSequence& seq, std::span<const CouplingSpec> couplings,
                                   int n_time_samples, double t_end)
    : seq_(seq) {
    if (seq.segments.empty()) {
        throw InvalidInput("CompiledSequence: empty gate sequence");
    }
    for (const auto& s : seq.segments) {
        if (!(s.duration > 0.0)) throw InvalidInput("CompiledSequence: segment duration must be > 0");
    }
    if (n_time_samples < 2) {
        throw InvalidInput("CompiledSequence: need at least two time samples");
    }
    const double total = seq.total_duration();
    if (t_end < 0.0) t_end = total;
    if (t_end < total) {
        throw InvalidInput("CompiledSequence: t_end shorter than the gate sequence");
    }

    std::vector<double> bounds = seq.boundaries();
    bounds.back() = t_end;  // the last segment is held up to t_end

    std::vector<double> grid;
    for (int k = 0; k < n_time_samples; ++k) {
        grid.push_back(t_end * static_cast<double>(k) / static_cast<double>(n_time_samples - 1));
    }
    std::vector<double> marks = seq.boundaries();
    marks.push_back(t_end);
    grid.insert(grid.end(), marks.begin(), marks.end());
    std::sort(grid.begin(), grid.end());
    const double merge_tol = 1e-12 * std::max(1.0, t_end);
    for (double t : grid) {
        if (times_.empty() || t - times_.back() > merge_tol) times_.push_back(t);
    }
    // Snap merged points onto exact boundaries.
    for (double& t : times_) {
        for (double b : marks) {
            if (std::abs(t - b) <= merge_tol) t = b;
        }
    }

    const Eigen::Index d = seq.dim();
    std::vector<ComplexMatrix> generators;
    std::vector<ComplexMatrix> hamiltonians;
    for (const auto& s : seq.segments) {
        hamiltonians.push_back(s.hamiltonian());
        generators.push_back(build_generator(hamiltonians.back(), couplings).computational());
    }

    ComplexMatrix superop_start = qmath::identity(d * d);
    ComplexMatrix unitary_start = qmath::identity(d);
    std::size_t seg = 0;
    for (double t : times_) {
        while (seg + 1 < seq.segments.size() && t > bounds[seg + 1]) {
            const double len = bounds[seg + 1] - bounds[seg];
            superop_start = qmath::expm(generators[seg] * len) * superop_start;
            unitary_start = qmath::expm(-I_UNIT * hamiltonians[seg] * len) * unitary_start;
            ++seg;
        }
        const double dt = t - bounds[seg];
        sample_superops_.push_back(qmath::expm(generators[seg] * dt) * superop_start);
        sample_unitaries_.push_back(qmath::expm(-I_UNIT * hamiltonians[seg] * dt) * unitary_start);
    }
}

ComplexMatrix CompiledSequence::final_state(const ComplexMatrix& rho0) const {
    validate_density_matrix(rho0, seq_.dim());
    return apply_superop(superoperator(), rho0);
}

Trajectory CompiledSequence::trajectory(const ComplexMatrix& rho0) const {
    validate_density_matrix(rho0, seq_.dim());
    const StateVector v0 = qmath::vectorize(rho0);
    Trajectory traj;
    traj.times = times_;
    traj.states.reserve(times_.size());
    for (const auto& s : sample_superops_) traj.states.push_back(qmath::devectorize(s * v0));
    return traj;
}

Trajectory run_sequence(const GateSequence& seq, const ComplexMatrix& rho0,
                        std::span<const CouplingSpec> couplings, int n_time_samples) {
    return CompiledSequence(seq, couplings, n_time_samples).trajectory(rho0);
}

} // namespace geophase
