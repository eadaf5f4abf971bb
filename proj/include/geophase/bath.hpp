// bath.hpp: Ohmic harmonic-oscillator bath and its half-Fourier correlation function
//
// Units: ħ = k_B = 1. Frequencies, fields and kT are angular frequencies in
// GHz (rad/ns); times are in ns.
//
// The bath correlation function is
//
//   C(τ) = ∫₀^Ω dω J(ω) [coth(ω/2kT) cos ωτ − i sin ωτ],
//
// and Γ(B) = ∫₀^∞ dτ e^{2iBτ} C(τ) is its one-sided transform at frequency 2B.
// The argument B is therefore half of the Bohr frequency being probed.

#pragma once

#include <complex>
#include <map>
#include <shared_mutex>
#include <tuple>

namespace geophase {

struct BathSpec {
    double lambda{1e-3};  // dimensionless coupling strength
    double omega_c{500.0}; // cutoff Ω
    double kT{0.0};        // temperature in energy units

    /// Throws InvalidInput unless λ ≥ 0, Ω > 0 and kT ≥ 0 (all finite).
    void validate() const;

    auto key() const { return std::tie(lambda, omega_c, kT); }
    friend bool operator<(const BathSpec& a, const BathSpec& b) { return a.key() < b.key(); }
    friend bool operator==(const BathSpec& a, const BathSpec& b) { return a.key() == b.key(); }
};

/// Ohmic spectral density with Lorentzian roll-off, J(ω) = λω / (1 + ω²/Ω²).
/// Odd in ω.
double ohmic_j(double omega, const BathSpec& bath);

/// coth with the |x| > 30 saturation to ±1.
double coth_guarded(double x);

/// Re Γ(B) = (π/2) J(2B) (coth(B/kT) + 1), with the exact kT = 0 and B = 0 limits.
double gamma_real(double b, const BathSpec& bath);

/// Im Γ(B) = −P∫₀^Ω dω J(ω) (2B coth(ω/2kT) + ω) / (ω² − 4B²).
double gamma_imag(double b, const BathSpec& bath);

std::complex<double> gamma(double b, const BathSpec& bath);

struct RateSet {
    std::complex<double> gamma_plus;  // Γ(B)
    std::complex<double> gamma_minus; // Γ(−B)
    std::complex<double> mu_plus;     // Γ(B) + Γ*(B), real
    std::complex<double> mu_minus;    // Γ(B) − Γ*(B), imaginary
    std::complex<double> xi_plus;     // Γ(−B) + Γ*(B)
    std::complex<double> xi_minus;    // Γ(−B) − Γ*(B)
};

RateSet rate_set(double b, const BathSpec& bath);

/// Memo of Γ keyed on (B, bath). Safe for concurrent use.
class RateCache {
public:
    std::complex<double> gamma(double b, const BathSpec& bath);
    std::size_t size() const;
    void clear();

    /// Process-wide instance used by the generator builders.
    static RateCache& shared();

private:
    mutable std::shared_mutex mutex_;
    std::map<std::tuple<double, double, double, double>, std::complex<double>> values_;
};

} // namespace geophase
