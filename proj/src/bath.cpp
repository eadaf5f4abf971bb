// bath.cpp: Ohmic spectral density and the Γ(B) rate function

#include "geophase/bath.hpp"

#include "geophase/qmath.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace geophase {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuadTol = 1e-13;
constexpr unsigned kQuadDepth = 18;

template <class F>
double integrate(F&& f, double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    double err = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, lo, hi, kQuadDepth, kQuadTol, &err);
}

// coth(ω/2kT), with the zero-temperature branch taken exactly.
double thermal_factor(double omega, double kT) {
    if (kT == 0.0) return omega > 0.0 ? 1.0 : (omega < 0.0 ? -1.0 : 0.0);
    return coth_guarded(omega / (2.0 * kT));
}

} // namespace

void BathSpec::validate() const {
    if (!std::isfinite(lambda) || lambda < 0.0) {
        throw InvalidInput("BathSpec: lambda must be finite and >= 0");
    }
    if (!std::isfinite(omega_c) || omega_c <= 0.0) {
        throw InvalidInput("BathSpec: omega_c must be finite and > 0");
    }
    if (!std::isfinite(kT) || kT < 0.0) {
        throw InvalidInput("BathSpec: kT must be finite and >= 0");
    }
}

double ohmic_j(double omega, const BathSpec& bath) {
    const double r = omega / bath.omega_c;
    return bath.lambda * omega / (1.0 + r * r);
}

double coth_guarded(double x) {
    if (x > 30.0) return 1.0;
    if (x < -30.0) return -1.0;
    return 1.0 / std::tanh(x);
}

double gamma_real(double b, const BathSpec& bath) {
    if (bath.lambda == 0.0) return 0.0;
    const double j2b = ohmic_j(2.0 * b, bath);
    if (bath.kT == 0.0) {
        return b > 0.0 ? kPi * j2b : 0.0;
    }
    const double x = b / bath.kT;
    double j_coth = 0.0;
    if (std::abs(x) < 1e-6) {
        // J(2B) coth(B/kT) → 2λkT (1 + x²/3) / (1 + 4B²/Ω²)
        const double r = 2.0 * b / bath.omega_c;
        j_coth = 2.0 * bath.lambda * bath.kT * (1.0 + x * x / 3.0) / (1.0 + r * r);
    } else {
        j_coth = j2b * coth_guarded(x);
    }
    return 0.5 * kPi * (j_coth + j2b);
}

double gamma_imag(double b, const BathSpec& bath) {
    if (bath.lambda == 0.0) return 0.0;
    const double omega_c = bath.omega_c;
    if (b == 0.0) {
        // The integrand reduces to J(ω)/ω = λ / (1 + ω²/Ω²).
        return -bath.lambda * omega_c * kPi / 4.0;
    }

    const double a = 2.0 * b;
    const double s = std::abs(a);
    // J(ω)(a coth(ω/2kT) + ω) / (ω + s); finite as ω → 0 for every kT.
    auto numerator = [&](double w) {
        return ohmic_j(w, bath) * (a * thermal_factor(w, bath.kT) + w) / (w + s);
    };
    auto full = [&](double w) { return numerator(w) / (w - s); };

    if (s >= omega_c) {
        return -integrate(full, 0.0, omega_c);
    }

    const double delta = 0.5 * std::min({std::abs(b), omega_c - s, 0.1 * omega_c});
    // Antisymmetrized window: P∫_{s-δ}^{s+δ} g(ω)/(ω-s) dω = ∫₀^δ [g(s+u) - g(s-u)]/u du.
    auto window = [&](double u) { return (numerator(s + u) - numerator(s - u)) / u; };

    const double pv = integrate(full, 0.0, s - delta) + integrate(window, 0.0, delta) +
                      integrate(full, s + delta, omega_c);
    return -pv;
}

std::complex<double> gamma(double b, const BathSpec& bath) {
    if (!std::isfinite(b)) {
        throw InvalidInput("gamma: B must be finite");
    }
    bath.validate();
    return {gamma_real(b, bath), gamma_imag(b, bath)};
}

RateSet rate_set(double b, const BathSpec& bath) {
    const auto gp = gamma(b, bath);
    const auto gm = gamma(-b, bath);
    RateSet r;
    r.gamma_plus = gp;
    r.gamma_minus = gm;
    r.mu_plus = gp + std::conj(gp);
    r.mu_minus = gp - std::conj(gp);
    r.xi_plus = gm + std::conj(gp);
    r.xi_minus = gm - std::conj(gp);
    return r;
}

std::complex<double> RateCache::gamma(double b, const BathSpec& bath) {
    const auto key = std::make_tuple(b, bath.lambda, bath.omega_c, bath.kT);
    {
        std::shared_lock lock(mutex_);
        if (auto it = values_.find(key); it != values_.end()) return it->second;
    }
    const auto value = geophase::gamma(b, bath);
    std::unique_lock lock(mutex_);
    values_.emplace(key, value);
    return value;
}

std::size_t RateCache::size() const {
    std::shared_lock lock(mutex_);
    return values_.size();
}

void RateCache::clear() {
    std::unique_lock lock(mutex_);
    values_.clear();
}

RateCache& RateCache::shared() {
    static RateCache cache;
    return cache;
}

} // namespace geophase
