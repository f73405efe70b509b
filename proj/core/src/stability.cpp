#include "fluidbound/stability.hpp"

#include <algorithm>
#include <cmath>

namespace fluidbound {
namespace {

// Relative coefficient tail below which a truncation is considered resolved
// by suggest_truncation; build_eigenmode re-checks the actual tail.
constexpr double kTailTarget = 1e-11;

double raw_continued_fraction(int p, double gamma, const EquilibriumParams& params,
                              int k, int depth, double tail) {
    double r = tail;
    for (int q = p + depth - 1; q >= p; --q) {
        r = -1.0 / (coeff_a(q * params.m, gamma, params, k) - r);
    }
    return r;
}

}  // namespace

EquilibriumParams::EquilibriumParams(int m_, double U0_) : m(m_), U0(U0_) {
    if (m < 2) {
        throw InvalidArgumentError("EquilibriumParams: m must be >= 2");
    }
    if (!(U0 > 0.0)) {
        throw InvalidArgumentError("EquilibriumParams: U0 must be positive");
    }
}

Complex EigenMode::coeff_c(int j) const {
    if (j % params.m != 0 || std::abs(j) > J) {
        return Complex(0.0, 0.0);
    }
    return c[static_cast<std::size_t>(j / params.m + J / params.m)];
}

Complex EigenMode::coeff_b(int j) const {
    if (j % params.m != 0 || std::abs(j) > J) {
        return Complex(0.0, 0.0);
    }
    return b[static_cast<std::size_t>(j / params.m + J / params.m)];
}

std::vector<int> EigenMode::support() const {
    std::vector<int> js;
    for (int j = -J; j <= J; j += params.m) {
        js.push_back(j);
    }
    return js;
}

double coeff_a(int j, double gamma, const EquilibriumParams& params, int k) {
    const double num = static_cast<double>(j) * j + static_cast<double>(k) * k;
    const double den = num - static_cast<double>(params.m) * params.m;
    if (den == 0.0) {
        throw InvalidArgumentError("coeff_a: vanishing denominator j^2+k^2-m^2");
    }
    return (2.0 * gamma / (k * params.U0)) * num / den;
}

double rho_infinity(double gamma, const EquilibriumParams& params, int k) {
    if (!(gamma > 0.0) || k < 1) {
        throw InvalidArgumentError("rho_infinity: need gamma > 0 and k >= 1");
    }
    const double g = gamma / (k * params.U0);
    return g - std::sqrt(1.0 + g * g);
}

double continued_fraction_rho(int p, double gamma, const EquilibriumParams& params,
                              int k, int depth, double tail) {
    if (p < 1) {
        throw InvalidArgumentError("continued_fraction_rho: p must be >= 1");
    }
    if (!(gamma > 0.0) || k < 1) {
        throw InvalidArgumentError("continued_fraction_rho: need gamma > 0 and k >= 1");
    }
    if (depth < 8) {
        throw InvalidArgumentError("continued_fraction_rho: depth must be >= 8");
    }
    const double full = raw_continued_fraction(p, gamma, params, k, depth, tail);
    const double half = raw_continued_fraction(p, gamma, params, k, depth / 2, tail);
    const double diff = std::abs(full - half);
    if (diff > 1e-12) {
        // Tolerate a still-shrinking tail, but a non-decreasing difference
        // between successive depths means the fraction is not converging.
        const double quarter =
            raw_continued_fraction(p, gamma, params, k, depth / 4, tail);
        if (diff >= std::abs(half - quarter)) {
            throw NumericalError("continued_fraction_rho: depth self-check failed");
        }
    }
    if (!(full > -1.0 && full < 0.0)) {
        throw NumericalError("continued_fraction_rho: value left (-1, 0)");
    }
    return full;
}

double continued_fraction_rho(int p, double gamma, const EquilibriumParams& params,
                              int k, int depth) {
    return continued_fraction_rho(p, gamma, params, k, depth,
                                  rho_infinity(gamma, params, k));
}

GrowthBounds growth_bounds(const EquilibriumParams& params, int k) {
    if (k < 1 || k > params.m - 1) {
        throw InvalidArgumentError("growth_bounds: need 1 <= k <= m-1");
    }
    const double m2 = static_cast<double>(params.m) * params.m;
    const double k2 = static_cast<double>(k) * k;
    GrowthBounds out;
    out.k_cutoff = params.m * std::sqrt((std::sqrt(177.0) - 9.0) / 6.0);
    out.gamma_u = params.U0 * k * std::sqrt(0.5 * (m2 - k2) / (m2 + k2));
    const double rad = 8.0 * m2 * m2 - 9.0 * m2 * k2 - 3.0 * k2 * k2;
    out.gamma_l = rad > 0.0
                      ? params.U0 * k *
                            std::sqrt(0.5 * rad / ((m2 + k2) * (8.0 * m2 + 2.0 * k2)))
                      : 0.0;
    return out;
}

double solve_growth_rate(const EquilibriumParams& params, int k, double tol) {
    const GrowthBounds gb = growth_bounds(params, k);
    if (!(k < gb.k_cutoff)) {
        throw InvalidArgumentError("solve_growth_rate: k at or beyond the cutoff");
    }
    const double m2 = static_cast<double>(params.m) * params.m;
    const double k2 = static_cast<double>(k) * k;
    const auto dispersion = [&](double gamma) {
        return -continued_fraction_rho(1, gamma, params, k) -
               (gamma / params.U0) * k / (m2 - k2);
    };
    double lo = gb.gamma_l * (1.0 - 1e-6);
    double hi = gb.gamma_u * (1.0 + 1e-6);
    if (!(dispersion(lo) > 0.0) || !(dispersion(hi) < 0.0)) {
        throw NumericalError(
            "solve_growth_rate: dispersion shows no sign change on the closed-form "
            "bracket");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) {
            break;
        }
        if (dispersion(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double root = 0.5 * (lo + hi);
    if (std::abs(dispersion(root)) > tol) {
        throw NumericalError("solve_growth_rate: residual above tolerance");
    }
    return root;
}

int suggest_truncation(const EquilibriumParams& params, int k) {
    const double gamma = solve_growth_rate(params, k);
    const double r = std::abs(rho_infinity(gamma, params, k));
    const double m2 = static_cast<double>(params.m) * params.m;
    const double k2 = static_cast<double>(k) * k;
    for (int p = 16; p <= 10000; ++p) {
        const double jj = static_cast<double>(p) * params.m;
        const double rel = std::pow(r, p) * (m2 - k2) / (jj * jj + k2 - m2);
        if (rel <= kTailTarget) {
            return p * params.m;
        }
    }
    throw NumericalError("suggest_truncation: tail does not reach the target");
}

EigenMode build_eigenmode(const EquilibriumParams& params, int k, int J,
                          double aleph) {
    const GrowthBounds gb = growth_bounds(params, k);
    if (!(k < gb.k_cutoff)) {
        throw InvalidArgumentError("build_eigenmode: k at or beyond the cutoff");
    }
    if (J % params.m != 0 || J < 16 * params.m) {
        throw InvalidArgumentError(
            "build_eigenmode: J must be a multiple of m with J >= 16m");
    }
    if (!(aleph > 0.0)) {
        throw InvalidArgumentError("build_eigenmode: aleph must be positive");
    }

    EigenMode mode;
    mode.params = params;
    mode.k = k;
    mode.bounds = gb;
    mode.J = J;
    mode.aleph = aleph;
    mode.gamma = solve_growth_rate(params, k);

    const int P = J / params.m;
    const double k2 = static_cast<double>(k) * k;
    const double m2 = static_cast<double>(params.m) * params.m;

    // Coefficient ratios on the j > 0 side: the deepest one from the
    // continued fraction, the rest by the backward recursion.
    std::vector<double> rho(P + 1, 0.0);
    rho[P] = continued_fraction_rho(P, mode.gamma, params, k);
    for (int p = P - 1; p >= 1; --p) {
        rho[p] = -1.0 / (coeff_a(p * params.m, mode.gamma, params, k) - rho[p + 1]);
    }
    // Independent ratios on the j < 0 side (d_{-pm} = rt_{p-1} d_{-(p-1)m}),
    // seeded with the deepest continued fraction of the mirrored branch.
    std::vector<double> rt(P, 0.0);
    rt[P - 1] = -continued_fraction_rho(P, mode.gamma, params, k);
    for (int p = P - 2; p >= 0; --p) {
        rt[p] = 1.0 / (coeff_a((p + 1) * params.m, mode.gamma, params, k) + rt[p + 1]);
    }

    // d_j on slots p + P for p in [-P, P]; d_0 = 1.
    std::vector<double> d(2 * P + 1, 0.0);
    d[P] = 1.0;
    for (int p = 1; p <= P; ++p) {
        d[P + p] = d[P + p - 1] * rho[p];
        d[P - p] = d[P - p + 1] * rt[p - 1];
    }

    mode.c.resize(2 * P + 1);
    double max_abs_c = 0.0;
    for (int s = 0; s <= 2 * P; ++s) {
        const double j = static_cast<double>(s - P) * params.m;
        mode.c[s] = Complex(d[s] / (j * j + k2 - m2), 0.0);
        max_abs_c = std::max(max_abs_c, std::abs(mode.c[s]));
    }
    const double tail =
        std::max(std::abs(mode.c.front()), std::abs(mode.c.back())) / max_abs_c;
    if (tail > 1e-10) {
        throw InvalidArgumentError(
            "build_eigenmode: truncation too small, coefficient tail above 1e-10");
    }

    mode.b.resize(2 * P + 1);
    for (int s = 0; s <= 2 * P; ++s) {
        const double j = static_cast<double>(s - P) * params.m;
        const Complex c_lo = s > 0 ? mode.c[s - 1] : Complex(0.0, 0.0);
        const Complex c_hi = s < 2 * P ? mode.c[s + 1] : Complex(0.0, 0.0);
        mode.b[s] = -params.U0 * (params.m * k2 / (j * j + k2)) * (c_lo + c_hi);
    }

    // Delta normalization: the synthesized real velocity field has
    // ||.||^2 = (2pi)^2 (1/2) sum_j (j^2+k^2) |Delta c_j|^2.
    double s2 = 0.0;
    for (int s = 0; s <= 2 * P; ++s) {
        const double j = static_cast<double>(s - P) * params.m;
        s2 += (j * j + k2) * std::norm(mode.c[s]);
    }
    const double delta = aleph / (2.0 * kPi * std::sqrt(0.5 * s2));
    double b2 = 0.0;
    for (int s = 0; s <= 2 * P; ++s) {
        mode.c[s] *= delta;
        mode.b[s] *= delta;
        b2 += std::norm(mode.b[s]);
    }
    mode.q = 2.0 * kPi * std::sqrt(0.5 * b2) / aleph;
    return mode;
}

std::pair<VectorField2D, SpectralField2D> synthesize_perturbation(
    const EigenMode& mode, Grid2D grid, double t, double eps) {
    const int needed = 4 * std::max(mode.k, mode.J);
    if (grid.nx < needed || grid.ny < needed) {
        throw InvalidArgumentError(
            "synthesize_perturbation: grid must satisfy nx, ny >= 4 max(k, J)");
    }
    VectorField2D velocity(grid);
    SpectralField2D pressure(grid);
    if (eps == 0.0) {
        return {std::move(velocity), std::move(pressure)};
    }
    const double growth = std::exp(mode.gamma * t);
    if (!std::isfinite(growth)) {
        throw NumericalError("synthesize_perturbation: e^{gamma t} overflowed");
    }

    // Re(e^{i k x} chi) contributes half of each coefficient at jx = k > 0;
    // the Hermitian mirror is implicit in the r2c storage.
    const int P = mode.J / mode.params.m;
    for (int s = 0; s <= 2 * P; ++s) {
        const int j = (s - P) * mode.params.m;
        const Complex half_c = 0.5 * mode.c[s] * growth;
        velocity.x.set_coeff(mode.k, j, Complex(0.0, -static_cast<double>(j)) * half_c);
        velocity.y.set_coeff(mode.k, j, Complex(0.0, static_cast<double>(mode.k)) * half_c);
        pressure.set_coeff(mode.k, j, 0.5 * mode.b[s] * growth);
    }

    // Rescale on the measured norm so the velocity amplitude is exactly
    // eps * aleph * e^{gamma t}.
    const double measured = velocity.l2_norm();
    if (measured > 0.0) {
        const double scale = eps * mode.aleph * growth / measured;
        velocity *= scale;
        pressure *= scale;
    }
    return {std::move(velocity), std::move(pressure)};
}

}  // namespace fluidbound
