#include "fluidbound/kdv.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "fft_engine.hpp"

namespace fluidbound {
namespace {

// RK4 absolute stability reach along the imaginary axis; the advective
// spectrum of the dealiased nonlinear term must stay inside it.
constexpr double kRk4ImagLimit = 2.8;

double sech2(double z) {
    // sech^2 underflows long before cosh overflows; cut off explicitly.
    if (std::abs(z) > 350.0) {
        return 0.0;
    }
    const double s = 1.0 / std::cosh(z);
    return s * s;
}

// Fixed working set for one (n, length, dt) combination: integrating
// factors at half and full step, dealiased physical wavenumbers.
struct KdvSolver {
    int n;
    double length;
    double dt;
    std::vector<double> k;        // physical wavenumber per r2c slot
    std::vector<double> mask;     // 2/3-rule mask per slot
    std::vector<Complex> e_half;  // exp(i k^3 dt / 2)
    std::vector<Complex> e_full;
    // Scratch arrays reused across steps.
    std::vector<Complex> v, a, b, c, d, tmp;
    std::vector<double> phys;

    KdvSolver(int n_, double length_, double dt_)
        : n(n_), length(length_), dt(dt_) {
        const int slots = n / 2 + 1;
        k.resize(slots);
        mask.resize(slots);
        e_half.resize(slots);
        e_full.resize(slots);
        for (int j = 0; j < slots; ++j) {
            k[j] = 2.0 * kPi * j / length;
            mask[j] = 3 * j <= n ? 1.0 : 0.0;
            const double phase = k[j] * k[j] * k[j] * dt / 2.0;
            e_half[j] = std::polar(1.0, phase);
            e_full[j] = e_half[j] * e_half[j];
        }
        v.resize(slots);
        a.resize(slots);
        b.resize(slots);
        c.resize(slots);
        d.resize(slots);
        tmp.resize(slots);
        phys.resize(n);
    }

    // N(v) = 3 i k (phi^2)^ with the 2/3-rule applied to input and output.
    void nonlinear(const std::vector<Complex>& in, std::vector<Complex>& out) {
        const int slots = n / 2 + 1;
        for (int j = 0; j < slots; ++j) {
            tmp[j] = in[j] * mask[j];
        }
        detail::fft1_inverse(n, tmp.data(), phys.data());
        for (int i = 0; i < n; ++i) {
            phys[i] *= phys[i];
        }
        detail::fft1_forward(n, phys.data(), out.data());
        for (int j = 0; j < slots; ++j) {
            out[j] *= Complex(0.0, 3.0 * k[j]) * mask[j];
        }
    }

    void step(std::vector<double>& phi) {
        const int slots = n / 2 + 1;
        detail::fft1_forward(n, phi.data(), v.data());

        double max_abs = 0.0;
        for (double p : phi) {
            max_abs = std::max(max_abs, std::abs(p));
        }
        const double k_max = k[slots - 1];
        if (dt * 6.0 * max_abs * k_max > kRk4ImagLimit) {
            throw NumericalError("kdv_step: advective stability limit exceeded");
        }

        nonlinear(v, a);
        for (int j = 0; j < slots; ++j) {
            tmp[j] = e_half[j] * (v[j] + 0.5 * dt * a[j]);
        }
        nonlinear(tmp, b);
        for (int j = 0; j < slots; ++j) {
            tmp[j] = e_half[j] * v[j] + 0.5 * dt * b[j];
        }
        nonlinear(tmp, c);
        for (int j = 0; j < slots; ++j) {
            tmp[j] = e_full[j] * v[j] + dt * e_half[j] * c[j];
        }
        nonlinear(tmp, d);
        for (int j = 0; j < slots; ++j) {
            v[j] = e_full[j] * v[j] +
                   dt / 6.0 *
                       (e_full[j] * a[j] + 2.0 * e_half[j] * (b[j] + c[j]) + d[j]);
        }
        detail::fft1_inverse(n, v.data(), phi.data());

        for (double p : phi) {
            if (!std::isfinite(p)) {
                throw NumericalError("kdv_step: solution is not finite");
            }
        }
    }
};

KdvSolver& solver_for(const Grid1D& grid, double dt) {
    static std::mutex mutex;
    static std::map<std::tuple<int, double, double>, std::unique_ptr<KdvSolver>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_tuple(grid.n, grid.length(), dt);
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, std::make_unique<KdvSolver>(grid.n, grid.length(), dt))
                 .first;
    }
    return *it->second;
}

// Integrand of I(delta); even split of the c = 1 and c = 1 + delta tails
// around their +-1 offsets.
double overlap_integrand(double x, double delta) {
    const double root = std::sqrt(1.0 + delta);
    return (3.0 * std::pow(1.0 + delta, 0.25) / 8.0) * sech2((x + 1.0) / 2.0) *
           sech2(root * (x - 1.0) / 2.0);
}

double adaptive_simpson(double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth, double delta) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = overlap_integrand(lm, delta);
    const double frm = overlap_integrand(rm, delta);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0) {
        throw NumericalError("overlap_integral_I: adaptive quadrature did not converge");
    }
    if (std::abs(left + right - whole) <= 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_simpson(a, m, fa, flm, fm, left, tol / 2.0, depth - 1, delta) +
           adaptive_simpson(m, b, fm, frm, fb, right, tol / 2.0, depth - 1, delta);
}

}  // namespace

SolitonParams::SolitonParams(double c_, double a_) : c(c_), a(a_) {
    if (!(c > 0.0)) {
        throw InvalidArgumentError("SolitonParams: velocity c must be positive");
    }
}

double soliton_eval(const SolitonParams& params, double x, double t) {
    const double arg = 0.5 * std::sqrt(params.c) * (x - params.c * t + params.a);
    return -(params.c / 2.0) * sech2(arg);
}

std::vector<double> soliton_samples(const SolitonParams& params,
                                    const Grid1D& window, double t) {
    std::vector<double> out(window.n);
    const double length = window.length();
    const double center = params.c * t - params.a;
    for (int i = 0; i < window.n; ++i) {
        // Offset from the soliton center folded into [-L/2, L/2).
        double off = window.node(i) - center;
        off -= length * std::floor(off / length + 0.5);
        const double arg = 0.5 * std::sqrt(params.c) * off;
        out[i] = -(params.c / 2.0) * sech2(arg);
    }
    return out;
}

double soliton_pair_distance(double delta, double t, const Grid1D& window) {
    if (delta < 0.0) {
        throw InvalidArgumentError("soliton_pair_distance: delta must be >= 0");
    }
    const SolitonParams pa(1.0, 0.0);
    const SolitonParams pb(1.0 + delta, 0.0);
    // Plain line evaluation here: the window has to contain the pair, so the
    // boundary values bound the truncated tails.
    for (const SolitonParams& p : {pa, pb}) {
        const double lo = std::abs(soliton_eval(p, window.x_min, t));
        const double hi = std::abs(soliton_eval(p, window.x_max, t));
        if (lo > 1e-12 || hi > 1e-12) {
            throw InvalidArgumentError(
                "soliton_pair_distance: window does not contain the soliton tails");
        }
    }
    double sum_minus = 0.0;
    double sum_plus = 0.0;
    for (int i = 0; i < window.n; ++i) {
        const double x = window.node(i);
        const double va = soliton_eval(pa, x, t);
        const double vb = soliton_eval(pb, x, t);
        sum_minus += (va - vb) * (va - vb);
        sum_plus += (va + vb) * (va + vb);
    }
    return std::sqrt(std::min(sum_minus, sum_plus) * window.dx());
}

KdvState kdv_step(const KdvState& state, double dt) {
    if (!(dt > 0.0)) {
        throw InvalidArgumentError("kdv_step: dt must be positive");
    }
    if (state.phi.size() != static_cast<std::size_t>(state.grid.n)) {
        throw InvalidArgumentError("kdv_step: sample count does not match grid");
    }
    KdvState next = state;
    solver_for(state.grid, dt).step(next.phi);
    next.t = state.t + dt;
    return next;
}

KdvState kdv_evolve(const KdvState& state, double dt, long n_steps,
                    int sample_every,
                    const std::function<void(const KdvState&)>& on_sample) {
    if (n_steps < 0) {
        throw InvalidArgumentError("kdv_evolve: n_steps must be >= 0");
    }
    KdvState current = state;
    if (sample_every > 0 && on_sample) {
        on_sample(current);
    }
    KdvSolver& solver = solver_for(state.grid, dt);
    for (long step = 1; step <= n_steps; ++step) {
        solver.step(current.phi);
        current.t = state.t + static_cast<double>(step) * dt;
        if (sample_every > 0 && on_sample && step % sample_every == 0) {
            on_sample(current);
        }
    }
    return current;
}

double overlap_integral_I(double delta) {
    if (delta < 0.0 || delta >= 0.5) {
        throw InvalidArgumentError("overlap_integral_I: delta must lie in [0, 0.5)");
    }
    // Both sech^2 factors are below 1e-25 outside [-60, 62].
    const double a = -60.0;
    const double b = 62.0;
    const double m = 0.5 * (a + b);
    const double fa = overlap_integrand(a, delta);
    const double fm = overlap_integrand(m, delta);
    const double fb = overlap_integrand(b, delta);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(a, b, fa, fm, fb, whole, 1e-12, 60, delta);
}

double kdv_copy_lower_bound(double T, double delta_map) {
    if (!(T > 0.0)) {
        throw InvalidArgumentError("kdv_copy_lower_bound: T must be positive");
    }
    if (!(delta_map > 0.0)) {
        throw InvalidArgumentError(
            "kdv_copy_lower_bound: delta_map must be positive (delta = 0 gives an "
            "identical pair and no bound)");
    }
    const double delta = delta_map / T;
    // At t = 0 both solitons sit at the origin; at t = T they sit at T and
    // (1 + delta) T. Pad by 45 units, where sech^2 tails are ~1e-19.
    const double pad = 45.0;
    const int n0 = 4096;
    const Grid1D w0(-pad, pad, n0);
    const double d0 = soliton_pair_distance(delta, 0.0, w0);
    const double lo = T - pad;
    const double hi = (1.0 + delta) * T + pad;
    const int n1 = std::max(
        n0, static_cast<int>(std::ceil((hi - lo) / (2.0 * pad) * n0)));
    const Grid1D w1(lo, hi, n1);
    const double dT = soliton_pair_distance(delta, T, w1);
    if (d0 == 0.0) {
        throw NumericalError("kdv_copy_lower_bound: degenerate initial distance");
    }
    const double ratio = dT / d0;
    return ratio * ratio;
}

}  // namespace fluidbound
