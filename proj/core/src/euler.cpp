#include "fluidbound/euler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "fft_engine.hpp"

namespace fluidbound {
namespace {

int next_pow2(int n) {
    int p = 1;
    while (p < n) {
        p *= 2;
    }
    return p;
}

// Per-slot wavenumber tables for a grid, plus the 2/3-rule mask. The Nyquist
// column and row are inside the masked band for every grid size, so they
// never carry data through the solvers.
struct SpectralTables {
    Grid2D grid;
    int cutoff = 0;
    double k_max = 0.0;
    std::vector<double> jx;      // per slot
    std::vector<double> jy;      // per slot
    std::vector<double> k2inv;   // per slot, 0 at the mean mode
    std::vector<double> mask;    // per slot

    explicit SpectralTables(Grid2D g) : grid(g) {
        cutoff = std::min(g.nx, g.ny) / 3;
        k_max = std::max(g.nx, g.ny) / 2.0;
        const int cols = g.spectral_cols();
        const std::size_t slots = g.spectral_size();
        jx.resize(slots);
        jy.resize(slots);
        k2inv.resize(slots);
        mask.resize(slots);
        for (int row = 0; row < g.ny; ++row) {
            const int fy = g.row_freq(row);
            for (int col = 0; col < cols; ++col) {
                const std::size_t s = static_cast<std::size_t>(row) * cols + col;
                jx[s] = col;
                jy[s] = fy;
                const double k2 = static_cast<double>(col) * col +
                                  static_cast<double>(fy) * fy;
                k2inv[s] = k2 > 0.0 ? 1.0 / k2 : 0.0;
                mask[s] = (col <= cutoff && std::abs(fy) <= cutoff) ? 1.0 : 0.0;
            }
        }
    }
};

using CVec = std::vector<Complex>;
using RVec = std::vector<double>;

void check_finite(const CVec& v, const char* what) {
    for (const Complex& z : v) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw NumericalError(std::string(what) + ": solution is not finite");
        }
    }
}

// Scratch space and the advection right-hand side for the nonlinear
// vorticity solver. One instance per grid, locked while stepping.
struct NonlinearWorkspace {
    SpectralTables tab;
    CVec omm, uxh, uyh, fxh, fyh;
    CVec k1, k2, k3, k4, stage;
    RVec ux, uy, om;
    std::mutex mutex;

    explicit NonlinearWorkspace(Grid2D g) : tab(g) {
        const std::size_t s = g.spectral_size();
        const std::size_t r = g.physical_size();
        for (CVec* v : {&omm, &uxh, &uyh, &fxh, &fyh, &k1, &k2, &k3, &k4, &stage}) {
            v->assign(s, Complex(0.0, 0.0));
        }
        for (RVec* v : {&ux, &uy, &om}) {
            v->assign(r, 0.0);
        }
    }

    // out = -div(u om) with the 2/3 rule on inputs and products. When
    // max_speed is non-null it receives max |u| over the nodes, which the
    // caller uses for the CFL check.
    void rhs(const CVec& omh, std::array<double, 2> mean, CVec& out,
             double* max_speed) {
        const std::size_t slots = omh.size();
        for (std::size_t s = 0; s < slots; ++s) {
            const Complex w = omh[s] * tab.mask[s];
            omm[s] = w;
            const Complex scaled = w * tab.k2inv[s];
            uxh[s] = Complex(0.0, 1.0) * tab.jy[s] * scaled;
            uyh[s] = Complex(0.0, -1.0) * tab.jx[s] * scaled;
        }
        detail::fft2_inverse(tab.grid, uxh.data(), ux.data());
        detail::fft2_inverse(tab.grid, uyh.data(), uy.data());
        detail::fft2_inverse(tab.grid, omm.data(), om.data());
        const std::size_t nodes = ux.size();
        double vmax2 = 0.0;
        for (std::size_t i = 0; i < nodes; ++i) {
            const double vx = ux[i] + mean[0];
            const double vy = uy[i] + mean[1];
            if (max_speed != nullptr) {
                vmax2 = std::max(vmax2, vx * vx + vy * vy);
            }
            const double w = om[i];
            ux[i] = vx * w;
            uy[i] = vy * w;
        }
        if (max_speed != nullptr) {
            *max_speed = std::sqrt(vmax2);
        }
        detail::fft2_forward(tab.grid, ux.data(), fxh.data());
        detail::fft2_forward(tab.grid, uy.data(), fyh.data());
        for (std::size_t s = 0; s < slots; ++s) {
            out[s] = Complex(0.0, -1.0) * tab.mask[s] *
                     (tab.jx[s] * fxh[s] + tab.jy[s] * fyh[s]);
        }
    }

    void step(CVec& omh, std::array<double, 2> mean, double dt) {
        double speed = 0.0;
        rhs(omh, mean, k1, &speed);
        if (dt * speed * tab.k_max > 0.5) {
            throw NumericalError("nonlinear_step: CFL bound dt max|u| n/2 <= 0.5 violated");
        }
        const std::size_t slots = omh.size();
        for (std::size_t s = 0; s < slots; ++s) {
            stage[s] = omh[s] + 0.5 * dt * k1[s];
        }
        rhs(stage, mean, k2, nullptr);
        for (std::size_t s = 0; s < slots; ++s) {
            stage[s] = omh[s] + 0.5 * dt * k2[s];
        }
        rhs(stage, mean, k3, nullptr);
        for (std::size_t s = 0; s < slots; ++s) {
            stage[s] = omh[s] + dt * k3[s];
        }
        rhs(stage, mean, k4, nullptr);
        for (std::size_t s = 0; s < slots; ++s) {
            omh[s] += dt / 6.0 * (k1[s] + 2.0 * (k2[s] + k3[s]) + k4[s]);
        }
        check_finite(omh, "nonlinear_step");
    }
};

// Scratch space for the linearization about u0 = (U0 sin(my), 0). The
// equilibrium profile and its derivative only depend on y, so they are
// stored once per row.
struct LinearWorkspace {
    SpectralTables tab;
    EquilibriumParams equil;
    RVec u0_row, du0_row;
    CVec k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y, sx, sy, txh, tyh;
    RVec dxwx, dxwy, wyp;
    std::mutex mutex;

    LinearWorkspace(Grid2D g, const EquilibriumParams& eq) : tab(g), equil(eq) {
        u0_row.resize(g.ny);
        du0_row.resize(g.ny);
        for (int row = 0; row < g.ny; ++row) {
            const double y = 2.0 * kPi * row / g.ny;
            u0_row[row] = eq.U0 * std::sin(eq.m * y);
            du0_row[row] = eq.U0 * eq.m * std::cos(eq.m * y);
        }
        const std::size_t s = g.spectral_size();
        const std::size_t r = g.physical_size();
        for (CVec* v : {&k1x, &k1y, &k2x, &k2y, &k3x, &k3y, &k4x, &k4y, &sx, &sy,
                        &txh, &tyh}) {
            v->assign(s, Complex(0.0, 0.0));
        }
        for (RVec* v : {&dxwx, &dxwy, &wyp}) {
            v->assign(r, 0.0);
        }
    }

    // (outx, outy) = Proj[-(u0.grad) w - (w.grad) u0]; when ptilde is
    // non-null it receives the pressure that closes the projection,
    // ptilde^ = -i (j.r^)/|j|^2 of the unprojected right-hand side.
    void rhs(const CVec& wxh, const CVec& wyh, CVec& outx, CVec& outy,
             CVec* ptilde) {
        const std::size_t slots = wxh.size();
        for (std::size_t s = 0; s < slots; ++s) {
            const Complex ix = Complex(0.0, tab.jx[s]);
            txh[s] = ix * wxh[s] * tab.mask[s];
            tyh[s] = ix * wyh[s] * tab.mask[s];
        }
        detail::fft2_inverse(tab.grid, txh.data(), dxwx.data());
        detail::fft2_inverse(tab.grid, tyh.data(), dxwy.data());
        for (std::size_t s = 0; s < slots; ++s) {
            txh[s] = wyh[s] * tab.mask[s];
        }
        detail::fft2_inverse(tab.grid, txh.data(), wyp.data());
        std::size_t i = 0;
        for (int row = 0; row < tab.grid.ny; ++row) {
            const double adv = u0_row[row];
            const double shear = du0_row[row];
            for (int col = 0; col < tab.grid.nx; ++col, ++i) {
                const double rx = -(adv * dxwx[i] + wyp[i] * shear);
                const double ry = -(adv * dxwy[i]);
                dxwx[i] = rx;
                dxwy[i] = ry;
            }
        }
        detail::fft2_forward(tab.grid, dxwx.data(), outx.data());
        detail::fft2_forward(tab.grid, dxwy.data(), outy.data());
        for (std::size_t s = 0; s < slots; ++s) {
            const Complex rx = outx[s] * tab.mask[s];
            const Complex ry = outy[s] * tab.mask[s];
            const Complex dvg = (tab.jx[s] * rx + tab.jy[s] * ry) * tab.k2inv[s];
            outx[s] = rx - tab.jx[s] * dvg;
            outy[s] = ry - tab.jy[s] * dvg;
            if (ptilde != nullptr) {
                (*ptilde)[s] = Complex(0.0, -1.0) * dvg;
            }
        }
    }

    void step(CVec& wxh, CVec& wyh, double dt, CVec* ptilde) {
        const std::size_t slots = wxh.size();
        rhs(wxh, wyh, k1x, k1y, nullptr);
        for (std::size_t s = 0; s < slots; ++s) {
            sx[s] = wxh[s] + 0.5 * dt * k1x[s];
            sy[s] = wyh[s] + 0.5 * dt * k1y[s];
        }
        rhs(sx, sy, k2x, k2y, nullptr);
        for (std::size_t s = 0; s < slots; ++s) {
            sx[s] = wxh[s] + 0.5 * dt * k2x[s];
            sy[s] = wyh[s] + 0.5 * dt * k2y[s];
        }
        rhs(sx, sy, k3x, k3y, nullptr);
        for (std::size_t s = 0; s < slots; ++s) {
            sx[s] = wxh[s] + dt * k3x[s];
            sy[s] = wyh[s] + dt * k3y[s];
        }
        rhs(sx, sy, k4x, k4y, nullptr);
        for (std::size_t s = 0; s < slots; ++s) {
            wxh[s] += dt / 6.0 * (k1x[s] + 2.0 * (k2x[s] + k3x[s]) + k4x[s]);
            wyh[s] += dt / 6.0 * (k1y[s] + 2.0 * (k2y[s] + k3y[s]) + k4y[s]);
        }
        check_finite(wxh, "linear_step");
        check_finite(wyh, "linear_step");
        if (ptilde != nullptr) {
            rhs(wxh, wyh, sx, sy, ptilde);
        }
    }
};

NonlinearWorkspace& nonlinear_workspace(Grid2D g) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<NonlinearWorkspace>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(g.nx, g.ny);
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, std::make_unique<NonlinearWorkspace>(g)).first;
    }
    return *it->second;
}

LinearWorkspace& linear_workspace(Grid2D g, const EquilibriumParams& eq) {
    static std::mutex mutex;
    static std::map<std::tuple<int, int, int, double>,
                    std::unique_ptr<LinearWorkspace>>
        cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_tuple(g.nx, g.ny, eq.m, eq.U0);
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, std::make_unique<LinearWorkspace>(g, eq)).first;
    }
    return *it->second;
}

// Spectral equilibrium velocity (U0 sin(my), 0) on the grid.
VectorField2D equilibrium_velocity(const EquilibriumParams& eq, Grid2D grid) {
    VectorField2D u0(grid);
    u0.x.set_coeff(0, eq.m, Complex(0.0, -0.5 * eq.U0));
    u0.x.set_coeff(0, -eq.m, Complex(0.0, 0.5 * eq.U0));
    return u0;
}

SpectralField2D equilibrium_vorticity(const EquilibriumParams& eq, Grid2D grid) {
    SpectralField2D om(grid);
    om.set_coeff(0, eq.m, Complex(-0.5 * eq.U0 * eq.m, 0.0));
    om.set_coeff(0, -eq.m, Complex(-0.5 * eq.U0 * eq.m, 0.0));
    return om;
}

}  // namespace

VectorField2D velocity_from_vorticity(const SpectralField2D& omega,
                                      std::array<double, 2> mean_flow) {
    const Grid2D& g = omega.grid();
    VectorField2D u(g);
    const int cols = g.spectral_cols();
    for (int row = 0; row < g.ny; ++row) {
        // Nyquist modes have no signed partner and are treated as
        // derivative-free, matching dx/dy and max_divergence.
        const double fy = row == g.ny / 2 ? 0.0 : g.row_freq(row);
        for (int col = 0; col < cols; ++col) {
            const double fx = col == g.nx / 2 ? 0.0 : col;
            const double k2 = fx * fx + fy * fy;
            if (k2 == 0.0) {
                continue;
            }
            const Complex scaled = omega.at(row, col) / k2;
            u.x.at(row, col) = Complex(0.0, fy) * scaled;
            u.y.at(row, col) = Complex(0.0, -fx) * scaled;
        }
    }
    u.x.at(0, 0) = Complex(mean_flow[0], 0.0);
    u.y.at(0, 0) = Complex(mean_flow[1], 0.0);
    return u;
}

SpectralField2D vorticity_of(const VectorField2D& u) {
    SpectralField2D om = u.y.dx();
    om -= u.x.dy();
    return om;
}

EulerState nonlinear_step(const EulerState& state, double dt) {
    if (!(dt > 0.0)) {
        throw InvalidArgumentError("nonlinear_step: dt must be positive");
    }
    NonlinearWorkspace& ws = nonlinear_workspace(state.grid);
    std::lock_guard<std::mutex> lock(ws.mutex);
    EulerState next = state;
    ws.step(next.omega.raw(), next.mean_flow, dt);
    next.t = state.t + dt;
    return next;
}

LinearState linear_step(const LinearState& state, const EquilibriumParams& equil,
                        double dt) {
    if (!(dt > 0.0)) {
        throw InvalidArgumentError("linear_step: dt must be positive");
    }
    LinearWorkspace& ws = linear_workspace(state.grid, equil);
    std::lock_guard<std::mutex> lock(ws.mutex);
    LinearState next = state;
    if (next.ptilde.raw().size() != state.grid.spectral_size()) {
        next.ptilde = SpectralField2D(state.grid);
    }
    ws.step(next.vtilde.x.raw(), next.vtilde.y.raw(), dt, &next.ptilde.raw());
    next.t = state.t + dt;
    return next;
}

SpectralField2D recover_pressure(const EulerState& state, double gauge) {
    const Grid2D& g = state.grid;
    SpectralField2D omm = state.omega;
    omm.truncate_above(std::min(g.nx, g.ny) / 3);
    VectorField2D u = velocity_from_vorticity(omm, state.mean_flow);
    std::vector<double> ux = u.x.to_samples();
    std::vector<double> uy = u.y.to_samples();
    const std::size_t nodes = ux.size();
    std::vector<double> t12(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        t12[i] = ux[i] * uy[i];
        ux[i] *= ux[i];
        uy[i] *= uy[i];
    }
    SpectralField2D t11h = SpectralField2D::from_samples(ux, g);
    SpectralField2D t12h = SpectralField2D::from_samples(t12, g);
    SpectralField2D t22h = SpectralField2D::from_samples(uy, g);
    const int cutoff = std::min(g.nx, g.ny) / 3;
    t11h.truncate_above(cutoff);
    t12h.truncate_above(cutoff);
    t22h.truncate_above(cutoff);

    // laplacian(P) = -d_i d_j (u_i u_j), spectrally jx^2 T11 + 2 jx jy T12
    // + jy^2 T22 on the right-hand side.
    SpectralField2D rhs(g);
    const int cols = g.spectral_cols();
    for (int row = 0; row < g.ny; ++row) {
        const double fy = row == g.ny / 2 ? 0.0 : g.row_freq(row);
        for (int col = 0; col < cols; ++col) {
            const double fx = col == g.nx / 2 ? 0.0 : col;
            rhs.at(row, col) = fx * fx * t11h.at(row, col) +
                               2.0 * fx * fy * t12h.at(row, col) +
                               fy * fy * t22h.at(row, col);
        }
    }
    return poisson_solve(rhs, gauge);
}

double direct_sum_overlap(const EulerState& state, const EquilibriumParams& equil,
                          double gauge) {
    const VectorField2D u = velocity_from_vorticity(state.omega, state.mean_flow);
    const SpectralField2D pressure = recover_pressure(state, gauge);
    const VectorField2D u0 = equilibrium_velocity(equil, state.grid);
    SpectralField2D p0(state.grid);
    p0.at(0, 0) = Complex(gauge, 0.0);

    const double dot = inner_product(u0, u) + inner_product(p0, pressure);
    const double na = std::hypot(u0.l2_norm(), p0.l2_norm());
    const double nb = std::hypot(u.l2_norm(), pressure.l2_norm());
    if (na == 0.0 || nb == 0.0) {
        throw InvalidArgumentError("direct_sum_overlap: zero-norm stack");
    }
    return dot / (na * nb);
}

std::vector<DiagnosticsRecord> run_separation_experiment(
    const EquilibriumParams& equil, const EigenMode& mode, double eps,
    double t_max, double dt, int sample_every, double gauge, int grid_n) {
    if (mode.params.m != equil.m || mode.params.U0 != equil.U0) {
        throw InvalidArgumentError(
            "run_separation_experiment: mode was built for different equilibrium "
            "parameters");
    }
    const double eps_cap = mode.q > 0.0 ? std::min(1.0, 1.0 / mode.q) : 1.0;
    if (!(eps > 0.0) || !(eps < eps_cap)) {
        throw InvalidArgumentError(
            "run_separation_experiment: eps must lie in (0, min(1, 1/q))");
    }
    if (!(dt > 0.0) || !(t_max > 0.0) || sample_every < 1) {
        throw InvalidArgumentError(
            "run_separation_experiment: need dt > 0, t_max > 0, sample_every >= 1");
    }
    const double t_window = std::log(1.0 / eps) / mode.bounds.gamma_u;
    if (t_max > t_window * (1.0 + 1e-12)) {
        throw InvalidArgumentError(
            "run_separation_experiment: t_max exceeds the overlap window "
            "log(1/eps)/gamma_u");
    }
    if (grid_n == 0) {
        grid_n = std::max(256, next_pow2(4 * std::max(mode.k, mode.J)));
    }
    const Grid2D grid(grid_n, grid_n);

    auto [vt, pt] = synthesize_perturbation(mode, grid, 0.0, 1.0);
    const SpectralField2D om_tilde = vorticity_of(vt);
    const double damp = std::sqrt(1.0 - eps * eps);

    SpectralField2D omega0 = equilibrium_vorticity(equil, grid);
    omega0 *= damp;
    {
        SpectralField2D scaled = om_tilde;
        scaled *= eps;
        omega0 += scaled;
    }
    EulerState state{grid, std::move(omega0), {0.0, 0.0}, 0.0};
    LinearState lin{grid, std::move(vt), std::move(pt), 0.0};

    const VectorField2D u0 = equilibrium_velocity(equil, grid);
    const double u0_norm = u0.l2_norm();

    NonlinearWorkspace& nws = nonlinear_workspace(grid);
    LinearWorkspace& lws = linear_workspace(grid, equil);
    std::lock_guard<std::mutex> nlock(nws.mutex);
    std::lock_guard<std::mutex> llock(lws.mutex);

    std::vector<DiagnosticsRecord> records;
    const auto sample = [&](double t) {
        DiagnosticsRecord rec;
        rec.t = t;
        const VectorField2D u = velocity_from_vorticity(state.omega, state.mean_flow);
        rec.energy = u.l2_norm();
        rec.enstrophy_l4 = lp_norm(state.omega, 4);
        rec.overlap_nonlinear = inner_product(u0, u) / (u0_norm * rec.energy);

        VectorField2D utilde = u0;
        utilde *= damp;
        VectorField2D scaled = lin.vtilde;
        scaled *= eps;
        utilde += scaled;
        rec.overlap_linear = inner_product_normalized(u0, utilde);

        VectorField2D eta = u;
        eta -= utilde;
        rec.eta_l2 = eta.l2_norm();
        rec.pressure_l2 = recover_pressure(state, gauge).l2_norm();
        records.push_back(rec);
    };

    sample(0.0);
    const long n_steps = std::lround(t_max / dt);
    for (long step = 1; step <= n_steps; ++step) {
        nws.step(state.omega.raw(), state.mean_flow, dt);
        const bool at_sample = step % sample_every == 0 || step == n_steps;
        lws.step(lin.vtilde.x.raw(), lin.vtilde.y.raw(), dt,
                 at_sample ? &lin.ptilde.raw() : nullptr);
        const double t = static_cast<double>(step) * dt;
        state.t = t;
        lin.t = t;
        if (at_sample) {
            sample(t);
        }
    }
    return records;
}

}  // namespace fluidbound
