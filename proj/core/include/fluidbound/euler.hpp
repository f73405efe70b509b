#ifndef FLUIDBOUND_EULER_HPP
#define FLUIDBOUND_EULER_HPP

// Pseudo-spectral 2D incompressible Euler: nonlinear solver in
// vorticity-streamfunction form, linearized solver in velocity form with
// spectral pressure projection, pressure recovery, and the lockstep
// separation experiment measuring the linearization error eta = u - utilde.

#include <array>
#include <vector>

#include "fluidbound/common.hpp"
#include "fluidbound/fields.hpp"
#include "fluidbound/stability.hpp"

namespace fluidbound {

struct EulerState {
  Grid2D grid;
  SpectralField2D omega;              // scalar vorticity
  std::array<double, 2> mean_flow{};  // exactly conserved (0,0) velocity modes
  double t = 0.0;
};

struct LinearState {
  Grid2D grid;
  VectorField2D vtilde;     // perturbation velocity (divergence-free)
  SpectralField2D ptilde;   // perturbation pressure of the current state
  double t = 0.0;
};

struct DiagnosticsRecord {
  double t = 0.0;
  double energy = 0.0;             // ||u||_L2
  double enstrophy_l4 = 0.0;       // ||omega||_L4 (collocation)
  double overlap_nonlinear = 0.0;  // <u0|u>
  double overlap_linear = 0.0;     // <u0|utilde>
  double eta_l2 = 0.0;             // ||u - utilde||_L2
  double pressure_l2 = 0.0;        // ||P||_L2 at the run gauge
};

// u = (-psi_y + mean_x, psi_x + mean_y) with laplacian(psi) = omega per mode;
// divergence-free exactly in spectral space.
VectorField2D velocity_from_vorticity(const SpectralField2D& omega,
                                      std::array<double, 2> mean_flow);

// Vorticity of a velocity field: omega = d(uy)/dx - d(ux)/dy.
SpectralField2D vorticity_of(const VectorField2D& u);

// One RK4 step of the 2/3-dealiased advection d(omega)/dt = -div(u omega).
// Enforces the CFL bound dt * max|u| * (n/2) <= 0.5 and aborts on NaN.
EulerState nonlinear_step(const EulerState& state, double dt);

// One RK4 step of the linearization about u0 = (U0 sin(my), 0):
// d(vtilde)/dt = Proj[-(u0.grad) vtilde - (vtilde.grad) u0], with ptilde
// refreshed from the end-of-step state.
LinearState linear_step(const LinearState& state,
                        const EquilibriumParams& equil, double dt);

// Pressure from the spectral Poisson solve of -div((u.grad) u), dealiased;
// the (0,0) mode is set to `gauge`.
SpectralField2D recover_pressure(const EulerState& state, double gauge);

// Normalized inner product of the stacked (u, P) vector against the
// equilibrium stack (u0, gauge).
double direct_sum_overlap(const EulerState& state,
                          const EquilibriumParams& equil, double gauge);

// Evolve the nonlinear solver from sqrt(1-eps^2) u0 + eps vtilde(0) and the
// linearized perturbation vtilde in lockstep; record diagnostics every
// sample_every steps (plus t = 0 and the final step). The linear comparison
// state is utilde(t) = sqrt(1-eps^2) u0 + eps vtilde(t), so the initial
// overlap is sqrt(1-eps^2) exactly and eta(0) = 0. Requires
// eps in (0, min(1, 1/q)) and t_max inside the overlap window
// log(1/eps)/gamma_u. grid_n = 0 picks max(256, next power of two above
// 4 max(k, J)).
std::vector<DiagnosticsRecord> run_separation_experiment(
    const EquilibriumParams& equil, const EigenMode& mode, double eps,
    double t_max, double dt, int sample_every, double gauge = 0.0,
    int grid_n = 0);

}  // namespace fluidbound

#endif  // FLUIDBOUND_EULER_HPP
