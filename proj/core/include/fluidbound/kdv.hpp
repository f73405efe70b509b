#ifndef FLUIDBOUND_KDV_HPP
#define FLUIDBOUND_KDV_HPP

// Analytic KdV solitons, their pairwise distances and overlaps, and a
// pseudo-spectral integrating-factor RK4 solver for
//   phi_t + phi_xxx - 6 phi phi_x = 0
// on a periodic window wide enough that sech^2 tails are negligible.

#include <functional>
#include <vector>

#include "fluidbound/common.hpp"
#include "fluidbound/fields.hpp"

namespace fluidbound {

struct SolitonParams {
  double c = 1.0;  // velocity, > 0
  double a = 0.0;  // offset

  SolitonParams() = default;
  SolitonParams(double c_, double a_);
};

struct KdvState {
  Grid1D grid;
  std::vector<double> phi;
  double t = 0.0;
};

// phi(x,t) = -(c/2) sech^2( (sqrt(c)/2) (x - c t + a) ).
double soliton_eval(const SolitonParams& params, double x, double t);

// Periodized soliton sampled on a window (nearest periodic image).
std::vector<double> soliton_samples(const SolitonParams& params,
                                    const Grid1D& window, double t);

// d(phi, phi') = min over sign of ||phi - z phi'||_L2 between the c = 1 and
// c = 1 + delta solitons at time t, by trapezoid quadrature on the window.
// The window must contain both solitons with tails below 1e-12 at the
// boundary or an InvalidArgumentError is thrown.
double soliton_pair_distance(double delta, double t, const Grid1D& window);

// One integrating-factor RK4 step (exact dispersion, 2/3-rule dealiased
// nonlinear term). The dispersive term is integrated exactly, so the
// remaining stability constraint is advective: dt * 6 max|phi| * k_max
// must stay within the RK4 imaginary-axis limit or NumericalError is
// thrown, as it is on NaN/overflow.
KdvState kdv_step(const KdvState& state, double dt);

// Convenience driver: n_steps of kdv_step with an optional per-sample
// callback every sample_every steps (0 disables sampling).
KdvState kdv_evolve(const KdvState& state, double dt, long n_steps,
                    int sample_every = 0,
                    const std::function<void(const KdvState&)>& on_sample = {});

// I(delta) = int (3 (1+delta)^{1/4} / 8) sech^2((x+1)/2)
//                sech^2(sqrt(1+delta) (x-1)/2) dx, adaptive quadrature.
// Requires delta in [0, 0.5).
double overlap_integral_I(double delta);

// Copy-complexity lower bound (d(T)/d(0))^2 with delta = delta_map / T and
// distances from soliton_pair_distance on internally sized windows.
double kdv_copy_lower_bound(double T, double delta_map = 2.0);

}  // namespace fluidbound

#endif  // FLUIDBOUND_KDV_HPP
