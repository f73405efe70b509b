#ifndef FLUIDBOUND_STABILITY_HPP
#define FLUIDBOUND_STABILITY_HPP

// Linear stability of the sinusoidal shear equilibrium u0 = (U0 sin(my), 0)
// on the 2-torus: recurrence coefficients, continued fractions, growth-rate
// bracketing and root finding, the cutoff wavenumber, and the unstable
// eigenmode's stream-function and pressure Fourier coefficients.
//
// The perturbation ansatz is psi = e^{gamma t + i k x} chi(y) with
// chi(y) = sum_{j in mZ} c_j e^{i j y}; velocities are (-psi_y, psi_x) and
// physical fields are real parts.

#include <utility>
#include <vector>

#include "fluidbound/common.hpp"
#include "fluidbound/fields.hpp"

namespace fluidbound {

struct EquilibriumParams {
  int m = 2;        // equilibrium wavenumber, >= 2
  double U0 = 1.0;  // amplitude, > 0

  EquilibriumParams() = default;
  EquilibriumParams(int m_, double U0_);
};

struct GrowthBounds {
  double gamma_l = 0.0;  // 0 when k >= k_cutoff
  double gamma_u = 0.0;
  double k_cutoff = 0.0;
};

struct EigenMode {
  EquilibriumParams params;
  int k = 0;           // perturbation wavenumber, 1 <= k <= m-1
  double gamma = 0.0;  // growth rate (continued-fraction root)
  GrowthBounds bounds;
  int J = 0;           // truncation: c_j for |j| <= J, j in mZ
  // Coefficient storage: index p in [-J/m, J/m] maps to j = p*m at
  // slot p + J/m. Delta normalization is already applied.
  std::vector<Complex> c;  // stream-function coefficients
  std::vector<Complex> b;  // pressure coefficients
  double aleph = 1.0;      // L2 norm of the synthesized real velocity field
  double q = 0.0;          // ||ptilde||_L2 / aleph

  Complex coeff_c(int j) const;  // 0 off the support
  Complex coeff_b(int j) const;
  std::vector<int> support() const;  // j values, ascending
};

// a_j = (2 gamma / (k U0)) (j^2+k^2)/(j^2+k^2-m^2); a_j = a_{-j}.
// Throws on a vanishing denominator.
double coeff_a(int j, double gamma, const EquilibriumParams& params, int k);

// Tail limit rho_inf = gamma/(k U0) - sqrt(1 + gamma^2/(k U0)^2), in (-1,0).
double rho_infinity(double gamma, const EquilibriumParams& params, int k);

// rho_{pm} = -1/(a_{pm} - rho_{(p+1)m}), evaluated `depth` levels down and
// closed with the given tail value (pass rho_infinity(...) for the standard
// closure). Result is in (-1, 0); throws NumericalError if the
// depth-doubling self-check does not converge.
double continued_fraction_rho(int p, double gamma,
                              const EquilibriumParams& params, int k,
                              int depth, double tail);
// Same with the rho_inf tail closure and default depth 64.
double continued_fraction_rho(int p, double gamma,
                              const EquilibriumParams& params, int k,
                              int depth = 64);

// Closed-form gamma_l, gamma_u and k_cutoff = m sqrt((sqrt(177)-9)/6).
// Requires 1 <= k <= m-1; gamma_l = 0 when the radicand is nonpositive.
GrowthBounds growth_bounds(const EquilibriumParams& params, int k);

// Root of the dispersion relation -rho_m(gamma) = -a_0(gamma)/2 by bisection
// inside [gamma_l (1-1e-6), gamma_u (1+1e-6)]. Requires k < k_cutoff; throws
// NumericalError if the bracket shows no sign change (never widened).
double solve_growth_rate(const EquilibriumParams& params, int k,
                         double tol = 1e-13);

// Smallest truncation J (multiple of m, >= 16m) with predicted relative
// coefficient tail below 1e-11.
int suggest_truncation(const EquilibriumParams& params, int k);

// Build the eigenmode: deepest continued fraction + backward recursion for
// the c_j, pressure coefficients b_j, Delta scaled so the synthesized real
// velocity field has L2 norm `aleph`. Requires k < k_cutoff, J a multiple of
// m with J >= 16m; throws if the truncated tail |c_J|/max|c| > 1e-10.
EigenMode build_eigenmode(const EquilibriumParams& params, int k, int J,
                          double aleph = 1.0);

// Sampled real perturbation (eps*vtilde(.,t), eps*ptilde(.,t)) on the grid.
// Requires nx, ny >= 4*max(k, J). Velocity is divergence-free to spectral
// precision and has L2 norm eps * aleph * e^{gamma t} exactly (rescaled on
// the synthesized field).
std::pair<VectorField2D, SpectralField2D> synthesize_perturbation(
    const EigenMode& mode, Grid2D grid, double t, double eps);

}  // namespace fluidbound

#endif  // FLUIDBOUND_STABILITY_HPP
