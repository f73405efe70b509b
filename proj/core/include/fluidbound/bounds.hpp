#ifndef FLUIDBOUND_BOUNDS_HPP
#define FLUIDBOUND_BOUNDS_HPP

// Closed-form bound machinery: pure-state distance facts, copy-complexity
// lower bounds, the overlap bound curves f, g, h, H-tilde, H, the minimum
// time t*, envelope constants (alpha, beta, b1, b2, kappa), the 2x2
// comparison-ODE domination check, and history-state bounds.

#include <vector>

#include "fluidbound/common.hpp"
#include "fluidbound/stability.hpp"

namespace fluidbound {

struct PureStatePair {
  std::vector<Complex> psi;
  std::vector<Complex> phi;

  // Validates equal dimensions and unit norms to 1e-12.
  PureStatePair(std::vector<Complex> psi_, std::vector<Complex> phi_);
  Complex overlap() const;  // <psi|phi>
};

// d = sqrt(2 - 2 |<psi|phi>|)  (minimum over unit phase z of ||psi - z phi||).
double euclidean_distance(const PureStatePair& pair);
// D = sqrt(1 - |<psi|phi>|^2); satisfies d/sqrt(2) <= D <= d.
double trace_distance(const PureStatePair& pair);

// k >= ((epsf - 2 delta)/eps0)^2. Requires delta < epsf/2 and eps0 > 0.
double copy_lower_bound(double eps0, double epsf, double delta);

struct BoundCurveParams {
  double eps = 0.0;      // in (0,1)
  double kappa = 0.0;    // > 0
  double alpha = 0.0;    // > 0
  double beta = 0.0;     // > 0
  double gamma_l = 0.0;  // > 0
  double gamma_u = 0.0;  // > 0
  double K = 0.0;        // derived: (alpha beta + gamma_u) / (2 gamma_l)

  // Validates eps in (0,1), alpha*beta > 2*gamma_u and K > 3/2.
  BoundCurveParams(double eps_, double kappa_, double alpha_, double beta_,
                   double gamma_l_, double gamma_u_);
  // Exponent-pinned variant: alpha*beta := 2*K*gamma_l - gamma_u (split
  // evenly into alpha = beta = sqrt(alpha*beta)); only the product enters
  // the curves.
  static BoundCurveParams with_exponent(double eps, double kappa, double K,
                                        double gamma_l, double gamma_u);

  double alphabeta() const { return alpha * beta; }
  // Validity window end t_f = gamma_u^{-1} log(1/eps).
  double t_window() const;
  // Proof validity condition eps < (4 sqrt2 kappa K)^{gamma_u /
  // (2 gamma_l (K-1) - gamma_u)}; equivalent to t* < t_f.
  bool eps_valid() const;
  double eps_validity_limit() const;
};

// f(t) = sqrt((1-eps^2)/(1+eps^2(e^{2 gamma_l t}-1))), g likewise with
// gamma_u; defined for all t >= 0.
std::pair<double, double> curves_f_g(double eps, double gamma_l,
                                     double gamma_u, double t);

// h(t) = 2 eps^2 kappa (e^{alpha beta t} - 1)/sqrt(1+eps^2(e^{2 gamma_l t}-1)).
// t must lie in [0, t_window()].
double curve_h(const BoundCurveParams& params, double t);

// H-tilde(t) = f(t) + sqrt2 eps h(t) e^{gamma_u t}; same window.
double curve_H_tilde(const BoundCurveParams& params, double t);

// H(t) = 1 - (eps^2/2)(e^{2 gamma_l t}-1) + (3 eps^4/8) e^{4 gamma_l t}
//        + 2 sqrt2 eps^3 kappa e^{(alpha beta + gamma_u) t}; same window.
double curve_H(const BoundCurveParams& params, double t);

// t* = log(1/(4 sqrt2 eps kappa K)) / (2 gamma_l (K-1)). Requires the
// validity condition (throws InvalidArgumentError otherwise); asserts
// t* < t_window().
double minimum_time_tstar(const BoundCurveParams& params);

struct EnvelopeConstants {
  double alpha = 0.0;
  double beta = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double kappa = 0.0;  // (b1 + alpha b2 / (2 beta)) / (alpha beta - 2 gamma_u)
};

// Measures b1 = ||(vtilde.grad)vtilde||_L2 and b2 = ||vtilde.grad
// omega_vtilde||_L2 at t = 0 by spectral quadrature on a grid sized from the
// mode's truncation, and sets alpha^2 = max(U0 + ||vtilde||_Linf, 2 gamma_u),
// beta^2 = max(||grad omega_u0||_Linf + ||grad omega_vtilde||_Linf,
// 2 gamma_u), both with a 1% margin, so alpha beta > 2 gamma_u always holds.
EnvelopeConstants estimate_envelope_constants(const EigenMode& mode,
                                              const EquilibriumParams& equil);

struct ComparisonOdeReport {
  bool dominated = false;   // envelope >= y1 at every sample
  double max_ratio = 0.0;   // max y1 / envelope over samples with envelope > 0
  double dt_used = 0.0;
  std::vector<double> t;
  std::vector<double> y1;        // integrated ||eta|| component (eps = 1)
  std::vector<double> envelope;  // kappa (e^{alpha beta t} - 1)
};

// Integrate y' = A y + e^{2 gamma_u t} (b1, b2), A = [[0, alpha^2],
// [beta^2, 0]], y(0) = 0 with fixed-step RK4 (dt halved until the endpoint
// changes by < 1e-8 relative), and check the closed-form envelope dominates
// y1 at all samples. The eps^2 prefactor scales out and is omitted.
ComparisonOdeReport comparison_ode_check(const EnvelopeConstants& consts,
                                         double gamma_u, double t_max);

// final_bound / T.
double history_state_bound(double final_bound, double T);

struct ScalingRow {
  double eps = 0.0;
  double max_one_minus_H_tilde = 0.0;
  double t_star = 0.0;
};

struct ScalingTable {
  std::vector<ScalingRow> rows;
  // Log-log least-squares slope of max(1-H-tilde) vs 1/eps, discarding the
  // largest eps when three or more points are present; NaN when fewer than
  // two points remain.
  double fitted_slope = 0.0;
  bool has_slope = false;
};

// For each eps (all must satisfy the validity condition), maximize
// 1 - H-tilde over the validity window by golden-section search seeded at
// the closed-form t*, then fit the log-log slope.
ScalingTable scaling_study(const std::vector<double>& eps_list, double kappa,
                           double K, double gamma_l, double gamma_u);

}  // namespace fluidbound

#endif  // FLUIDBOUND_BOUNDS_HPP
