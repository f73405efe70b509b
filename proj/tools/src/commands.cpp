#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "fluidbound/bounds.hpp"
#include "fluidbound/common.hpp"
#include "fluidbound/euler.hpp"
#include "fluidbound/fields.hpp"
#include "fluidbound/kdv.hpp"
#include "fluidbound/stability.hpp"
#include "support.hpp"

namespace fluidbound::cli {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double normalized_u0(double flag_value) {
  return flag_value > 0.0 ? flag_value : 1.0 / std::sqrt(2.0 * kPi * kPi);
}

class WallTimer {
 public:
  WallTimer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void put_common(RunManifest& manifest, const CommonOpts& common) {
  manifest.parameters["out"] = common.out;
  manifest.parameters["threads"] =
      std::to_string(resolve_threads(common.threads));
  manifest.parameters["seed"] = std::to_string(common.seed);
  if (!common.config.empty()) {
    manifest.parameters["config"] = common.config;
  }
}

void finish_file_run(RunManifest manifest, const CommonOpts& common,
                     const WallTimer& timer, const std::string& csv,
                     const std::string& summary_tail) {
  write_text_atomic(common.out, csv);
  manifest.output_paths.push_back(common.out);
  manifest.wall_seconds = timer.seconds();
  write_manifest_sidecar(manifest, common.out);
  std::printf("%s: wrote %s%s\n", manifest.command.c_str(), common.out.c_str(),
              summary_tail.c_str());
}

struct KappaChoice {
  double kappa = 0.0;
  double K = 0.0;
  std::string source;
};

// kappa and the growth exponent either both come from the envelope-constant
// estimate, or kappa is overridden (optionally with a pinned exponent K).
// A pinned K without a kappa value has no consistent envelope, so reject it.
KappaChoice resolve_kappa(const EquilibriumParams& equil, int k,
                          int truncation, double kappa_flag, double K_flag) {
  if (K_flag > 0.0 && !(kappa_flag > 0.0)) {
    throw InvalidArgumentError(
        "--exponent-K requires an explicit --kappa override");
  }
  if (kappa_flag > 0.0 && K_flag > 0.0) {
    return {kappa_flag, K_flag, "override"};
  }
  const int J = truncation > 0 ? truncation : suggest_truncation(equil, k);
  const EigenMode mode = build_eigenmode(equil, k, J);
  const EnvelopeConstants consts = estimate_envelope_constants(mode, equil);
  const double K = (consts.alpha * consts.beta + mode.bounds.gamma_u) /
                   (2.0 * mode.bounds.gamma_l);
  if (kappa_flag > 0.0) {
    return {kappa_flag, K, "override"};
  }
  return {consts.kappa, K, "computed"};
}

BoundCurveParams make_curve_params(double eps, const KappaChoice& choice,
                                   const GrowthBounds& gb) {
  const BoundCurveParams params = BoundCurveParams::with_exponent(
      eps, choice.kappa, choice.K, gb.gamma_l, gb.gamma_u);
  if (!params.eps_valid()) {
    throw InvalidArgumentError(
        "eps = " + format17(eps) +
        " violates the validity condition eps < " +
        format17(params.eps_validity_limit()));
  }
  return params;
}

double quadrature_overlap(const std::vector<double>& a,
                          const std::vector<double>& b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (!(aa > 0.0) || !(bb > 0.0)) {
    throw NumericalError("overlap of a zero-norm state");
  }
  return ab / std::sqrt(aa * bb);
}

double quadrature_norm(const std::vector<double>& a, double dx) {
  double aa = 0.0;
  for (double v : a) {
    aa += v * v;
  }
  return std::sqrt(aa * dx);
}

}  // namespace

int run_growth_bounds(const GrowthBoundsOpts& opts) {
  const WallTimer timer;
  const EquilibriumParams equil(opts.m, opts.u0);
  const int k_max = opts.k_max > 0 ? opts.k_max : opts.m - 1;
  if (opts.k_min < 1 || opts.k_min > k_max || k_max > opts.m - 1) {
    throw InvalidArgumentError(
        "growth-bounds: need 1 <= k_min <= k_max <= m - 1");
  }
  const int n_rows = k_max - opts.k_min + 1;

  struct Row {
    GrowthBounds gb;
    double root = kNan;
    bool unstable = false;
  };
  std::vector<Row> rows(static_cast<std::size_t>(n_rows));
  parallel_for(n_rows, resolve_threads(opts.common.threads), [&](int i) {
    const int k = opts.k_min + i;
    Row row;
    row.gb = growth_bounds(equil, k);
    row.unstable = row.gb.gamma_l > 0.0;
    if (row.unstable) {
      row.root = solve_growth_rate(equil, k);
    }
    rows[static_cast<std::size_t>(i)] = row;
  });

  std::string csv = "m,k,u0,gamma_l,gamma_u,gamma_root,unstable\n";
  for (int i = 0; i < n_rows; ++i) {
    const Row& row = rows[static_cast<std::size_t>(i)];
    csv += csv_join({std::to_string(opts.m), std::to_string(opts.k_min + i),
                     format17(opts.u0), format17(row.gb.gamma_l),
                     format17(row.gb.gamma_u), format17(row.root),
                     row.unstable ? "1" : "0"}) +
           "\n";
  }

  RunManifest manifest;
  manifest.command = "growth-bounds";
  put_common(manifest, opts.common);
  manifest.parameters["m"] = std::to_string(opts.m);
  manifest.parameters["u0"] = format17(opts.u0);
  manifest.parameters["k_min"] = std::to_string(opts.k_min);
  manifest.parameters["k_max"] = std::to_string(k_max);
  finish_file_run(std::move(manifest), opts.common, timer, csv,
                  " (" + std::to_string(n_rows) + " rows)");
  return 0;
}

int run_eigenmode(const EigenmodeOpts& opts) {
  const WallTimer timer;
  const EquilibriumParams equil(opts.m, opts.u0);
  const int J =
      opts.truncation > 0 ? opts.truncation : suggest_truncation(equil, opts.k);
  const EigenMode mode = build_eigenmode(equil, opts.k, J, opts.aleph);

  std::string csv = "j,re_c,im_c,re_b,im_b\n";
  const auto support = mode.support();
  for (int j : support) {
    const Complex c = mode.coeff_c(j);
    const Complex b = mode.coeff_b(j);
    csv += csv_join({std::to_string(j), format17(c.real()), format17(c.imag()),
                     format17(b.real()), format17(b.imag())}) +
           "\n";
  }

  RunManifest manifest;
  manifest.command = "eigenmode";
  put_common(manifest, opts.common);
  manifest.parameters["m"] = std::to_string(opts.m);
  manifest.parameters["k"] = std::to_string(opts.k);
  manifest.parameters["u0"] = format17(opts.u0);
  manifest.parameters["truncation"] = std::to_string(J);
  manifest.parameters["aleph"] = format17(opts.aleph);
  manifest.parameters["gamma"] = format17(mode.gamma);
  finish_file_run(std::move(manifest), opts.common, timer, csv,
                  " (" + std::to_string(support.size()) + " rows); gamma = " +
                      format17(mode.gamma));
  return 0;
}

int run_bound_curves(const BoundCurvesOpts& opts) {
  const WallTimer timer;
  if (opts.n_samples < 16) {
    throw InvalidArgumentError(
        "bound-curves: the interior-minimum check needs n_samples >= 16");
  }
  const double u0 = normalized_u0(opts.u0);
  const EquilibriumParams equil(opts.m, u0);
  const GrowthBounds gb = growth_bounds(equil, opts.k);
  const KappaChoice choice = resolve_kappa(equil, opts.k, opts.truncation,
                                           opts.kappa, opts.exponent_K);
  const BoundCurveParams params = make_curve_params(opts.eps, choice, gb);
  const double tf = params.t_window();

  std::string csv = "t,f,g,h,H_tilde,H\n";
  double first_ht = 0.0, last_ht = 0.0, min_interior = 0.0, argmin_t = 0.0;
  bool have_interior = false;
  for (int i = 0; i < opts.n_samples; ++i) {
    const double t = tf * i / (opts.n_samples - 1);
    const auto [f, g] = curves_f_g(opts.eps, gb.gamma_l, gb.gamma_u, t);
    const double h = curve_h(params, t);
    const double ht = curve_H_tilde(params, t);
    const double bigh = curve_H(params, t);
    csv += csv_join({format17(t), format17(f), format17(g), format17(h),
                     format17(ht), format17(bigh)}) +
           "\n";
    if (i == 0) {
      first_ht = ht;
    } else if (i == opts.n_samples - 1) {
      last_ht = ht;
    } else if (!have_interior || ht < min_interior) {
      have_interior = true;
      min_interior = ht;
      argmin_t = t;
    }
  }
  const bool interior_minimum =
      have_interior && min_interior < first_ht && min_interior < last_ht;

  RunManifest manifest;
  manifest.command = "bound-curves";
  put_common(manifest, opts.common);
  manifest.parameters["m"] = std::to_string(opts.m);
  manifest.parameters["k"] = std::to_string(opts.k);
  manifest.parameters["u0"] = format17(u0);
  manifest.parameters["eps"] = format17(opts.eps);
  manifest.parameters["kappa"] = format17(choice.kappa);
  manifest.parameters["kappa_source"] = choice.source;
  manifest.parameters["exponent_K"] = format17(choice.K);
  manifest.parameters["n_samples"] = std::to_string(opts.n_samples);
  const std::string tail =
      interior_minimum
          ? "; interior minimum of H_tilde at t = " + format17(argmin_t)
          : "; no interior minimum of H_tilde";
  finish_file_run(std::move(manifest), opts.common, timer, csv,
                  " (" + std::to_string(opts.n_samples) + " rows)" + tail);
  return 0;
}

int run_scaling(const ScalingOpts& opts) {
  const WallTimer timer;
  const double u0 = normalized_u0(opts.u0);
  const EquilibriumParams equil(opts.m, u0);
  const GrowthBounds gb = growth_bounds(equil, opts.k);
  const KappaChoice choice = resolve_kappa(equil, opts.k, opts.truncation,
                                           opts.kappa, opts.exponent_K);
  const std::vector<double> eps_list =
      opts.eps_list.empty() ? std::vector<double>{1e-3, 1e-4, 1e-5, 1e-6}
                            : opts.eps_list;
  const ScalingTable table =
      scaling_study(eps_list, choice.kappa, choice.K, gb.gamma_l, gb.gamma_u);

  std::string csv = "eps,max_one_minus_H_tilde,t_star,fitted_slope\n";
  const std::string slope_cell =
      table.has_slope ? format17(table.fitted_slope) : "";
  for (const ScalingRow& row : table.rows) {
    csv += csv_join({format17(row.eps), format17(row.max_one_minus_H_tilde),
                     format17(row.t_star), slope_cell}) +
           "\n";
  }

  RunManifest manifest;
  manifest.command = "scaling";
  put_common(manifest, opts.common);
  manifest.parameters["m"] = std::to_string(opts.m);
  manifest.parameters["k"] = std::to_string(opts.k);
  manifest.parameters["u0"] = format17(u0);
  std::string eps_repr;
  for (double eps : eps_list) {
    if (!eps_repr.empty()) eps_repr += ',';
    eps_repr += format17(eps);
  }
  manifest.parameters["eps_list"] = eps_repr;
  manifest.parameters["kappa"] = format17(choice.kappa);
  manifest.parameters["kappa_source"] = choice.source;
  manifest.parameters["exponent_K"] = format17(choice.K);
  const std::string tail =
      table.has_slope ? "; fitted slope = " + format17(table.fitted_slope)
                      : "; no slope fit (single eps)";
  finish_file_run(std::move(manifest), opts.common, timer, csv,
                  " (" + std::to_string(table.rows.size()) + " rows)" + tail);
  return 0;
}

int run_kdv(const KdvOpts& opts) {
  const WallTimer timer;
  if (opts.delta < 0.0) {
    throw InvalidArgumentError("kdv: delta must be >= 0");
  }
  if (!(opts.dt > 0.0) || opts.sample_every < 1) {
    throw InvalidArgumentError("kdv: need dt > 0 and sample_every >= 1");
  }
  if (opts.window < 30.0) {
    throw InvalidArgumentError(
        "kdv: window must be >= 30 so soliton tails are negligible");
  }
  const double t_final =
      opts.t_final > 0.0 ? opts.t_final
                         : (opts.delta > 0.0 ? 2.0 / opts.delta : 40.0);
  const bool want_numeric = opts.mode != "analytic";
  const bool want_analytic = opts.mode != "numeric";
  const bool both = want_numeric && want_analytic;

  const SolitonParams slow(1.0, 0.0);
  const SolitonParams fast(1.0 + opts.delta, 0.0);
  const Grid1D grid(-opts.window,
                    opts.window + (1.0 + opts.delta) * t_final,
                    opts.resolution);
  const long n_steps = std::lround(t_final / opts.dt);
  if (n_steps < 1) {
    throw InvalidArgumentError("kdv: t_final must cover at least one step");
  }

  KdvState s1{grid, soliton_samples(slow, grid, 0.0), 0.0};
  KdvState s2{grid, soliton_samples(fast, grid, 0.0), 0.0};
  const double norm1_0 = quadrature_norm(s1.phi, grid.dx());
  const double norm2_0 = quadrature_norm(s2.phi, grid.dx());

  std::string csv = "t,overlap_analytic,overlap_numeric,norm_drift,deviation\n";
  double max_deviation = 0.0;
  long rows = 0;
  const auto emit = [&](double t) {
    double oa = kNan, on = kNan, drift = kNan, dev = kNan;
    if (want_analytic) {
      oa = quadrature_overlap(soliton_samples(slow, grid, t),
                              soliton_samples(fast, grid, t));
    }
    if (want_numeric) {
      on = quadrature_overlap(s1.phi, s2.phi);
      drift = std::max(
          std::abs(quadrature_norm(s1.phi, grid.dx()) / norm1_0 - 1.0),
          std::abs(quadrature_norm(s2.phi, grid.dx()) / norm2_0 - 1.0));
    }
    if (both) {
      dev = std::abs(oa - on);
      max_deviation = std::max(max_deviation, dev);
    }
    csv += csv_join({format17(t), format17(oa), format17(on), format17(drift),
                     format17(dev)}) +
           "\n";
    ++rows;
  };

  emit(0.0);
  for (long step = 1; step <= n_steps; ++step) {
    if (want_numeric) {
      s1 = kdv_step(s1, opts.dt);
      s2 = kdv_step(s2, opts.dt);
    }
    if (step % opts.sample_every == 0 || step == n_steps) {
      emit(static_cast<double>(step) * opts.dt);
    }
  }

  RunManifest manifest;
  manifest.command = "kdv";
  put_common(manifest, opts.common);
  manifest.parameters["delta"] = format17(opts.delta);
  manifest.parameters["t_final"] = format17(t_final);
  manifest.parameters["resolution"] = std::to_string(opts.resolution);
  manifest.parameters["window"] = format17(opts.window);
  manifest.parameters["dt"] = format17(opts.dt);
  manifest.parameters["sample_every"] = std::to_string(opts.sample_every);
  manifest.parameters["mode"] = opts.mode;
  const std::string tail =
      both ? "; max |overlap_analytic - overlap_numeric| = " +
                 format17(max_deviation)
           : "";
  finish_file_run(std::move(manifest), opts.common, timer, csv,
                  " (" + std::to_string(rows) + " rows)" + tail);
  return 0;
}

int run_euler_sim(const EulerSimOpts& opts) {
  const WallTimer timer;
  const double u0 = normalized_u0(opts.u0);
  const EquilibriumParams equil(opts.m, u0);
  if (!(opts.dt > 0.0) || opts.sample_every < 1) {
    throw InvalidArgumentError("euler-sim: need dt > 0 and sample_every >= 1");
  }
  if (opts.eps < 0.0) {
    throw InvalidArgumentError("euler-sim: eps must be >= 0");
  }

  RunManifest manifest;
  manifest.command = "euler-sim";
  put_common(manifest, opts.common);
  manifest.parameters["m"] = std::to_string(opts.m);
  manifest.parameters["k"] = std::to_string(opts.k);
  manifest.parameters["u0"] = format17(u0);
  manifest.parameters["eps"] = format17(opts.eps);
  manifest.parameters["dt"] = format17(opts.dt);
  manifest.parameters["gauge"] = format17(opts.gauge);
  manifest.parameters["sample_every"] = std::to_string(opts.sample_every);

  const std::string header =
      "t,overlap_nonlinear,overlap_linear,f_t,g_t,h_t,H_tilde_t,eta_l2,"
      "eta_bound,energy,enstrophy_l4,pressure_l2\n";

  if (opts.eps == 0.0) {
    // The unperturbed equilibrium never moves: every diagnostic is constant
    // and the bound curves degenerate to f = g = 1, h = 0.
    if (!(opts.t_max > 0.0)) {
      throw InvalidArgumentError(
          "euler-sim: eps = 0 has an unbounded window; give --t-max");
    }
    const int n = opts.grid_n > 0 ? opts.grid_n : 256;
    const Grid2D grid(n, n);
    SpectralField2D omega_eq(grid);
    omega_eq.set_coeff(0, opts.m, Complex(-0.5 * u0 * opts.m, 0.0));
    omega_eq.set_coeff(0, -opts.m, Complex(-0.5 * u0 * opts.m, 0.0));
    const EulerState state{grid, omega_eq, {0.0, 0.0}, 0.0};
    const double energy =
        velocity_from_vorticity(omega_eq, {0.0, 0.0}).l2_norm();
    const double enstrophy = lp_norm(omega_eq, 4);
    const double pressure = recover_pressure(state, opts.gauge).l2_norm();

    std::string csv = header;
    long rows = 0;
    const long n_steps = std::lround(opts.t_max / opts.dt);
    const auto emit = [&](long step) {
      const double t = static_cast<double>(step) * opts.dt;
      csv += csv_join({format17(t), format17(1.0), format17(1.0),
                       format17(1.0), format17(1.0), format17(0.0),
                       format17(1.0), format17(0.0), format17(0.0),
                       format17(energy), format17(enstrophy),
                       format17(pressure)}) +
             "\n";
      ++rows;
    };
    emit(0);
    for (long step = 1; step <= n_steps; ++step) {
      if (step % opts.sample_every == 0 || step == n_steps) {
        emit(step);
      }
    }
    manifest.parameters["grid_n"] = std::to_string(n);
    manifest.parameters["t_max"] = format17(opts.t_max);
    manifest.parameters["kappa"] = "0";
    manifest.parameters["kappa_source"] = "unused";
    finish_file_run(std::move(manifest), opts.common, timer, csv,
                    " (" + std::to_string(rows) + " rows)");
    return 0;
  }

  const int J = opts.truncation > 0 ? opts.truncation
                                    : suggest_truncation(equil, opts.k);
  const EigenMode mode = build_eigenmode(equil, opts.k, J);
  const GrowthBounds gb = mode.bounds;
  const KappaChoice choice =
      resolve_kappa(equil, opts.k, J, opts.kappa, opts.exponent_K);
  const BoundCurveParams params = make_curve_params(opts.eps, choice, gb);
  const double window = params.t_window();
  // Land the default end time on a whole step so every sample stays inside
  // the validity window of the bound curves.
  const double t_max = opts.t_max > 0.0
                           ? opts.t_max
                           : std::floor(window / opts.dt) * opts.dt;

  const auto records =
      run_separation_experiment(equil, mode, opts.eps, t_max, opts.dt,
                                opts.sample_every, opts.gauge, opts.grid_n);

  std::string csv = header;
  for (const DiagnosticsRecord& rec : records) {
    const auto [f, g] = curves_f_g(opts.eps, gb.gamma_l, gb.gamma_u, rec.t);
    const double tb = std::min(rec.t, window);
    const double h = curve_h(params, tb);
    const double ht = curve_H_tilde(params, tb);
    const double eta_bound = opts.eps * opts.eps * params.kappa *
                             std::expm1(params.alphabeta() * rec.t);
    csv += csv_join({format17(rec.t), format17(rec.overlap_nonlinear),
                     format17(rec.overlap_linear), format17(f), format17(g),
                     format17(h), format17(ht), format17(rec.eta_l2),
                     format17(eta_bound), format17(rec.energy),
                     format17(rec.enstrophy_l4), format17(rec.pressure_l2)}) +
           "\n";
  }

  manifest.parameters["grid_n"] = std::to_string(opts.grid_n);
  manifest.parameters["t_max"] = format17(t_max);
  manifest.parameters["truncation"] = std::to_string(J);
  manifest.parameters["kappa"] = format17(choice.kappa);
  manifest.parameters["kappa_source"] = choice.source;
  manifest.parameters["exponent_K"] = format17(choice.K);
  finish_file_run(std::move(manifest), opts.common, timer, csv,
                  " (" + std::to_string(records.size()) + " rows)");
  return 0;
}

int run_copy_bound(const CopyBoundOpts& opts) {
  const WallTimer timer;
  const double final_bound =
      copy_lower_bound(opts.eps0, opts.epsf, opts.delta);
  double value = final_bound;
  if (opts.kind == "history") {
    if (!(opts.T > 0.0)) {
      throw InvalidArgumentError("copy-bound: kind = history needs --T > 0");
    }
    value = history_state_bound(final_bound, opts.T);
  }
  std::printf("%s\n", format17(value).c_str());

  RunManifest manifest;
  manifest.command = "copy-bound";
  put_common(manifest, opts.common);
  manifest.parameters["eps0"] = format17(opts.eps0);
  manifest.parameters["epsf"] = format17(opts.epsf);
  manifest.parameters["delta"] = format17(opts.delta);
  manifest.parameters["kind"] = opts.kind;
  manifest.parameters["T"] = format17(opts.T);
  manifest.parameters["value"] = format17(value);

  if (opts.common.out.empty()) {
    manifest.wall_seconds = timer.seconds();
    std::printf("%s", manifest.to_json().c_str());
    return 0;
  }
  std::string csv = "eps0,epsf,delta,kind,T,value\n";
  csv += csv_join({format17(opts.eps0), format17(opts.epsf),
                   format17(opts.delta), opts.kind, format17(opts.T),
                   format17(value)}) +
         "\n";
  finish_file_run(std::move(manifest), opts.common, timer, csv, "");
  return 0;
}

}  // namespace fluidbound::cli
