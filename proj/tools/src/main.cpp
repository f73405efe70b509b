// fluidbound: spectral shear-flow stability sweeps, Euler and KdV separation
// experiments, and state-discrimination bound curves, emitted as CSV plus a
// JSON run manifest.

#include <algorithm>
#include <cstdio>
#include <exception>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "fluidbound/common.hpp"
#include "support.hpp"

namespace {

using namespace fluidbound;
using namespace fluidbound::cli;

void add_common(CLI::App* sub, CommonOpts* common,
                const std::string& default_out) {
  common->out = default_out;
  auto* out = sub->add_option("--out", common->out, "Output CSV path");
  if (!default_out.empty()) {
    out->capture_default_str();
  }
  sub->add_option("--threads", common->threads,
                  "Worker threads for sweeps (0 = FLUIDBOUND_THREADS or all "
                  "cores)")
      ->capture_default_str();
  sub->add_option("--seed", common->seed,
                  "Random seed recorded in the manifest")
      ->capture_default_str();
  sub->add_option("--config", common->config,
                  "Plain key=value file; command line flags take precedence");
}

// Splice config-file entries into the argument list as --key=value tokens
// right after the subcommand name. Keys already given on the command line are
// skipped, so explicit flags win and the parser still rejects duplicates.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::size_t sub = 0;
  while (sub < args.size() && !args[sub].empty() && args[sub][0] == '-') ++sub;
  if (sub == args.size()) return args;

  std::string path;
  for (std::size_t i = sub + 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(std::string("--config=").size());
      break;
    }
  }
  if (path.empty()) return args;

  std::set<std::string> given;
  for (std::size_t i = sub + 1; i < args.size(); ++i) {
    if (args[i].rfind("--", 0) == 0) {
      given.insert(args[i].substr(0, args[i].find('=')));
    }
  }

  std::vector<std::string> merged(args.begin(), args.begin() + sub + 1);
  for (const auto& [key, value] : read_config_pairs(path)) {
    if (given.count("--" + key) == 0) {
      merged.push_back("--" + key + "=" + value);
    }
  }
  merged.insert(merged.end(), args.begin() + sub + 1, args.end());
  return merged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral stability, Euler/KdV separation experiments, and "
               "state-discrimination bound curves",
               "fluidbound"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  GrowthBoundsOpts growth;
  auto* growth_cmd = app.add_subcommand(
      "growth-bounds", "Closed-form growth-rate bounds and dispersion roots "
                       "over a wavenumber sweep");
  growth_cmd->add_option("--m", growth.m, "Shear wavenumber m (>= 2)")
      ->capture_default_str();
  growth_cmd->add_option("--u0", growth.u0, "Equilibrium amplitude U0")
      ->capture_default_str();
  growth_cmd->add_option("--k-min", growth.k_min, "First perturbation k")
      ->capture_default_str();
  growth_cmd->add_option("--k-max", growth.k_max,
                         "Last perturbation k (0 = m - 1)")
      ->capture_default_str();
  add_common(growth_cmd, &growth.common, "growth_bounds.csv");

  EigenmodeOpts eigen;
  auto* eigen_cmd = app.add_subcommand(
      "eigenmode", "Dump the unstable eigenmode's vorticity and pressure "
                   "coefficients");
  eigen_cmd->add_option("--m", eigen.m, "Shear wavenumber m")
      ->capture_default_str();
  eigen_cmd->add_option("--k", eigen.k, "Perturbation wavenumber k")
      ->capture_default_str();
  eigen_cmd->add_option("--u0", eigen.u0, "Equilibrium amplitude U0")
      ->capture_default_str();
  eigen_cmd->add_option("--truncation", eigen.truncation,
                        "Coefficient truncation J (0 = suggested)")
      ->capture_default_str();
  eigen_cmd->add_option("--aleph", eigen.aleph, "Mode scale factor")
      ->capture_default_str();
  add_common(eigen_cmd, &eigen.common, "eigenmode.csv");

  BoundCurvesOpts curves;
  auto* curves_cmd = app.add_subcommand(
      "bound-curves", "Overlap bound curves f, g, h, H_tilde, H over the "
                      "validity window");
  curves_cmd->add_option("--m", curves.m, "Shear wavenumber m")
      ->capture_default_str();
  curves_cmd->add_option("--k", curves.k, "Perturbation wavenumber k")
      ->capture_default_str();
  curves_cmd->add_option("--u0", curves.u0,
                         "Equilibrium amplitude U0 (0 = 1/sqrt(2 pi^2))");
  curves_cmd->add_option("--eps", curves.eps, "Perturbation size")
      ->capture_default_str();
  curves_cmd->add_option("--kappa", curves.kappa,
                         "Envelope constant override (0 = computed)");
  curves_cmd->add_option("--exponent-K", curves.exponent_K,
                         "Pinned growth exponent K (requires --kappa)");
  curves_cmd->add_option("--n-samples", curves.n_samples,
                         "Sample count over the window (>= 16)")
      ->capture_default_str();
  curves_cmd->add_option("--truncation", curves.truncation,
                         "Eigenmode truncation J (0 = suggested)")
      ->capture_default_str();
  add_common(curves_cmd, &curves.common, "bound_curves.csv");

  ScalingOpts scaling;
  auto* scaling_cmd = app.add_subcommand(
      "scaling", "max(1 - H_tilde) and t* versus eps with a log-log slope "
                 "fit");
  scaling_cmd->add_option("--m", scaling.m, "Shear wavenumber m")
      ->capture_default_str();
  scaling_cmd->add_option("--k", scaling.k, "Perturbation wavenumber k")
      ->capture_default_str();
  scaling_cmd->add_option("--u0", scaling.u0,
                          "Equilibrium amplitude U0 (0 = 1/sqrt(2 pi^2))");
  scaling_cmd
      ->add_option("--eps-list", scaling.eps_list,
                   "Comma-separated eps values (default 1e-3,...,1e-6)")
      ->delimiter(',');
  scaling_cmd->add_option("--kappa", scaling.kappa,
                          "Envelope constant override (0 = computed)");
  scaling_cmd->add_option("--exponent-K", scaling.exponent_K,
                          "Pinned growth exponent K (requires --kappa)");
  scaling_cmd->add_option("--truncation", scaling.truncation,
                          "Eigenmode truncation J (0 = suggested)")
      ->capture_default_str();
  add_common(scaling_cmd, &scaling.common, "scaling.csv");

  KdvOpts kdv;
  auto* kdv_cmd = app.add_subcommand(
      "kdv", "Two-soliton overlap decay, analytic and/or numeric");
  kdv_cmd->add_option("--delta", kdv.delta, "Velocity offset of the second "
                                            "soliton (>= 0)")
      ->capture_default_str();
  kdv_cmd->add_option("--t-final", kdv.t_final,
                      "End time (0 = 2/delta, or 40 when delta = 0)");
  kdv_cmd->add_option("--resolution", kdv.resolution, "Grid points (>= 64)")
      ->capture_default_str();
  kdv_cmd->add_option("--window", kdv.window,
                      "Clearance beyond the soliton paths (>= 30)")
      ->capture_default_str();
  kdv_cmd->add_option("--dt", kdv.dt, "Time step")->capture_default_str();
  kdv_cmd->add_option("--sample-every", kdv.sample_every,
                      "Steps between CSV rows")
      ->capture_default_str();
  kdv_cmd->add_option("--mode", kdv.mode, "analytic, numeric, or both")
      ->check(CLI::IsMember({"analytic", "numeric", "both"}))
      ->capture_default_str();
  add_common(kdv_cmd, &kdv.common, "kdv_overlap.csv");

  EulerSimOpts euler;
  auto* euler_cmd = app.add_subcommand(
      "euler-sim", "Nonlinear/linearized Euler separation experiment with "
                   "bound curves");
  euler_cmd->add_option("--m", euler.m, "Shear wavenumber m")
      ->capture_default_str();
  euler_cmd->add_option("--k", euler.k, "Perturbation wavenumber k")
      ->capture_default_str();
  euler_cmd->add_option("--u0", euler.u0,
                        "Equilibrium amplitude U0 (0 = 1/sqrt(2 pi^2))");
  euler_cmd->add_option("--eps", euler.eps, "Perturbation size (0 = "
                                            "equilibrium only)")
      ->capture_default_str();
  euler_cmd->add_option("--grid-n", euler.grid_n,
                        "Grid points per side (0 = automatic)")
      ->capture_default_str();
  euler_cmd->add_option("--dt", euler.dt, "Time step")->capture_default_str();
  euler_cmd->add_option("--t-max", euler.t_max,
                        "End time (0 = full overlap window)");
  euler_cmd->add_option("--gauge", euler.gauge, "Pressure gauge constant")
      ->capture_default_str();
  euler_cmd->add_option("--sample-every", euler.sample_every,
                        "Steps between CSV rows")
      ->capture_default_str();
  euler_cmd->add_option("--kappa", euler.kappa,
                        "Envelope constant override (0 = computed)");
  euler_cmd->add_option("--exponent-K", euler.exponent_K,
                        "Pinned growth exponent K (requires --kappa)");
  euler_cmd->add_option("--truncation", euler.truncation,
                        "Eigenmode truncation J (0 = suggested)")
      ->capture_default_str();
  add_common(euler_cmd, &euler.common, "overlap.csv");

  CopyBoundOpts copy;
  auto* copy_cmd = app.add_subcommand(
      "copy-bound", "State-discrimination copy-complexity lower bound");
  copy_cmd->add_option("--eps0", copy.eps0, "Initial distance")->required();
  copy_cmd->add_option("--epsf", copy.epsf, "Final distance")->required();
  copy_cmd->add_option("--delta", copy.delta, "Discrimination precision")
      ->capture_default_str();
  copy_cmd->add_option("--kind", copy.kind, "final or history")
      ->check(CLI::IsMember({"final", "history"}))
      ->capture_default_str();
  copy_cmd->add_option("--T", copy.T, "Evolution time for kind = history");
  add_common(copy_cmd, &copy.common, "");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::FileError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const InvalidArgumentError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  try {
    if (app.got_subcommand(growth_cmd)) return run_growth_bounds(growth);
    if (app.got_subcommand(eigen_cmd)) return run_eigenmode(eigen);
    if (app.got_subcommand(curves_cmd)) return run_bound_curves(curves);
    if (app.got_subcommand(scaling_cmd)) return run_scaling(scaling);
    if (app.got_subcommand(kdv_cmd)) return run_kdv(kdv);
    if (app.got_subcommand(euler_cmd)) return run_euler_sim(euler);
    if (app.got_subcommand(copy_cmd)) return run_copy_bound(copy);
    std::fprintf(stderr, "error: no subcommand selected\n");
    return 2;
  } catch (const InvalidArgumentError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
}
