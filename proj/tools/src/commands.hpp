#ifndef FLUIDBOUND_TOOLS_COMMANDS_HPP
#define FLUIDBOUND_TOOLS_COMMANDS_HPP

// One entry point per subcommand. Each run writes its CSV artifact (when an
// output path applies) plus a manifest sidecar, prints a one-line summary,
// and throws fluidbound exceptions for the caller to map to exit codes.

#include <cstdint>
#include <string>
#include <vector>

namespace fluidbound::cli {

struct CommonOpts {
  std::string out;
  std::string config;
  int threads = 0;
  std::uint64_t seed = 42;
};

struct GrowthBoundsOpts {
  CommonOpts common;
  int m = 2;
  double u0 = 1.0;
  int k_min = 1;
  int k_max = 0;  // 0 means m - 1
};

struct EigenmodeOpts {
  CommonOpts common;
  int m = 2;
  int k = 1;
  double u0 = 1.0;
  int truncation = 0;  // 0 means suggest_truncation
  double aleph = 1.0;
};

struct BoundCurvesOpts {
  CommonOpts common;
  int m = 2;
  int k = 1;
  double u0 = 0.0;  // 0 means the normalized default
  double eps = 1e-3;
  double kappa = 0.0;       // 0 means computed from envelope constants
  double exponent_K = 0.0;  // 0 means computed; requires --kappa when set
  int n_samples = 256;
  int truncation = 64;  // 0 means suggest_truncation
};

struct ScalingOpts {
  CommonOpts common;
  int m = 2;
  int k = 1;
  double u0 = 0.0;
  std::vector<double> eps_list;  // empty means {1e-3, 1e-4, 1e-5, 1e-6}
  double kappa = 0.0;
  double exponent_K = 0.0;
  int truncation = 64;
};

struct KdvOpts {
  CommonOpts common;
  double delta = 0.05;
  double t_final = 0.0;  // 0 means 2 / delta (40 when delta = 0)
  int resolution = 1024;
  double window = 50.0;
  double dt = 1e-3;
  int sample_every = 100;
  std::string mode = "both";
};

struct EulerSimOpts {
  CommonOpts common;
  int m = 2;
  int k = 1;
  double u0 = 0.0;
  double eps = 1e-3;
  int grid_n = 256;    // 0 means automatic
  double dt = 2e-3;
  double t_max = 0.0;  // 0 means the full overlap window
  double gauge = 0.0;
  int sample_every = 50;
  double kappa = 0.0;
  double exponent_K = 0.0;
  int truncation = 64;
};

struct CopyBoundOpts {
  CommonOpts common;
  double eps0 = 0.0;
  double epsf = 0.0;
  double delta = 0.0;
  std::string kind = "final";
  double T = 0.0;  // required when kind = history
};

int run_growth_bounds(const GrowthBoundsOpts& opts);
int run_eigenmode(const EigenmodeOpts& opts);
int run_bound_curves(const BoundCurvesOpts& opts);
int run_scaling(const ScalingOpts& opts);
int run_kdv(const KdvOpts& opts);
int run_euler_sim(const EulerSimOpts& opts);
int run_copy_bound(const CopyBoundOpts& opts);

}  // namespace fluidbound::cli

#endif  // FLUIDBOUND_TOOLS_COMMANDS_HPP
