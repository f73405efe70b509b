#ifndef FLUIDBOUND_COMMON_HPP
#define FLUIDBOUND_COMMON_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace fluidbound {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr const char* kVersion = "1.0.0";

using Complex = std::complex<double>;

// Invalid inputs or violated preconditions (CLI exit code 2).
struct InvalidArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Filesystem failures (CLI exit code 3).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failures: NaN/overflow, CFL violation, failed brackets,
// non-convergent iterations (CLI exit code 4).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fluidbound

#endif  // FLUIDBOUND_COMMON_HPP
