#ifndef FLUIDBOUND_FFT_ENGINE_HPP
#define FLUIDBOUND_FFT_ENGINE_HPP

// Internal FFTW wrapper. Plans are cached per size and created with
// FFTW_ESTIMATE so plan selection (and therefore rounding) is deterministic
// run to run. Execution copies through plan-owned aligned buffers under a
// lock; FFTW's multi-dimensional c2r transform destroys its input, which the
// copy also hides from callers.
//
// Conventions: forward transforms divide by the sample count, so a real
// field f(x) = sum_j c_j exp(i j.x) has coefficients c_j exactly; inverse
// transforms are unnormalized FFTW c2r.

#include "fluidbound/common.hpp"
#include "fluidbound/fields.hpp"

namespace fluidbound::detail {

// 2D transforms on ny*nx real arrays (row-major, y outer) and the r2c
// half-spectrum (ny rows, nx/2+1 columns).
void fft2_forward(const Grid2D& grid, const double* in, Complex* out);
void fft2_inverse(const Grid2D& grid, const Complex* in, double* out);

// 1D transforms on n real samples and n/2+1 coefficients.
void fft1_forward(int n, const double* in, Complex* out);
void fft1_inverse(int n, const Complex* in, double* out);

}  // namespace fluidbound::detail

#endif  // FLUIDBOUND_FFT_ENGINE_HPP
