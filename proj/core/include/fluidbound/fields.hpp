#ifndef FLUIDBOUND_FIELDS_HPP
#define FLUIDBOUND_FIELDS_HPP

// Grids on the 2-torus [0,2pi)^2 and the real line, spectral transforms,
// L^p norms, inner products, and the spectral Poisson solve.
//
// Conventions. A real field f on the torus is represented by Fourier
// coefficients c_j with f(x) = sum_j c_j exp(i j.x); the storage is the
// half-spectrum r2c layout (ny rows of nx/2+1 columns), Hermitian symmetry
// c(-jx,-jy) = conj(c(jx,jy)) being structural. Parseval:
// ||f||_L2 = 2pi * sqrt(sum_j |c_j|^2) with the full-lattice sum.

#include <array>
#include <vector>

#include "fluidbound/common.hpp"

namespace fluidbound {

struct Grid2D {
  int nx = 0;
  int ny = 0;

  Grid2D() = default;
  Grid2D(int nx_, int ny_);  // validates powers of two >= 16

  bool operator==(const Grid2D&) const = default;
  int spectral_cols() const { return nx / 2 + 1; }
  std::size_t spectral_size() const {
    return static_cast<std::size_t>(ny) * spectral_cols();
  }
  std::size_t physical_size() const {
    return static_cast<std::size_t>(ny) * nx;
  }
  // Signed frequency of a storage row: rows 0..ny/2 map to jy = row,
  // rows ny/2+1..ny-1 map to jy = row - ny.
  int row_freq(int row) const { return row <= ny / 2 ? row : row - ny; }
};

class SpectralField2D {
 public:
  SpectralField2D() = default;
  explicit SpectralField2D(Grid2D grid);

  static SpectralField2D from_samples(const std::vector<double>& samples,
                                      Grid2D grid);
  std::vector<double> to_samples() const;

  const Grid2D& grid() const { return grid_; }

  // Raw half-spectrum storage access (row = y index, col = jx in 0..nx/2).
  Complex& at(int row, int col);
  const Complex& at(int row, int col) const;
  const std::vector<Complex>& raw() const { return c_; }
  std::vector<Complex>& raw() { return c_; }

  // Signed-wavenumber lookup with Hermitian completion for jx < 0.
  Complex coeff(int jx, int jy) const;
  // Signed-wavenumber write; jx < 0 is stored through the conjugate mirror.
  void set_coeff(int jx, int jy, Complex value);

  double mean() const;          // value of the (0,0) mode
  double l2_norm() const;       // 2pi * l2 norm of coefficients (Parseval)
  double max_abs_coeff() const;

  SpectralField2D dx() const;   // multiply by i*jx
  SpectralField2D dy() const;   // multiply by i*jy
  // Zero all modes with |jx| > cutoff or |jy| > cutoff (2/3-rule helper).
  void truncate_above(int cutoff);
  bool all_finite() const;

  SpectralField2D& operator+=(const SpectralField2D& other);
  SpectralField2D& operator-=(const SpectralField2D& other);
  SpectralField2D& operator*=(double scale);

 private:
  Grid2D grid_;
  std::vector<Complex> c_;
};

struct VectorField2D {
  SpectralField2D x;
  SpectralField2D y;

  VectorField2D() = default;
  explicit VectorField2D(Grid2D grid) : x(grid), y(grid) {}

  double l2_norm() const;
  // max_j |jx ux + jy uy| over all modes (divergence-free check).
  double max_divergence() const;
  bool all_finite() const { return x.all_finite() && y.all_finite(); }

  VectorField2D& operator+=(const VectorField2D& o);
  VectorField2D& operator-=(const VectorField2D& o);
  VectorField2D& operator*=(double s);
};

struct Grid1D {
  double x_min = 0.0;
  double x_max = 0.0;
  int n = 0;

  Grid1D() = default;
  Grid1D(double x_min_, double x_max_, int n_);  // validates x_max > x_min, n >= 64

  double length() const { return x_max - x_min; }
  double dx() const { return length() / n; }
  double node(int i) const { return x_min + length() * i / n; }
};

// L^p norm of the field; p in {1, 2, 4} or p_infinity. p = 2 is evaluated
// spectrally (Parseval); the others by collocation quadrature, which is
// exact for trigonometric polynomials below the Nyquist limit.
inline constexpr int p_infinity = -1;
double lp_norm(const SpectralField2D& field, int p);
double lp_norm(const std::vector<double>& samples, Grid2D grid, int p);

// Unnormalized L2 inner products int a.b over the torus.
double inner_product(const SpectralField2D& a, const SpectralField2D& b);
double inner_product(const VectorField2D& a, const VectorField2D& b);
// int a.b / (||a|| ||b||); throws on zero-norm input.
double inner_product_normalized(const VectorField2D& a, const VectorField2D& b);

// Solve laplacian(phi) = rhs spectrally. rhs must have zero mean
// (|(0,0) coefficient| <= 1e-12); the solution's (0,0) mode is set to
// `gauge` (a constant field of value g has L2 norm 2pi*g).
SpectralField2D poisson_solve(const SpectralField2D& rhs, double gauge);

}  // namespace fluidbound

#endif  // FLUIDBOUND_FIELDS_HPP
