#include "fluidbound/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "fft_engine.hpp"

namespace fluidbound {
namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Parseval weight of a half-spectrum column: interior columns stand for a
// conjugate pair of lattice modes, the jx = 0 and jx = nx/2 columns for one.
double column_weight(int col, int nx) {
    return (col == 0 || col == nx / 2) ? 1.0 : 2.0;
}

}  // namespace

Grid2D::Grid2D(int nx_, int ny_) : nx(nx_), ny(ny_) {
    if (!is_pow2(nx) || !is_pow2(ny) || nx < 16 || ny < 16) {
        throw InvalidArgumentError("Grid2D: nx and ny must be powers of two >= 16");
    }
}

SpectralField2D::SpectralField2D(Grid2D grid)
    : grid_(grid), c_(grid.spectral_size(), Complex(0.0, 0.0)) {
    if (grid.nx == 0) {
        throw InvalidArgumentError("SpectralField2D: default grid");
    }
}

SpectralField2D SpectralField2D::from_samples(const std::vector<double>& samples,
                                              Grid2D grid) {
    if (samples.size() != grid.physical_size()) {
        throw InvalidArgumentError("from_samples: sample count does not match grid");
    }
    SpectralField2D field(grid);
    detail::fft2_forward(grid, samples.data(), field.c_.data());
    return field;
}

std::vector<double> SpectralField2D::to_samples() const {
    std::vector<double> samples(grid_.physical_size());
    detail::fft2_inverse(grid_, c_.data(), samples.data());
    return samples;
}

Complex& SpectralField2D::at(int row, int col) {
    return c_[static_cast<std::size_t>(row) * grid_.spectral_cols() + col];
}

const Complex& SpectralField2D::at(int row, int col) const {
    return c_[static_cast<std::size_t>(row) * grid_.spectral_cols() + col];
}

Complex SpectralField2D::coeff(int jx, int jy) const {
    if (std::abs(jx) > grid_.nx / 2 || std::abs(jy) > grid_.ny / 2) {
        throw InvalidArgumentError("coeff: wavenumber outside grid");
    }
    if (jx < 0) {
        return std::conj(coeff(-jx, -jy));
    }
    const int row = jy >= 0 ? jy : jy + grid_.ny;
    return at(row, jx);
}

void SpectralField2D::set_coeff(int jx, int jy, Complex value) {
    if (std::abs(jx) > grid_.nx / 2 || std::abs(jy) > grid_.ny / 2) {
        throw InvalidArgumentError("set_coeff: wavenumber outside grid");
    }
    if (jx < 0) {
        set_coeff(-jx, -jy, std::conj(value));
        return;
    }
    const int row = jy >= 0 ? jy : jy + grid_.ny;
    at(row, jx) = value;
}

double SpectralField2D::mean() const { return c_[0].real(); }

double SpectralField2D::l2_norm() const {
    double sum = 0.0;
    const int cols = grid_.spectral_cols();
    for (int row = 0; row < grid_.ny; ++row) {
        for (int col = 0; col < cols; ++col) {
            sum += column_weight(col, grid_.nx) * std::norm(at(row, col));
        }
    }
    return 2.0 * kPi * std::sqrt(sum);
}

double SpectralField2D::max_abs_coeff() const {
    double m = 0.0;
    for (const Complex& v : c_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

SpectralField2D SpectralField2D::dx() const {
    SpectralField2D out(grid_);
    const int cols = grid_.spectral_cols();
    for (int row = 0; row < grid_.ny; ++row) {
        for (int col = 0; col < cols; ++col) {
            // The Nyquist column has no signed counterpart; its derivative
            // is dropped, as usual for pseudo-spectral differentiation.
            const double jx = col == grid_.nx / 2 ? 0.0 : col;
            out.at(row, col) = Complex(0.0, jx) * at(row, col);
        }
    }
    return out;
}

SpectralField2D SpectralField2D::dy() const {
    SpectralField2D out(grid_);
    const int cols = grid_.spectral_cols();
    for (int row = 0; row < grid_.ny; ++row) {
        const double jy = row == grid_.ny / 2 ? 0.0 : grid_.row_freq(row);
        for (int col = 0; col < cols; ++col) {
            out.at(row, col) = Complex(0.0, jy) * at(row, col);
        }
    }
    return out;
}

void SpectralField2D::truncate_above(int cutoff) {
    const int cols = grid_.spectral_cols();
    for (int row = 0; row < grid_.ny; ++row) {
        const int jy = grid_.row_freq(row);
        for (int col = 0; col < cols; ++col) {
            if (col > cutoff || std::abs(jy) > cutoff) {
                at(row, col) = Complex(0.0, 0.0);
            }
        }
    }
}

bool SpectralField2D::all_finite() const {
    for (const Complex& v : c_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            return false;
        }
    }
    return true;
}

SpectralField2D& SpectralField2D::operator+=(const SpectralField2D& other) {
    if (!(grid_ == other.grid_)) {
        throw InvalidArgumentError("field +=: grid mismatch");
    }
    for (std::size_t i = 0; i < c_.size(); ++i) {
        c_[i] += other.c_[i];
    }
    return *this;
}

SpectralField2D& SpectralField2D::operator-=(const SpectralField2D& other) {
    if (!(grid_ == other.grid_)) {
        throw InvalidArgumentError("field -=: grid mismatch");
    }
    for (std::size_t i = 0; i < c_.size(); ++i) {
        c_[i] -= other.c_[i];
    }
    return *this;
}

SpectralField2D& SpectralField2D::operator*=(double scale) {
    for (Complex& v : c_) {
        v *= scale;
    }
    return *this;
}

double VectorField2D::l2_norm() const {
    const double nx2 = x.l2_norm();
    const double ny2 = y.l2_norm();
    return std::sqrt(nx2 * nx2 + ny2 * ny2);
}

double VectorField2D::max_divergence() const {
    const Grid2D& g = x.grid();
    double worst = 0.0;
    const int cols = g.spectral_cols();
    for (int row = 0; row < g.ny; ++row) {
        const double jy = row == g.ny / 2 ? 0.0 : g.row_freq(row);
        for (int col = 0; col < cols; ++col) {
            const double jx = col == g.nx / 2 ? 0.0 : col;
            worst = std::max(worst, std::abs(jx * x.at(row, col) + jy * y.at(row, col)));
        }
    }
    return worst;
}

VectorField2D& VectorField2D::operator+=(const VectorField2D& o) {
    x += o.x;
    y += o.y;
    return *this;
}

VectorField2D& VectorField2D::operator-=(const VectorField2D& o) {
    x -= o.x;
    y -= o.y;
    return *this;
}

VectorField2D& VectorField2D::operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
}

Grid1D::Grid1D(double x_min_, double x_max_, int n_)
    : x_min(x_min_), x_max(x_max_), n(n_) {
    if (!(x_max > x_min)) {
        throw InvalidArgumentError("Grid1D: x_max must exceed x_min");
    }
    if (n < 64) {
        throw InvalidArgumentError("Grid1D: need at least 64 nodes");
    }
}

double lp_norm(const SpectralField2D& field, int p) {
    if (p == 2) {
        return field.l2_norm();
    }
    return lp_norm(field.to_samples(), field.grid(), p);
}

double lp_norm(const std::vector<double>& samples, Grid2D grid, int p) {
    if (samples.size() != grid.physical_size()) {
        throw InvalidArgumentError("lp_norm: sample count does not match grid");
    }
    if (p == p_infinity) {
        double m = 0.0;
        for (double v : samples) {
            m = std::max(m, std::abs(v));
        }
        return m;
    }
    if (p != 1 && p != 2 && p != 4) {
        throw InvalidArgumentError("lp_norm: p must be 1, 2, 4, or p_infinity");
    }
    const double cell = (2.0 * kPi / grid.nx) * (2.0 * kPi / grid.ny);
    double sum = 0.0;
    for (double v : samples) {
        const double a = std::abs(v);
        sum += p == 1 ? a : (p == 2 ? a * a : a * a * a * a);
    }
    sum *= cell;
    return p == 1 ? sum : (p == 2 ? std::sqrt(sum) : std::sqrt(std::sqrt(sum)));
}

double inner_product(const SpectralField2D& a, const SpectralField2D& b) {
    if (!(a.grid() == b.grid())) {
        throw InvalidArgumentError("inner_product: grid mismatch");
    }
    const Grid2D& g = a.grid();
    const int cols = g.spectral_cols();
    double sum = 0.0;
    for (int row = 0; row < g.ny; ++row) {
        for (int col = 0; col < cols; ++col) {
            sum += column_weight(col, g.nx) *
                   (std::conj(a.at(row, col)) * b.at(row, col)).real();
        }
    }
    return 4.0 * kPi * kPi * sum;
}

double inner_product(const VectorField2D& a, const VectorField2D& b) {
    return inner_product(a.x, b.x) + inner_product(a.y, b.y);
}

double inner_product_normalized(const VectorField2D& a, const VectorField2D& b) {
    const double na = a.l2_norm();
    const double nb = b.l2_norm();
    if (na == 0.0 || nb == 0.0) {
        throw InvalidArgumentError("inner_product_normalized: zero-norm field");
    }
    return inner_product(a, b) / (na * nb);
}

SpectralField2D poisson_solve(const SpectralField2D& rhs, double gauge) {
    if (std::abs(rhs.raw()[0]) > 1e-12) {
        throw InvalidArgumentError("poisson_solve: right-hand side must have zero mean");
    }
    const Grid2D& g = rhs.grid();
    SpectralField2D phi(g);
    const int cols = g.spectral_cols();
    for (int row = 0; row < g.ny; ++row) {
        const double jy = g.row_freq(row);
        for (int col = 0; col < cols; ++col) {
            if (row == 0 && col == 0) {
                continue;
            }
            const double k2 = static_cast<double>(col) * col + jy * jy;
            phi.at(row, col) = -rhs.at(row, col) / k2;
        }
    }
    phi.at(0, 0) = Complex(gauge, 0.0);
    return phi;
}

}  // namespace fluidbound
