#include "fft_engine.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace fluidbound::detail {
namespace {

// One plan pair plus the aligned buffers the plans were created on. Reused
// for every transform of the same size; the mutex in the cache serializes
// access, which keeps results bitwise reproducible regardless of caller
// threading.
struct PlanSet2D {
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
    std::size_t real_count = 0;
    std::size_t spec_count = 0;

    PlanSet2D(int nx, int ny) {
        real_count = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
        spec_count = static_cast<std::size_t>(ny) * (static_cast<std::size_t>(nx) / 2 + 1);
        real = fftw_alloc_real(real_count);
        spec = fftw_alloc_complex(spec_count);
        if (real == nullptr || spec == nullptr) {
            throw NumericalError("fft: allocation failed");
        }
        // FFTW orders dimensions slowest first; our arrays are y-major.
        forward = fftw_plan_dft_r2c_2d(ny, nx, real, spec, FFTW_ESTIMATE);
        inverse = fftw_plan_dft_c2r_2d(ny, nx, spec, real, FFTW_ESTIMATE);
        if (forward == nullptr || inverse == nullptr) {
            throw NumericalError("fft: planning failed");
        }
    }

    PlanSet2D(const PlanSet2D&) = delete;
    PlanSet2D& operator=(const PlanSet2D&) = delete;

    ~PlanSet2D() {
        if (forward != nullptr) fftw_destroy_plan(forward);
        if (inverse != nullptr) fftw_destroy_plan(inverse);
        fftw_free(real);
        fftw_free(spec);
    }
};

struct PlanSet1D {
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
    std::size_t real_count = 0;
    std::size_t spec_count = 0;

    explicit PlanSet1D(int n) {
        real_count = static_cast<std::size_t>(n);
        spec_count = static_cast<std::size_t>(n) / 2 + 1;
        real = fftw_alloc_real(real_count);
        spec = fftw_alloc_complex(spec_count);
        if (real == nullptr || spec == nullptr) {
            throw NumericalError("fft: allocation failed");
        }
        forward = fftw_plan_dft_r2c_1d(n, real, spec, FFTW_ESTIMATE);
        inverse = fftw_plan_dft_c2r_1d(n, spec, real, FFTW_ESTIMATE);
        if (forward == nullptr || inverse == nullptr) {
            throw NumericalError("fft: planning failed");
        }
    }

    PlanSet1D(const PlanSet1D&) = delete;
    PlanSet1D& operator=(const PlanSet1D&) = delete;

    ~PlanSet1D() {
        if (forward != nullptr) fftw_destroy_plan(forward);
        if (inverse != nullptr) fftw_destroy_plan(inverse);
        fftw_free(real);
        fftw_free(spec);
    }
};

std::mutex& cache_mutex() {
    static std::mutex m;
    return m;
}

PlanSet2D& plans_2d(int nx, int ny) {
    static std::map<std::pair<int, int>, std::unique_ptr<PlanSet2D>> cache;
    auto key = std::make_pair(nx, ny);
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, std::make_unique<PlanSet2D>(nx, ny)).first;
    }
    return *it->second;
}

PlanSet1D& plans_1d(int n) {
    static std::map<int, std::unique_ptr<PlanSet1D>> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, std::make_unique<PlanSet1D>(n)).first;
    }
    return *it->second;
}

}  // namespace

void fft2_forward(const Grid2D& grid, const double* in, Complex* out) {
    std::lock_guard<std::mutex> lock(cache_mutex());
    PlanSet2D& p = plans_2d(grid.nx, grid.ny);
    std::memcpy(p.real, in, p.real_count * sizeof(double));
    fftw_execute(p.forward);
    const double scale = 1.0 / static_cast<double>(p.real_count);
    const auto* src = reinterpret_cast<const Complex*>(p.spec);
    for (std::size_t i = 0; i < p.spec_count; ++i) {
        out[i] = src[i] * scale;
    }
}

void fft2_inverse(const Grid2D& grid, const Complex* in, double* out) {
    std::lock_guard<std::mutex> lock(cache_mutex());
    PlanSet2D& p = plans_2d(grid.nx, grid.ny);
    std::memcpy(p.spec, in, p.spec_count * sizeof(Complex));
    fftw_execute(p.inverse);
    std::memcpy(out, p.real, p.real_count * sizeof(double));
}

void fft1_forward(int n, const double* in, Complex* out) {
    std::lock_guard<std::mutex> lock(cache_mutex());
    PlanSet1D& p = plans_1d(n);
    std::memcpy(p.real, in, p.real_count * sizeof(double));
    fftw_execute(p.forward);
    const double scale = 1.0 / static_cast<double>(n);
    const auto* src = reinterpret_cast<const Complex*>(p.spec);
    for (std::size_t i = 0; i < p.spec_count; ++i) {
        out[i] = src[i] * scale;
    }
}

void fft1_inverse(int n, const Complex* in, double* out) {
    std::lock_guard<std::mutex> lock(cache_mutex());
    PlanSet1D& p = plans_1d(n);
    std::memcpy(p.spec, in, p.spec_count * sizeof(Complex));
    fftw_execute(p.inverse);
    std::memcpy(out, p.real, p.real_count * sizeof(double));
}

}  // namespace fluidbound::detail
