#include "raddiff/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "raddiff/error.hpp"

namespace raddiff {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

int mode_of(int i, int n) { return i <= n / 2 - (n % 2 == 0 ? 1 : 0) ? i : i - n; }

}  // namespace

struct Grid::Plans {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    Plans(int dim, int n) {
        std::array<int, 3> dims{n, n, n};
        const std::size_t total = static_cast<std::size_t>(std::pow(n, dim));
        fftw_complex* a = fftw_alloc_complex(total);
        fftw_complex* b = fftw_alloc_complex(total);
        std::lock_guard<std::mutex> lock(planner_mutex());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fwd = fftw_plan_dft(dim, dims.data(), a, b, FFTW_FORWARD, flags);
        bwd = fftw_plan_dft(dim, dims.data(), a, b, FFTW_BACKWARD, flags);
        fftw_free(a);
        fftw_free(b);
        if (!fwd || !bwd) throw NumericalFailure("FFTW plan creation failed");
    }
    ~Plans() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    Plans(const Plans&) = delete;
    Plans& operator=(const Plans&) = delete;
};

Grid::Grid(int dim, int n, double box_length)
    : dim_(dim), n_(n), box_length_(box_length) {
    if (dim < 1 || dim > 3) throw ConstraintViolation("grid dimension must be 1, 2 or 3");
    if (n < 2 || (n & (n - 1)) != 0) throw ConstraintViolation("grid N must be a power of two >= 2");
    if (!(box_length > 0.0)) throw ConstraintViolation("box length must be positive");
    dk_ = 2.0 * std::numbers::pi / box_length;
    size_ = 1;
    for (int d = 0; d < dim; ++d) size_ *= static_cast<std::size_t>(n);
    modes_.resize(size_);
    m2_.resize(size_);
    kabs_.resize(size_);
    for (std::size_t i = 0; i < size_; ++i) {
        std::size_t rest = i;
        std::array<int, 3> m{0, 0, 0};
        for (int d = dim_ - 1; d >= 0; --d) {
            m[static_cast<std::size_t>(d)] = mode_of(static_cast<int>(rest % static_cast<std::size_t>(n_)), n_);
            rest /= static_cast<std::size_t>(n_);
        }
        modes_[i] = m;
        long s = 0;
        for (int d = 0; d < dim_; ++d) s += static_cast<long>(m[d]) * m[d];
        m2_[i] = s;
        kabs_[i] = dk_ * std::sqrt(static_cast<double>(s));
    }
    plans_ = std::make_shared<const Plans>(dim, n);
}

double Grid::volume() const noexcept { return std::pow(box_length_, dim_); }

double Grid::position(std::size_t idx, int axis) const noexcept {
    for (int d = dim_ - 1; d > axis; --d) idx /= static_cast<std::size_t>(n_);
    return spacing() * static_cast<double>(idx % static_cast<std::size_t>(n_));
}

bool Grid::is_nyquist(std::size_t idx) const noexcept {
    const auto m = mode(idx);
    for (int d = 0; d < dim_; ++d)
        if (m[static_cast<std::size_t>(d)] == -n_ / 2) return true;
    return false;
}

bool Grid::in_dealias_band(std::size_t idx) const noexcept { return 3 * max_abs_mode(idx) < n_; }

int Grid::max_abs_mode(std::size_t idx) const noexcept {
    const auto m = mode(idx);
    int r = 0;
    for (int d = 0; d < dim_; ++d) r = std::max(r, std::abs(m[static_cast<std::size_t>(d)]));
    return r;
}

SpectralArray Grid::forward(std::span<const double> values) const {
    if (values.size() != size_) throw DomainError("forward transform: size mismatch");
    SpectralArray in(values.begin(), values.end());
    SpectralArray out(size_);
    fftw_execute_dft(plans_->fwd, reinterpret_cast<fftw_complex*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = 1.0 / static_cast<double>(size_);
    for (auto& c : out) c *= scale;
    return out;
}

RealArray Grid::inverse(std::span<const cplx> coeffs) const {
    if (coeffs.size() != size_) throw DomainError("inverse transform: size mismatch");
    SpectralArray in(coeffs.begin(), coeffs.end());
    SpectralArray out(size_);
    fftw_execute_dft(plans_->bwd, reinterpret_cast<fftw_complex*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
    RealArray r(size_);
    std::transform(out.begin(), out.end(), r.begin(), [](const cplx& c) { return c.real(); });
    return r;
}

SpectralArray Grid::derivative(std::span<const cplx> coeffs, int axis) const {
    SpectralArray out(size_);
    for (std::size_t i = 0; i < size_; ++i) {
        const int m = mode(i)[static_cast<std::size_t>(axis)];
        out[i] = (m == -n_ / 2) ? cplx{} : cplx(0.0, dk_ * m) * coeffs[i];
    }
    return out;
}

SpectralArray Grid::laplacian(std::span<const cplx> coeffs) const {
    SpectralArray out(size_);
    for (std::size_t i = 0; i < size_; ++i) out[i] = -k2(i) * coeffs[i];
    return out;
}

double Grid::l2_norm_squared(std::span<const cplx> coeffs) const {
    double s = 0.0;
    for (const auto& c : coeffs) s += std::norm(c);
    return volume() * s;
}

double Grid::l2_norm(std::span<const cplx> coeffs) const { return std::sqrt(l2_norm_squared(coeffs)); }

double Grid::inner(std::span<const cplx> f, std::span<const cplx> g) const {
    double s = 0.0;
    for (std::size_t i = 0; i < size_; ++i) s += (f[i] * std::conj(g[i])).real();
    return volume() * s;
}

double Grid::gradient_norm_squared(std::span<const cplx> coeffs, int order) const {
    double s = 0.0;
    for (std::size_t i = 0; i < size_; ++i) s += std::pow(k2(i), order) * std::norm(coeffs[i]);
    return volume() * s;
}

SpectralArray Grid::embed(std::span<const cplx> coeffs, const Grid& target) const {
    if (target.dim() != dim_ || target.box_length() != box_length_)
        throw DomainError("embed: grids must share dimension and box");
    SpectralArray out(target.size());
    const int tn = target.n();
    for (std::size_t i = 0; i < size_; ++i) {
        if (coeffs[i] == cplx{}) continue;
        const auto m = mode(i);
        std::size_t j = 0;
        bool fits = true;
        for (int d = 0; d < dim_; ++d) {
            const int md = m[static_cast<std::size_t>(d)];
            if (md >= tn / 2 || md < -tn / 2) {
                fits = false;
                break;
            }
            j = j * static_cast<std::size_t>(tn) + static_cast<std::size_t>(md < 0 ? md + tn : md);
        }
        if (fits) out[j] = coeffs[i];
    }
    return out;
}

double sup_norm(const Grid& grid, std::span<const cplx> coeffs, int n_fine) {
    const Grid fine(grid.dim(), std::max(n_fine, grid.n()), grid.box_length());
    const RealArray v = fine.inverse(grid.embed(coeffs, fine));
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

}  // namespace raddiff
