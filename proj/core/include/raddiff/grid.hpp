#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace raddiff {

using cplx = std::complex<double>;
using RealArray = std::vector<double>;
using SpectralArray = std::vector<cplx>;

/// Uniform periodic grid on [0, L)^dim with N points per axis and its
/// FFT plans. Spectral coefficients are normalized so that
/// f(x) = sum_m f̂_m exp(i ξ_m·x), hence ||f||² = L^dim sum |f̂_m|².
class Grid {
public:
    Grid(int dim, int n, double box_length);

    int dim() const noexcept { return dim_; }
    int n() const noexcept { return n_; }
    double box_length() const noexcept { return box_length_; }
    std::size_t size() const noexcept { return size_; }
    double spacing() const noexcept { return box_length_ / n_; }
    double dk() const noexcept { return dk_; }
    double volume() const noexcept;
    /// Largest per-axis wavenumber, (N/2)·dk.
    double nyquist() const noexcept { return 0.5 * n_ * dk_; }

    const std::array<int, 3>& mode(std::size_t idx) const noexcept { return modes_[idx]; }
    double wavevector(std::size_t idx, int axis) const noexcept { return dk_ * mode(idx)[static_cast<std::size_t>(axis)]; }
    long mode_norm2(std::size_t idx) const noexcept { return m2_[idx]; }
    double k2(std::size_t idx) const noexcept { return dk_ * dk_ * static_cast<double>(m2_[idx]); }
    double kabs(std::size_t idx) const noexcept { return kabs_[idx]; }
    double position(std::size_t idx, int axis) const noexcept;

    /// Any index equal to -N/2 (the unpaired mode of an even grid).
    bool is_nyquist(std::size_t idx) const noexcept;
    /// Inside the 2/3-rule band: 3|m_i| < N on every axis.
    bool in_dealias_band(std::size_t idx) const noexcept;
    /// Largest |m_i| over axes.
    int max_abs_mode(std::size_t idx) const noexcept;

    SpectralArray forward(std::span<const double> values) const;
    RealArray inverse(std::span<const cplx> coeffs) const;

    /// Spectral partial derivative i ξ_axis f̂; zero on Nyquist modes.
    SpectralArray derivative(std::span<const cplx> coeffs, int axis) const;
    SpectralArray laplacian(std::span<const cplx> coeffs) const;

    double l2_norm(std::span<const cplx> coeffs) const;
    double l2_norm_squared(std::span<const cplx> coeffs) const;
    /// ∫ f g dx for real fields given by their coefficients.
    double inner(std::span<const cplx> f, std::span<const cplx> g) const;
    /// ||∇^m f||² = L^dim sum |ξ|^{2m}|f̂|².
    double gradient_norm_squared(std::span<const cplx> coeffs, int order) const;

    /// Copy coefficients onto another grid with the same box, matching integer modes.
    SpectralArray embed(std::span<const cplx> coeffs, const Grid& target) const;

private:
    struct Plans;
    int dim_;
    int n_;
    double box_length_;
    double dk_;
    std::size_t size_;
    std::vector<std::array<int, 3>> modes_;
    std::vector<long> m2_;
    std::vector<double> kabs_;
    std::shared_ptr<const Plans> plans_;
};

/// sup |f| estimated on a refined grid of n_fine points per axis by spectral interpolation.
double sup_norm(const Grid& grid, std::span<const cplx> coeffs, int n_fine = 128);

}  // namespace raddiff
