#pragma once

#include <memory>
#include <string>
#include <vector>

#include "raddiff/grid.hpp"

namespace raddiff {

/// Perturbation (ρ̃, ũ, θ̃, j₀) on a periodic grid, as physical samples plus
/// cached spectral coefficients. Component order: rho, u_0..u_{dim-1}, theta, j0.
class StateField {
public:
    explicit StateField(std::shared_ptr<const Grid> grid);
    static StateField from_coeffs(std::shared_ptr<const Grid> grid, std::vector<SpectralArray> coeffs);

    const Grid& grid() const noexcept { return *grid_; }
    const std::shared_ptr<const Grid>& grid_ptr() const noexcept { return grid_; }
    int dim() const noexcept { return grid_->dim(); }
    std::size_t n_components() const noexcept { return values_.size(); }

    static constexpr std::size_t rho = 0;
    std::size_t u(int axis) const noexcept { return 1 + static_cast<std::size_t>(axis); }
    std::size_t theta() const noexcept { return static_cast<std::size_t>(dim()) + 1; }
    std::size_t j0() const noexcept { return static_cast<std::size_t>(dim()) + 2; }

    std::span<const double> values(std::size_t comp) const { return values_.at(comp); }
    /// Mutable physical access; marks the spectral cache stale.
    std::span<double> values_mut(std::size_t comp);

    /// Throws NumericalFailure if the spectral cache is stale.
    std::span<const cplx> coeffs(std::size_t comp) const;
    void set_coeffs(std::size_t comp, SpectralArray c);

    bool spectral_valid() const noexcept { return spectral_valid_; }
    void refresh_spectral();

    /// Zero the mean mode of every component (both representations).
    void remove_mean();
    /// Largest |mean| over components, from the spectral cache.
    double max_abs_mean() const;

    std::vector<std::string> component_names() const;

private:
    std::shared_ptr<const Grid> grid_;
    std::vector<RealArray> values_;
    std::vector<SpectralArray> coeffs_;
    bool spectral_valid_ = true;
};

}  // namespace raddiff
