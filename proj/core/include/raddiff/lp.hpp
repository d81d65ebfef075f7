#pragma once

#include <climits>
#include <memory>
#include <optional>
#include <vector>

#include "raddiff/grid.hpp"
#include "raddiff/params.hpp"

namespace raddiff {

/// Frequency thresholds of the energy method: k₁ (high band), R₀ = 2^{k₁+1},
/// r₀ (low band radius) and k₀ = ⌊log₂ r₀⌋ - 1.
struct Thresholds {
    int k0 = 0;
    int k1 = 0;
    double r0 = 0.0;
    double R0 = 0.0;
};

Thresholds compute_thresholds(const DerivedConstants& c);

/// Sharp dyadic shells 2^{k-1/2} <= |ξ| < 2^{k+1/2} on a grid.
class Decomposition {
public:
    /// Shells only; long/short windows are unavailable.
    static Decomposition shells(std::shared_ptr<const Grid> grid);
    /// Shells plus thresholds. Throws ResolutionError when the per-axis Nyquist
    /// wavenumber is below R₀.
    static Decomposition build(std::shared_ptr<const Grid> grid, const DerivedConstants& c);

    const Grid& grid() const noexcept { return *grid_; }
    int k_min() const noexcept { return k_min_; }
    int k_max() const noexcept { return k_max_; }
    bool has_thresholds() const noexcept { return thresholds_.has_value(); }
    /// Throws DomainError if built without thresholds.
    const Thresholds& thresholds() const;

    static int shell_index(double kabs);
    static double shell_lower(int k);
    static double shell_upper(int k);

    /// Shell of a grid mode; INT_MIN for the mean mode.
    int shell_of(std::size_t idx) const noexcept { return shell_[idx]; }
    const std::vector<std::size_t>& modes_in_shell(int k) const;

    /// Δ̇_k f. An index outside [k_min, k_max] yields zeros and sets *out_of_range.
    SpectralArray project(std::span<const cplx> f, int k, bool* out_of_range = nullptr) const;

private:
    explicit Decomposition(std::shared_ptr<const Grid> grid);
    std::shared_ptr<const Grid> grid_;
    std::vector<int> shell_;
    std::vector<std::vector<std::size_t>> members_;
    int k_min_ = 0;
    int k_max_ = -1;
    std::optional<Thresholds> thresholds_;
};

enum class Window { all, long_wave, short_wave };

/// (Σ_{k∈window} 2^{2sk} ||Δ̇_k f||²)^{1/2}.
double besov_norm(const Decomposition& dec, std::span<const cplx> f, double s, Window window = Window::all);
/// Homogeneous Sobolev norm (L^d Σ |ξ|^{2s} |f̂|²)^{1/2}.
double sobolev_norm(const Grid& grid, std::span<const cplx> f, double s);

/// Δ̇_k(u·∇f) - u·∇Δ̇_k f with 2/3-rule products. Throws DomainError when an
/// input has content outside the dealiasing band.
SpectralArray commutator(const Decomposition& dec, const std::vector<SpectralArray>& u, std::span<const cplx> f, int k);

/// Both sides of the commutator estimate for shell k: lhs = ∫[Δ̇_k,u·∇]f Δ̇_k g and
/// the bracket multiplying C on the right.
struct CommutatorTerms {
    double lhs = 0.0;
    double rhs = 0.0;
};

CommutatorTerms commutator_terms(const Decomposition& dec, const std::vector<SpectralArray>& u, std::span<const cplx> f,
                                 std::span<const cplx> g, int k);

}  // namespace raddiff
