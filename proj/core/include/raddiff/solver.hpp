#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "raddiff/error.hpp"
#include "raddiff/params.hpp"
#include "raddiff/state.hpp"
#include "raddiff/symbol.hpp"

namespace raddiff {

enum class InitProfile { gaussian, random_band };

struct InitSpec {
    InitProfile profile = InitProfile::gaussian;
    double amplitude = 1e-3;  // H⁴ norm of the perturbation after normalization
    double width = 0.5;       // gaussian standard deviation
    std::uint64_t seed = 1;
    int band = 4;             // random-band: max |m_i|
};

struct RunConfig {
    PhysicalParams params;
    int dim = 2;
    int n = 64;
    double box_length = 2.0 * std::numbers::pi;
    double dt = 0.025;
    double t_end = 50.0;
    double sample_interval = 1.0;
    bool dealias = true;
    bool linear_only = false;
    InitSpec init;

    void validate() const;
};

/// 0.5 Δx / max(1, sup|u| + √(5/3)).
double stability_budget(const Grid& grid, double u_sup);

StateField init_perturbation(const RunConfig& config, std::shared_ptr<const Grid> grid);

/// (Σ_{m<=order} Σ_fields ||∇^m f||²)^{1/2}; order 4 gives the H⁴ norm.
double sobolev_norm_total(const StateField& state, int order);
double h4_norm(const StateField& state);

/// Spectral state layout shared by the integrator: ρ̂, û_1..û_d, θ̂, ĵ₀.
using SpectralState = std::vector<SpectralArray>;

SpectralState spectral_of(const StateField& state);

/// Exponential midpoint integrator: the linear flow is exact per mode (4×4
/// propagator on (ρ̂, d̂, θ̂, ĵ₀), heat factor on 𝒫û) and the nonlinear
/// sources enter through the Duhamel midpoint rule.
class Integrator {
public:
    using Forcing = std::function<SpectralState(double t)>;

    Integrator(std::shared_ptr<const Grid> grid, PhysicalParams params, double dt, bool dealias = true,
               bool linear_only = false);

    double dt() const noexcept { return dt_; }
    const Grid& grid() const noexcept { return *grid_; }
    const DerivedConstants& constants() const noexcept { return consts_; }
    void set_forcing(Forcing f) { forcing_ = std::move(f); }

    /// One step from time t. Throws PositivityError or NumericalFailure on loss of
    /// positivity or non-finite values.
    StateField step(const StateField& state, double t) const;
    SpectralState step(const SpectralState& u, double t) const;

    /// Exact linear flow over time span (any value, not cached).
    SpectralState propagate_linear(const SpectralState& u, double span) const;
    /// Generator of the linear flow applied to u (A per mode, μ|ξ|² on 𝒫û).
    SpectralState apply_generator(const SpectralState& u) const;
    /// Dealiased nonlinear sources (zero when linear_only).
    SpectralState sources(const SpectralState& u) const;

private:
    SpectralState apply_cached(const std::vector<Matrix4>& cache, const std::vector<double>& heat, const SpectralState& u) const;
    std::shared_ptr<const Grid> grid_;
    PhysicalParams params_;
    DerivedConstants consts_;
    double dt_;
    bool dealias_;
    bool linear_only_;
    Forcing forcing_;
    std::vector<Matrix4> full_;   // indexed by Σm²
    std::vector<Matrix4> half_;
    std::vector<double> heat_full_;
    std::vector<double> heat_half_;
};

struct Sample {
    double t = 0.0;
    std::array<double, 5> gradient_norms{};  // ||∇^k (ρ̃,ũ,θ̃,j₀)||, k = 0..4
    double h4 = 0.0;
    double theta_norm = 0.0;
    double xi_norm = 0.0;
    double big_theta_norm = 0.0;
    double min_density = 0.0;      // min(1+ρ̃)
    double min_temperature = 0.0;  // min(1+θ̃)
    double mass_mean = 0.0;        // spatial mean of ρ̃
    double u_sup = 0.0;
};

struct Trajectory {
    std::vector<Sample> samples;
};

Sample diagnose(const StateField& state, double t, const DerivedConstants& c);

/// Raised by run() when a step fails; carries the abort time, the last valid
/// state and the samples recorded so far.
class RunAborted : public NumericalFailure {
public:
    RunAborted(const std::string& what, double time, StateField last, Trajectory partial)
        : NumericalFailure(what), time_(time), last_(std::move(last)), partial_(std::move(partial)) {}
    double time() const noexcept { return time_; }
    const StateField& last_state() const noexcept { return last_; }
    const Trajectory& partial() const noexcept { return partial_; }

private:
    double time_;
    StateField last_;
    Trajectory partial_;
};

/// Integrates to t_end with the largest uniform step <= config.dt that divides t_end.
Trajectory run(const RunConfig& config, StateField* final_state = nullptr);

// Whole-space linear semigroup norms by radial quadrature.

enum class SemigroupQuantity {
    full,          // (ρ, u, θ, j₀)
    damped,        // Ξ = γθ - b j₀
    fluid_rate,    // ∂_t(ρ, u)
    radiation_rate,  // ∂_t(θ, j₀)
    temperature,   // θ
};

/// Radial profile U₀(ξ) = f(|ξ|) (v₀ + solenoidal part) with f(ϱ) = exp(-width² ϱ²/2).
struct SemigroupProfile {
    std::array<double, 4> v0{1.0, 0.0, 0.0, 0.0};
    double width = 1.0;
    double solenoidal = 0.0;  // amplitude of a divergence-free velocity component
};

/// ||∇^m q(e^{-t𝔸}U₀)||_{L²(ℝ³)} for each t.
std::vector<double> semigroup_norms(const DerivedConstants& c, const SemigroupProfile& profile, int m,
                                    std::span<const double> times,
                                    SemigroupQuantity quantity = SemigroupQuantity::full, double rel_tol = 1e-10);

}  // namespace raddiff
