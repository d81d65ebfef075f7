#pragma once

#include <array>

#include "raddiff/lp.hpp"
#include "raddiff/params.hpp"
#include "raddiff/state.hpp"
#include "raddiff/symbol.hpp"

namespace raddiff {

struct AnalysisConstants {
    double beta1 = 0.0;
    double beta2 = 0.0;
    double beta3 = 0.0;
    Thresholds thresholds;
    ModeChange modes;
};

/// Largest β's allowed by their constraints. For κ = 0 the κ/2 candidate of β₁ is dropped.
AnalysisConstants select_constants(const DerivedConstants& c);

/// Weight of the Λρ_k d_k cross term in L_{h,k}: `printed` uses -β₁, `consistent`
/// uses -2β₁, which is what makes H_{h,k} a Lyapunov functional of the linear flow.
enum class CrossWeight { printed, consistent };

struct HighFrequencyValues {
    double L = 0.0;
    double H = 0.0;
};

/// Spectral inputs for one state: ρ̂, d̂, θ̂, ĵ₀ and the solenoidal velocity.
struct CompressibleView {
    std::span<const cplx> rho, d, theta, j0;
    std::vector<std::span<const cplx>> pu;
};

HighFrequencyValues high_freq_functional(const Decomposition& dec, const CompressibleView& v, int k,
                                         const AnalysisConstants& ac, const DerivedConstants& c,
                                         CrossWeight weight = CrossWeight::consistent);
/// Splits the velocity and evaluates the functional. Requires k > k₁.
HighFrequencyValues high_freq_functional(const StateField& state, const Decomposition& dec, int k,
                                         const AnalysisConstants& ac, const DerivedConstants& c,
                                         CrossWeight weight = CrossWeight::consistent);

/// L_l = v^H Q v for one Fourier mode v = (ρ̂, d̂, θ̂, ĵ₀). Requires |ξ| <= R₀.
double low_freq_functional(const std::array<cplx, 4>& mode, double xi_abs, const AnalysisConstants& ac,
                           const DerivedConstants& c);

/// Real symmetric Q with L_l = v^H Q v.
Matrix4 low_freq_form(double xi_abs, const AnalysisConstants& ac, const DerivedConstants& c);
/// Per-mode form of H_{h,k} on (ρ̂, d̂, θ̂, ĵ₀), without volume factor. The solenoidal
/// part contributes (1 + |ξ|²)|𝒫û|².
Matrix4 high_freq_form(double xi_abs, const AnalysisConstants& ac, const DerivedConstants& c, CrossWeight weight);

/// Θ = 3𝒞θ + 2j₀ and Ξ = γθ - b j₀, pointwise.
struct DampedModes {
    RealArray Theta;
    RealArray Xi;
};

DampedModes damped_mode(const StateField& state, const DerivedConstants& c);
/// Inverse of the mode change: θ = (bΘ + 2Ξ)/D, j₀ = (γΘ - 3𝒞Ξ)/D with D = 3𝒞b + 2γ.
std::pair<RealArray, RealArray> undo_damped_mode(const DampedModes& m, const DerivedConstants& c);

/// Measured equivalence bounds: lower·reference <= functional <= upper·reference.
struct EquivalenceBounds {
    double lower = 0.0;
    double upper = 0.0;
    /// Smallest C with C⁻¹ reference <= functional <= C reference.
    double constant() const;
};

/// H_{h,k} against ||(ρ_k,u_k,θ_k,j₀ₖ)||² (1 + 2^{2k}) over the grid modes of shell k.
EquivalenceBounds high_equivalence(const Decomposition& dec, int k, const AnalysisConstants& ac, const DerivedConstants& c,
                                   CrossWeight weight = CrossWeight::consistent);
/// L_l against |ρ̂|² + |d̂|² + |θ̂|² + |ĵ₀|² over the grid modes with 0 < |ξ| <= R₀.
EquivalenceBounds low_equivalence(const Grid& grid, const AnalysisConstants& ac, const DerivedConstants& c);

}  // namespace raddiff
