#pragma once

#include <vector>

#include "raddiff/params.hpp"
#include "raddiff/state.hpp"

namespace raddiff {

/// Nonlinear right-hand sides of the perturbation system, sampled on the grid.
/// s1 = -(s11 + s12) with s11 = u·∇ρ̃ and s12 = ρ̃ div u.
struct SourceField {
    RealArray s1;
    std::vector<RealArray> s2;
    RealArray s3;
    RealArray s4;
    RealArray s11;
    RealArray s12;
};

/// Requires a valid spectral cache (derivatives are spectral). Throws
/// PositivityError naming the grid point if 1+ρ̃ <= 0 or 1+θ̃ <= 0.
SourceField nonlinear_sources(const StateField& state, const PhysicalParams& params, const DerivedConstants& consts);

/// Potential part d = Λ⁻¹div u and solenoidal part 𝒫u, both spectral.
struct HelmholtzParts {
    SpectralArray d;
    std::vector<SpectralArray> pu;
};

HelmholtzParts helmholtz_split(const Grid& grid, const std::vector<SpectralArray>& u);
HelmholtzParts helmholtz_split(const StateField& state);

/// u = -Λ⁻¹∇d + 𝒫u.
std::vector<SpectralArray> velocity_from_parts(const Grid& grid, const HelmholtzParts& parts);

/// Evaluates -Λ⁻¹∇d - Λ⁻¹div(Λ⁻¹curl u) with (curl u)_ij = ∂_j u_i - ∂_i u_j.
std::vector<SpectralArray> helmholtz_reconstruct(const Grid& grid, const SpectralArray& d,
                                                 const std::vector<SpectralArray>& u);

}  // namespace raddiff
