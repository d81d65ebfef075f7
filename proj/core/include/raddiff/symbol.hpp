#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "raddiff/params.hpp"

namespace raddiff {

using Matrix4 = Eigen::Matrix4d;
using cplx = std::complex<double>;

/// Compressible-block symbol on (ρ̂, d̂, θ̂, ĵ₀): d/dt U + A(ϱ) U = 0.
Matrix4 assemble_symbol(const DerivedConstants& c, double rho_freq);

/// Complex symbol of the full linear operator on (ρ̂, û_1..û_d, θ̂, ĵ₀) at wavevector xi.
/// The viscous block is μ|ξ|²δ_ij + (μ+λ)ξ_iξ_j.
Eigen::MatrixXcd full_symbol(const DerivedConstants& c, std::span<const double> xi);

/// det(λI - A) = a0 λ⁴ - a1 λ³ + a2 λ² - a3 λ + a4. For a 4×4 matrix this equals
/// det(A - λI), so the alternating-sign coefficients carry over unchanged.
struct CharPoly {
    double a0 = 1.0, a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
    cplx eval(cplx lambda) const;
    cplx derivative(cplx lambda) const;
    /// Σ |a_i| |λ|^{4-i}, the natural scale of P(λ).
    double scale(cplx lambda) const;
};

CharPoly char_poly(const DerivedConstants& c, double rho_freq);

struct HurwitzChain {
    double A1 = 0.0, A2 = 0.0, A3 = 0.0, A4 = 0.0;
    double a21 = 0.0, a22 = 0.0, a23 = 0.0;
};

/// Leading principal minors of the Hurwitz matrix of P, plus the factor
/// coefficients with A2 = a21 ϱ⁶ + a22 ϱ⁴ + a23 ϱ².
HurwitzChain routh_hurwitz(const DerivedConstants& c, double rho_freq);

struct SpectrumReport {
    double rho_freq = 0.0;
    std::array<cplx, 4> eigenvalues{};  // sorted by (Re, Im)
    std::array<double, 4> residuals{};  // |P(λ)| / max((1+|λ|)⁴, Σ|a_i||λ|^{4-i})
    HurwitzChain hurwitz;
    double abscissa = 0.0;              // min Re λ
};

SpectrumReport eigenvalues(const DerivedConstants& c, double rho_freq, double tol = 1e-9);

/// Small-ϱ expansion coefficients. fast2 is the perturbation-theory value;
/// fast2_printed keeps the published coefficient for comparison.
struct ExpansionCoefficients {
    double pair_imag = 0.0;   // λ = ±i ϱ pair_imag + pair_real ϱ²
    double pair_real = 0.0;
    double slow = 0.0;        // λ = slow ϱ²
    double fast0 = 0.0;       // λ = fast0 + fast2 ϱ²
    double fast2 = 0.0;
    double fast2_printed = 0.0;
};

ExpansionCoefficients expansion_coefficients(const DerivedConstants& c, bool kappa_zero);

/// Truncated expansions {pair-, pair+, slow, fast}, unsorted. Valid for small ϱ (≲ 0.5).
std::array<cplx, 4> asymptotic_eigenvalues(const DerivedConstants& c, double rho_freq, bool kappa_zero,
                                           bool printed_fast_coefficient = false);

struct GapResult {
    double iota = 0.0;
    double argmin = 0.0;
};

/// Minimum spectral abscissa over n_grid geometrically spaced ϱ in [r, R].
GapResult spectral_gap(const DerivedConstants& c, double r, double R, int n_grid);

struct CoefficientDiscrepancy {
    std::string name;
    double printed = 0.0;
    double derived = 0.0;
};

/// (Θ̂, Ξ̂) = transform · (θ̂, ĵ₀) and the coefficients of the transformed system.
struct ModeChange {
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0, c6 = 0.0;
    double c5_const = 0.0;  // c5(ϱ) = c5_const + c5_quad ϱ²
    double c5_quad = 0.0;
    Eigen::Matrix2d transform;
    Eigen::Matrix2d inverse;
    /// Coefficients whose printed value disagrees with T A T⁻¹ beyond 1e-10.
    std::vector<CoefficientDiscrepancy> discrepancies;
    double max_conjugation_error = 0.0;  // after substituting the derived values

    double c5(double rho_freq) const { return c5_const + c5_quad * rho_freq * rho_freq; }
    /// Matrix of the transformed system on (ρ̂, d̂, Θ̂, Ξ̂) built from the printed coefficients.
    Matrix4 system_matrix(double rho_freq, double c_light, double gamma, double nu) const;
};

ModeChange mode_change(const DerivedConstants& c);

/// T A T⁻¹ with T = blockdiag(I, transform).
Matrix4 conjugated_symbol(const DerivedConstants& c, double rho_freq);

enum class PropagatorMethod { pade, eigen, automatic };

/// e^{-t A(ϱ)}. Padé scaling-and-squaring by default; `automatic` uses the
/// eigendecomposition when the eigenvector condition number is below 1e6.
/// With verify, the result is checked against E(t/2)² and a NumericalFailure is
/// raised on mismatch or overflow.
Matrix4 propagator(const DerivedConstants& c, double rho_freq, double t,
                   PropagatorMethod method = PropagatorMethod::pade, bool verify = true);

double spectral_norm(const Matrix4& m);

}  // namespace raddiff
