#pragma once

#include <functional>
#include <string>

namespace raddiff {

/// Radiative equilibrium law b(θ) with derivative and an optional
/// cancellation-free remainder b(1+x) - b(1) - b'(1) x.
struct BLaw {
    std::string name;
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    std::function<double(double)> second_derivative;
    std::function<double(double)> remainder;  // may be empty

    /// b(θ) = θ^p. Integer p uses a binomial sum for the remainder.
    static BLaw power(double exponent);
};

struct PhysicalParams {
    double mu = 1.0;
    double lambda = 0.0;
    double kappa = 1.0;
    double c_light = 1.0;
    double l_rad = 1.0;
    double sigma_a = 1.0;
    double sigma_s = 1.0;
    BLaw b_law = BLaw::power(4.0);

    /// Throws ConstraintViolation naming the first failed inequality.
    void validate() const;
};

/// Constants of the linearized system. The first five are the derived
/// quantities; the rest are carried along so the symbol is self-contained.
struct DerivedConstants {
    double nu = 0.0;       // λ + 2μ
    double gamma = 0.0;    // ℒ σ_a b'(1)
    double a_diff = 0.0;   // 𝒞 / (3ℒ(σ_a+σ_s))
    double b_bar = 0.0;    // ℒ σ_a
    double b_eq = 0.0;     // b(1)
    double kappa = 0.0;
    double c_light = 0.0;
    double mu = 0.0;
    double lambda = 0.0;
};

PhysicalParams reference_params();

DerivedConstants derive_constants(const PhysicalParams& params);

/// b(1+θ̃) - b(1) - b'(1)θ̃; throws DomainError when 1+θ̃ <= 0.
double eval_b_remainder(const PhysicalParams& params, double theta_pert);

}  // namespace raddiff
