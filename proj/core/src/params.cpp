#include "raddiff/params.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "raddiff/error.hpp"

namespace raddiff {

BLaw BLaw::power(double p) {
    BLaw law;
    std::ostringstream os;
    os << "theta^" << p;
    law.name = os.str();
    law.value = [p](double t) { return std::pow(t, p); };
    law.derivative = [p](double t) { return p * std::pow(t, p - 1.0); };
    law.second_derivative = [p](double t) { return p * (p - 1.0) * std::pow(t, p - 2.0); };
    const bool integral = p >= 0.0 && std::floor(p) == p && p <= 64.0;
    if (integral) {
        const int n = static_cast<int>(p);
        std::vector<double> coeff(static_cast<std::size_t>(n) + 1, 0.0);
        double binom = 1.0;
        for (int k = 0; k <= n; ++k) {
            coeff[static_cast<std::size_t>(k)] = binom;
            binom = binom * (n - k) / (k + 1);
        }
        law.remainder = [coeff](double x) {
            // sum_{k>=2} C(n,k) x^k
            double acc = 0.0;
            for (std::size_t k = coeff.size() - 1; k >= 2; --k) acc = acc * x + coeff[k];
            return acc * x * x;
        };
    } else {
        law.remainder = [p](double x) {
            if (std::abs(x) < 1e-3) {
                // series through x^5
                double c = 1.0, acc = 0.0, xp = x;
                for (int k = 1; k <= 5; ++k) {
                    c *= (p - k + 1) / k;
                    if (k >= 2) acc += c * xp;
                    xp *= x;
                }
                return acc;
            }
            return std::expm1(p * std::log1p(x)) - p * x;
        };
    }
    return law;
}

PhysicalParams reference_params() { return PhysicalParams{}; }

void PhysicalParams::validate() const {
    auto fail = [](const std::string& what) { throw ConstraintViolation("parameter constraint violated: " + what); };
    if (!(mu > 0.0)) fail("mu > 0");
    if (!(lambda + 2.0 * mu > 0.0)) fail("nu = lambda + 2 mu > 0");
    if (!(kappa >= 0.0)) fail("kappa >= 0");
    if (!(c_light > 0.0)) fail("c_light > 0");
    if (!(l_rad > 0.0)) fail("l_rad > 0");
    if (!(sigma_a > 0.0)) fail("sigma_a > 0");
    if (!(sigma_s >= 0.0)) fail("sigma_s >= 0");
    if (!b_law.value || !b_law.derivative) fail("b_law provides b and b'");
    if (!(b_law.derivative(1.0) > 0.0)) fail("b'(1) > 0");
}

DerivedConstants derive_constants(const PhysicalParams& p) {
    p.validate();
    DerivedConstants c;
    c.nu = p.lambda + 2.0 * p.mu;
    c.gamma = p.l_rad * p.sigma_a * p.b_law.derivative(1.0);
    c.a_diff = p.c_light / (3.0 * p.l_rad * (p.sigma_a + p.sigma_s));
    c.b_bar = p.l_rad * p.sigma_a;
    c.b_eq = p.b_law.value(1.0);
    c.kappa = p.kappa;
    c.c_light = p.c_light;
    c.mu = p.mu;
    c.lambda = p.lambda;
    return c;
}

double eval_b_remainder(const PhysicalParams& params, double theta_pert) {
    if (!(1.0 + theta_pert > 0.0)) {
        std::ostringstream os;
        os << "temperature positivity: 1 + theta_pert = " << 1.0 + theta_pert << " <= 0";
        throw DomainError(os.str());
    }
    const BLaw& law = params.b_law;
    if (law.remainder) return law.remainder(theta_pert);
    return law.value(1.0 + theta_pert) - law.value(1.0) - law.derivative(1.0) * theta_pert;
}

}  // namespace raddiff
