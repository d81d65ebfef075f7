#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include "raddiff/error.hpp"
#include "raddiff/solver.hpp"
#include "raddiff/symbol.hpp"

namespace raddiff {

namespace {

struct Panel {
    double a, b, fa, fm, fb;
    double value;  // Richardson-corrected Simpson on the two halves
    double error;
    double fl, fr;  // quarter-point samples
};

template <class F>
Panel make_panel(const F& f, double a, double b, double fa, double fm, double fb) {
    const double m = 0.5 * (a + b);
    const double fl = f(0.5 * (a + m)), fr = f(0.5 * (m + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double halves = (b - a) / 12.0 * (fa + 4.0 * fl + 2.0 * fm + 4.0 * fr + fb);
    const double delta = halves - whole;
    return {a, b, fa, fm, fb, halves + delta / 15.0, std::abs(delta) / 15.0, fl, fr};
}

struct ByError {
    bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

// Globally adaptive Simpson on [0, r_max]: the panel with the largest error
// estimate is bisected until the summed error meets the relative tolerance.
// Initial panels are geometric around the diffusive scale.
template <class F>
double radial_integral(const F& f, double scale, double r_max, double rel_tol) {
    std::vector<double> nodes{0.0};
    for (double r = scale * std::ldexp(1.0, -24); r < r_max; r *= 2.0) nodes.push_back(r);
    nodes.push_back(r_max);
    long evals = 0;
    auto g = [&](double r) {
        ++evals;
        return f(r);
    };
    std::priority_queue<Panel, std::vector<Panel>, ByError> queue;
    double total = 0.0, error = 0.0, magnitude = 0.0;
    double f_prev = g(nodes[0]);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double fb = g(nodes[i + 1]);
        const Panel p = make_panel(g, nodes[i], nodes[i + 1], f_prev, g(0.5 * (nodes[i] + nodes[i + 1])), fb);
        f_prev = fb;
        total += p.value;
        error += p.error;
        magnitude += std::abs(p.value);
        queue.push(p);
    }
    // Summation roundoff bounds what any refinement can achieve.
    auto target = [&] { return std::max(rel_tol * std::abs(total), 1e-14 * magnitude); };
    while (error > target() && !queue.empty()) {
        if (evals > 4'000'000) {
            std::ostringstream os;
            os << "semigroup quadrature did not converge: estimated relative error "
               << error / std::max(std::abs(total), 1e-300) << " (requested " << rel_tol << ")";
            throw ConvergenceError(os.str());
        }
        const Panel p = queue.top();
        queue.pop();
        const double m = 0.5 * (p.a + p.b);
        if (!(m > p.a && m < p.b)) continue;  // cannot bisect further
        const Panel left = make_panel(g, p.a, m, p.fa, p.fl, p.fm);
        const Panel right = make_panel(g, m, p.b, p.fm, p.fr, p.fb);
        total += left.value + right.value - p.value;
        error += left.error + right.error - p.error;
        magnitude += std::abs(left.value) + std::abs(right.value) - std::abs(p.value);
        queue.push(left);
        queue.push(right);
    }
    return total;
}

}  // namespace

std::vector<double> semigroup_norms(const DerivedConstants& c, const SemigroupProfile& profile, int m,
                                    std::span<const double> times, SemigroupQuantity quantity, double rel_tol) {
    if (m < 0 || m > 4) throw DomainError("semigroup_norms: derivative order must lie in 0..4");
    if (!(profile.width > 0.0)) throw DomainError("semigroup_norms: profile width must be positive");
    const Eigen::Vector4d v0(profile.v0[0], profile.v0[1], profile.v0[2], profile.v0[3]);
    const double w = profile.width;
    const bool rate = quantity == SemigroupQuantity::fluid_rate || quantity == SemigroupQuantity::radiation_rate;
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        if (!(t >= 0.0)) throw DomainError("semigroup_norms: times must be non-negative");
        double integral = 0.0;
        if (v0.squaredNorm() > 0.0) {
            auto integrand = [&](double r) -> double {
                if (r == 0.0) return 0.0;
                const double f = std::exp(-0.5 * w * w * r * r);
                if (f == 0.0) return 0.0;
                Eigen::Vector4d v = propagator(c, r, t, PropagatorMethod::pade, false) * v0;
                if (rate) v = -(assemble_symbol(c, r) * v);
                double q = 0.0;
                switch (quantity) {
                    case SemigroupQuantity::full: q = v.squaredNorm(); break;
                    case SemigroupQuantity::damped: q = std::pow(c.gamma * v(2) - c.b_bar * v(3), 2); break;
                    case SemigroupQuantity::fluid_rate: q = v(0) * v(0) + v(1) * v(1); break;
                    case SemigroupQuantity::radiation_rate: q = v(2) * v(2) + v(3) * v(3); break;
                    case SemigroupQuantity::temperature: q = v(2) * v(2); break;
                }
                return std::pow(r, 2 * m + 2) * f * f * q;
            };
            const double scale = 1.0 / (w * std::sqrt(1.0 + t));
            const double r_max = std::sqrt(2.0 * (40.0 + 2.0 * m)) / w;
            integral = radial_integral(integrand, scale, r_max, rel_tol);
        }
        double total = 4.0 * std::numbers::pi * integral;
        const bool carries_velocity = quantity == SemigroupQuantity::full || quantity == SemigroupQuantity::fluid_rate;
        if (profile.solenoidal != 0.0 && carries_velocity) {
            const double alpha = 2.0 * c.mu * t + w * w;
            const double s2 = profile.solenoidal * profile.solenoidal;
            if (quantity == SemigroupQuantity::full)
                total += 4.0 * std::numbers::pi * s2 * std::tgamma(m + 1.5) / (2.0 * std::pow(alpha, m + 1.5));
            else
                total += 4.0 * std::numbers::pi * s2 * c.mu * c.mu * std::tgamma(m + 3.5) /
                         (2.0 * std::pow(alpha, m + 3.5));
        }
        out.push_back(std::sqrt(total));
    }
    return out;
}

}  // namespace raddiff
