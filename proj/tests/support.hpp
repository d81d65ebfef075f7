#pragma once

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "raddiff/grid.hpp"
#include "raddiff/params.hpp"
#include "raddiff/solver.hpp"
#include "raddiff/state.hpp"

namespace raddiff::testing {

inline PhysicalParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> pos(0.2, 3.0);
    PhysicalParams p;
    p.mu = pos(rng);
    p.lambda = std::uniform_real_distribution<double>(-0.6, 1.0)(rng) * p.mu;  // ν = λ + 2μ > 0
    p.kappa = pos(rng);
    p.c_light = pos(rng);
    p.l_rad = pos(rng);
    p.sigma_a = pos(rng);
    p.sigma_s = std::uniform_real_distribution<double>(0.0, 2.0)(rng);
    p.b_law = BLaw::power(std::uniform_int_distribution<int>(2, 5)(rng));
    return p;
}

/// Real zero-mean field with random coefficients on max|m_i| <= band.
/// `decay` weights each mode by |ξ|^{-decay}.
inline SpectralArray random_field(const Grid& g, int band, std::mt19937_64& rng, double decay = 0.0) {
    std::normal_distribution<double> n01(0.0, 1.0);
    SpectralArray raw(g.size());
    for (std::size_t q = 1; q < g.size(); ++q) {
        if (g.max_abs_mode(q) > band || g.is_nyquist(q)) continue;
        const double w = decay == 0.0 ? 1.0 : std::pow(g.kabs(q), -decay);
        raw[q] = w * cplx(n01(rng), n01(rng));
    }
    // Round trip enforces Hermitian symmetry; drop the roundoff it leaves elsewhere.
    SpectralArray out = g.forward(g.inverse(raw));
    for (std::size_t q = 0; q < g.size(); ++q)
        if (raw[q] == cplx{}) out[q] = cplx{};
    return out;
}

inline StateField random_state(std::shared_ptr<const Grid> grid, int band, double amplitude, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<SpectralArray> c;
    for (int i = 0; i < grid->dim() + 3; ++i) {
        SpectralArray f = random_field(*grid, band, rng);
        const double norm = grid->l2_norm(f);
        for (auto& v : f) v *= amplitude / norm;
        c.push_back(std::move(f));
    }
    return StateField::from_coeffs(std::move(grid), std::move(c));
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

inline double state_distance(const SpectralState& a, const SpectralState& b) {
    double m = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c)
        for (std::size_t q = 0; q < a[c].size(); ++q) m = std::max(m, std::abs(a[c][q] - b[c][q]));
    return m;
}

inline double state_size(const SpectralState& a) {
    double m = 0.0;
    for (const auto& c : a)
        for (const auto& v : c) m = std::max(m, std::abs(v));
    return m;
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Forced problem with exact solution U*(t) = e^{-t} U*(0); the forcing is
/// ∂_t U* + 𝔸U* - S(U*).
struct Manufactured {
    SpectralState profile;
    const Integrator* integ;

    SpectralState exact(double t) const {
        SpectralState u = profile;
        for (auto& c : u)
            for (auto& v : c) v *= std::exp(-t);
        return u;
    }
    SpectralState forcing(double t) const {
        SpectralState u = exact(t);
        SpectralState gen = integ->apply_generator(u);
        SpectralState src = integ->sources(u);
        for (std::size_t c = 0; c < u.size(); ++c)
            for (std::size_t q = 0; q < u[c].size(); ++q) gen[c][q] += -u[c][q] - src[c][q];
        return gen;
    }
};

/// Error at t_end of the forced run with step dt against the exact solution.
inline double manufactured_error(std::shared_ptr<const Grid> grid, const PhysicalParams& p, const SpectralState& profile,
                                 double dt, double t_end) {
    Integrator integ(grid, p, dt);
    Manufactured ms{profile, &integ};
    integ.set_forcing([&ms](double t) { return ms.forcing(t); });
    SpectralState u = ms.exact(0.0);
    const long steps = std::lround(t_end / dt);
    for (long i = 0; i < steps; ++i) u = integ.step(u, i * dt);
    return state_distance(u, ms.exact(t_end));
}

/// Periodic spectral-collocation differentiation matrix on N points of [0, L).
inline Eigen::MatrixXd collocation_derivative(int n, double box_length) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    const double h = 2.0 * M_PI / n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) d(i, j) = 0.5 * ((i - j) % 2 == 0 ? 1.0 : -1.0) / std::tan(0.5 * (i - j) * h);
    return d * (2.0 * M_PI / box_length);
}

}  // namespace raddiff::testing
