#include "raddiff/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "raddiff/model.hpp"

namespace raddiff {

void RunConfig::validate() const {
    params.validate();
    auto fail = [](const std::string& what) { throw ConstraintViolation("run configuration: " + what); };
    if (dim < 1 || dim > 3) fail("dim must be 1, 2 or 3");
    if (n < 4 || (n & (n - 1)) != 0) fail("N must be a power of two >= 4");
    if (!(box_length > 0.0)) fail("L_box > 0");
    if (!(dt > 0.0)) fail("dt > 0");
    if (!(t_end >= 0.0)) fail("t_end >= 0");
    if (!(sample_interval > 0.0)) fail("sample_interval > 0");
    if (!(init.amplitude >= 0.0 && init.amplitude <= 0.1)) fail("amplitude must lie in [0, 0.1]");
    if (!(init.width > 0.0)) fail("gaussian width > 0");
    if (init.band < 1) fail("random band >= 1");
}

double stability_budget(const Grid& grid, double u_sup) {
    return 0.5 * grid.spacing() / std::max(1.0, u_sup + std::sqrt(5.0 / 3.0));
}

namespace {

void clean_modes(const Grid& grid, SpectralArray& c, bool dealias) {
    c[0] = cplx{};
    for (std::size_t q = 1; q < grid.size(); ++q)
        if (grid.is_nyquist(q) || (dealias && !grid.in_dealias_band(q))) c[q] = cplx{};
}

double sup_abs(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

}  // namespace

SpectralState spectral_of(const StateField& state) {
    SpectralState u;
    for (std::size_t c = 0; c < state.n_components(); ++c) {
        const auto s = state.coeffs(c);
        u.emplace_back(s.begin(), s.end());
    }
    return u;
}

double sobolev_norm_total(const StateField& state, int order) {
    double s = 0.0;
    for (std::size_t c = 0; c < state.n_components(); ++c)
        for (int m = 0; m <= order; ++m) s += state.grid().gradient_norm_squared(state.coeffs(c), m);
    return std::sqrt(s);
}

double h4_norm(const StateField& state) { return sobolev_norm_total(state, 4); }

StateField init_perturbation(const RunConfig& config, std::shared_ptr<const Grid> grid) {
    const Grid& g = *grid;
    const std::size_t n = g.size();
    const int dim = g.dim();
    SpectralState u(static_cast<std::size_t>(dim) + 3, SpectralArray(n));
    if (config.init.profile == InitProfile::gaussian) {
        RealArray gauss(n);
        const double w = config.init.width, center = 0.5 * g.box_length();
        for (std::size_t q = 0; q < n; ++q) {
            double r2 = 0.0;
            for (int d = 0; d < dim; ++d) r2 += std::pow(g.position(q, d) - center, 2);
            gauss[q] = std::exp(-r2 / (2.0 * w * w));
        }
        const SpectralArray gh = g.forward(gauss);
        for (std::size_t q = 0; q < n; ++q) {
            u[0][q] = gh[q];
            u[static_cast<std::size_t>(dim) + 1][q] = 0.7 * gh[q];
            u[static_cast<std::size_t>(dim) + 2][q] = 0.3 * gh[q];
        }
        for (int d = 0; d < dim; ++d) {
            const SpectralArray grad = g.derivative(gh, d);
            for (std::size_t q = 0; q < n; ++q) u[static_cast<std::size_t>(1 + d)][q] = 0.5 * grad[q];
        }
    } else {
        std::mt19937_64 rng(config.init.seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (auto& comp : u) {
            SpectralArray raw(n);
            for (std::size_t q = 1; q < n; ++q)
                if (g.max_abs_mode(q) <= config.init.band) raw[q] = cplx(normal(rng), normal(rng));
            comp = g.forward(g.inverse(raw));  // real part, Hermitian coefficients
        }
    }
    for (auto& comp : u) clean_modes(g, comp, false);
    StateField s = StateField::from_coeffs(grid, u);
    const double norm = h4_norm(s);
    const double scale = norm > 0.0 ? config.init.amplitude / norm : 0.0;
    for (auto& comp : u)
        for (auto& v : comp) v *= scale;
    return StateField::from_coeffs(std::move(grid), std::move(u));
}

Integrator::Integrator(std::shared_ptr<const Grid> grid, PhysicalParams params, double dt, bool dealias, bool linear_only)
    : grid_(std::move(grid)), params_(std::move(params)), consts_(derive_constants(params_)), dt_(dt),
      dealias_(dealias), linear_only_(linear_only) {
    if (!(dt > 0.0)) throw ConstraintViolation("integrator: dt must be positive");
    const Grid& g = *grid_;
    long max_m2 = 0;
    for (std::size_t q = 0; q < g.size(); ++q) max_m2 = std::max(max_m2, g.mode_norm2(q));
    const std::size_t sz = static_cast<std::size_t>(max_m2) + 1;
    full_.assign(sz, Matrix4::Identity());
    half_.assign(sz, Matrix4::Identity());
    heat_full_.assign(sz, 1.0);
    heat_half_.assign(sz, 1.0);
    std::vector<char> seen(sz, 0);
    for (std::size_t q = 1; q < g.size(); ++q) {
        const auto m2 = static_cast<std::size_t>(g.mode_norm2(q));
        if (seen[m2]) continue;
        seen[m2] = 1;
        const double r = g.kabs(q);
        full_[m2] = propagator(consts_, r, dt_);
        half_[m2] = propagator(consts_, r, 0.5 * dt_);
        heat_full_[m2] = std::exp(-params_.mu * r * r * dt_);
        heat_half_[m2] = std::exp(-params_.mu * r * r * 0.5 * dt_);
    }
}

namespace {

// Applies a per-mode 4×4 matrix to (ρ̂, d̂, θ̂, ĵ₀) and a scalar to 𝒫û.
template <class MatrixAt, class ScalarAt>
SpectralState apply_modewise(const Grid& g, const SpectralState& u, MatrixAt matrix_at, ScalarAt scalar_at) {
    const int dim = g.dim();
    const std::size_t th = static_cast<std::size_t>(dim) + 1, jj = static_cast<std::size_t>(dim) + 2;
    SpectralState out(u.size(), SpectralArray(g.size()));
    const cplx I(0.0, 1.0);
    for (std::size_t q = 1; q < g.size(); ++q) {
        if (g.is_nyquist(q)) continue;
        const double k = g.kabs(q);
        std::array<double, 3> e{};
        cplx xi_u{};
        for (int d = 0; d < dim; ++d) {
            e[static_cast<std::size_t>(d)] = g.wavevector(q, d) / k;
            xi_u += e[static_cast<std::size_t>(d)] * u[static_cast<std::size_t>(1 + d)][q];
        }
        const Eigen::Vector4cd v(u[0][q], I * xi_u, u[th][q], u[jj][q]);
        const Eigen::Vector4cd w = matrix_at(q).template cast<cplx>() * v;
        const double s = scalar_at(q);
        out[0][q] = w(0);
        out[th][q] = w(2);
        out[jj][q] = w(3);
        for (int d = 0; d < dim; ++d) {
            const auto ud = static_cast<std::size_t>(1 + d);
            const cplx pu = u[ud][q] - e[static_cast<std::size_t>(d)] * xi_u;
            out[ud][q] = -I * e[static_cast<std::size_t>(d)] * w(1) + s * pu;
        }
    }
    return out;
}

void axpy(SpectralState& y, double a, const SpectralState& x) {
    for (std::size_t c = 0; c < y.size(); ++c)
        for (std::size_t q = 0; q < y[c].size(); ++q) y[c][q] += a * x[c][q];
}

}  // namespace

SpectralState Integrator::apply_cached(const std::vector<Matrix4>& cache, const std::vector<double>& heat,
                                       const SpectralState& u) const {
    const Grid& g = *grid_;
    return apply_modewise(
        g, u, [&](std::size_t q) -> const Matrix4& { return cache[static_cast<std::size_t>(g.mode_norm2(q))]; },
        [&](std::size_t q) { return heat[static_cast<std::size_t>(g.mode_norm2(q))]; });
}

SpectralState Integrator::propagate_linear(const SpectralState& u, double span) const {
    const Grid& g = *grid_;
    std::vector<Matrix4> cache(full_.size(), Matrix4::Identity());
    std::vector<double> heat(full_.size(), 1.0);
    std::vector<char> seen(full_.size(), 0);
    for (std::size_t q = 1; q < g.size(); ++q) {
        const auto m2 = static_cast<std::size_t>(g.mode_norm2(q));
        if (seen[m2]) continue;
        seen[m2] = 1;
        cache[m2] = propagator(consts_, g.kabs(q), span);
        heat[m2] = std::exp(-params_.mu * g.k2(q) * span);
    }
    return apply_cached(cache, heat, u);
}

SpectralState Integrator::apply_generator(const SpectralState& u) const {
    const Grid& g = *grid_;
    return apply_modewise(
        g, u, [&](std::size_t q) { return assemble_symbol(consts_, g.kabs(q)); },
        [&](std::size_t q) { return params_.mu * g.k2(q); });
}

SpectralState Integrator::sources(const SpectralState& u) const {
    const Grid& g = *grid_;
    SpectralState out(u.size(), SpectralArray(g.size()));
    if (linear_only_) return out;
    const StateField state = StateField::from_coeffs(grid_, u);
    const SourceField s = nonlinear_sources(state, params_, consts_);
    const int dim = g.dim();
    out[0] = g.forward(s.s1);
    for (int d = 0; d < dim; ++d) out[static_cast<std::size_t>(1 + d)] = g.forward(s.s2[static_cast<std::size_t>(d)]);
    out[static_cast<std::size_t>(dim) + 1] = g.forward(s.s3);
    out[static_cast<std::size_t>(dim) + 2] = g.forward(s.s4);
    for (auto& c : out) clean_modes(g, c, dealias_);
    return out;
}

SpectralState Integrator::step(const SpectralState& u, double t) const {
    const double h = dt_;
    SpectralState k1 = sources(u);
    if (forcing_) axpy(k1, 1.0, forcing_(t));
    SpectralState mid = u;
    axpy(mid, 0.5 * h, k1);
    mid = apply_cached(half_, heat_half_, mid);
    SpectralState k2 = sources(mid);
    if (forcing_) axpy(k2, 1.0, forcing_(t + 0.5 * h));
    SpectralState next = apply_cached(full_, heat_full_, u);
    axpy(next, h, apply_cached(half_, heat_half_, k2));
    return next;
}

StateField Integrator::step(const StateField& state, double t) const {
    StateField next = StateField::from_coeffs(grid_, step(spectral_of(state), t));
    const double min_rho = 1.0 + *std::min_element(next.values(StateField::rho).begin(), next.values(StateField::rho).end());
    const double min_th = 1.0 + *std::min_element(next.values(next.theta()).begin(), next.values(next.theta()).end());
    std::ostringstream os;
    if (!std::isfinite(min_rho) || !std::isfinite(min_th)) {
        os << "non-finite state after step at t = " << t + dt_;
        throw NumericalFailure(os.str());
    }
    if (!(min_rho > 0.0) || !(min_th > 0.0)) {
        os << "positivity lost after step at t = " << t + dt_ << ": min(1+rho) = " << min_rho
           << ", min(1+theta) = " << min_th;
        throw PositivityError(os.str());
    }
    return next;
}

Sample diagnose(const StateField& state, double t, const DerivedConstants& c) {
    const Grid& g = state.grid();
    Sample s;
    s.t = t;
    for (int k = 0; k <= 4; ++k) {
        double acc = 0.0;
        for (std::size_t comp = 0; comp < state.n_components(); ++comp) acc += g.gradient_norm_squared(state.coeffs(comp), k);
        s.gradient_norms[static_cast<std::size_t>(k)] = std::sqrt(acc);
    }
    s.h4 = h4_norm(state);
    const auto th = state.coeffs(state.theta());
    const auto j = state.coeffs(state.j0());
    double xi = 0.0, big = 0.0;
    for (std::size_t q = 0; q < g.size(); ++q) {
        xi += std::norm(c.gamma * th[q] - c.b_bar * j[q]);
        big += std::norm(3.0 * c.c_light * th[q] + 2.0 * j[q]);
    }
    s.theta_norm = g.l2_norm(th);
    s.xi_norm = std::sqrt(g.volume() * xi);
    s.big_theta_norm = std::sqrt(g.volume() * big);
    const auto rho = state.values(StateField::rho);
    const auto tv = state.values(state.theta());
    s.min_density = 1.0 + *std::min_element(rho.begin(), rho.end());
    s.min_temperature = 1.0 + *std::min_element(tv.begin(), tv.end());
    s.mass_mean = state.coeffs(StateField::rho)[0].real();
    for (int d = 0; d < g.dim(); ++d) s.u_sup = std::max(s.u_sup, sup_abs(state.values(state.u(d))));
    return s;
}

Trajectory run(const RunConfig& config, StateField* final_state) {
    config.validate();
    auto grid = std::make_shared<const Grid>(config.dim, config.n, config.box_length);
    StateField state = init_perturbation(config, grid);
    const DerivedConstants consts = derive_constants(config.params);
    Trajectory traj;
    traj.samples.push_back(diagnose(state, 0.0, consts));
    if (config.t_end == 0.0) {
        if (final_state) *final_state = state;
        return traj;
    }
    const double budget = stability_budget(*grid, traj.samples.front().u_sup);
    if (config.dt > budget) {
        std::ostringstream os;
        os << "run configuration: dt = " << config.dt << " exceeds the stability budget " << budget;
        throw ConstraintViolation(os.str());
    }
    const long steps = static_cast<long>(std::ceil(config.t_end / config.dt - 1e-9));
    const double dt = config.t_end / static_cast<double>(steps);
    const long every = std::max(1L, std::lround(config.sample_interval / dt));
    Integrator integ(grid, config.params, dt, config.dealias, config.linear_only);
    for (long i = 0; i < steps; ++i) {
        const double t = i * dt;
        try {
            state = integ.step(state, t);
        } catch (const Error& e) {
            throw RunAborted(std::string("run aborted: ") + e.what(), t, state, traj);
        }
        state.remove_mean();
        if ((i + 1) % every == 0 || i + 1 == steps) traj.samples.push_back(diagnose(state, (i + 1) * dt, consts));
    }
    if (final_state) *final_state = state;
    return traj;
}

}  // namespace raddiff
