#include "raddiff/model.hpp"

#include <cmath>
#include <sstream>

#include "raddiff/error.hpp"

namespace raddiff {

namespace {

std::string location(const Grid& grid, std::size_t idx) {
    std::ostringstream os;
    os << "grid point " << idx << " (x = (";
    for (int d = 0; d < grid.dim(); ++d) os << (d ? ", " : "") << grid.position(idx, d);
    os << "))";
    return os.str();
}

void check_mean(const Grid& grid, const std::vector<SpectralArray>& u) {
    double scale = 0.0, mean = 0.0;
    for (const auto& c : u) {
        mean = std::max(mean, std::abs(c[0]));
        for (const auto& v : c) scale = std::max(scale, std::abs(v));
    }
    (void)grid;
    if (mean > 1e-13 * std::max(1.0, scale)) {
        std::ostringstream os;
        os << "helmholtz split: velocity has a nonzero mean mode (|u_0| = " << mean << ")";
        throw DomainError(os.str());
    }
}

}  // namespace

SourceField nonlinear_sources(const StateField& state, const PhysicalParams& params, const DerivedConstants& c) {
    const Grid& grid = state.grid();
    const int dim = grid.dim();
    const std::size_t n = grid.size();
    const auto du = static_cast<std::size_t>(dim);

    const auto rho_h = state.coeffs(StateField::rho);
    const auto theta_h = state.coeffs(state.theta());
    const auto j_h = state.coeffs(state.j0());

    auto phys_derivative = [&](std::span<const cplx> f, int axis) { return grid.inverse(grid.derivative(f, axis)); };

    std::vector<RealArray> grad_rho(du), grad_theta(du), grad_j(du), lap_u(du), grad_div(du);
    std::vector<std::vector<RealArray>> grad_u(du, std::vector<RealArray>(du));  // grad_u[i][j] = ∂_j u_i
    SpectralArray div_h(n);
    for (int i = 0; i < dim; ++i) {
        const auto ui = state.coeffs(state.u(i));
        for (int j = 0; j < dim; ++j) grad_u[i][j] = phys_derivative(ui, j);
        const auto dui = grid.derivative(ui, i);
        for (std::size_t q = 0; q < n; ++q) div_h[q] += dui[q];
        lap_u[i] = grid.inverse(grid.laplacian(ui));
        grad_rho[i] = phys_derivative(rho_h, i);
        grad_theta[i] = phys_derivative(theta_h, i);
        grad_j[i] = phys_derivative(j_h, i);
    }
    for (int i = 0; i < dim; ++i) grad_div[i] = phys_derivative(div_h, i);
    const RealArray lap_theta = grid.inverse(grid.laplacian(theta_h));

    const auto rho = state.values(StateField::rho);
    const auto theta = state.values(state.theta());
    const auto j0 = state.values(state.j0());

    SourceField s;
    s.s1.resize(n);
    s.s2.assign(du, RealArray(n));
    s.s3.resize(n);
    s.s4.resize(n);
    s.s11.resize(n);
    s.s12.resize(n);

    const double mu = params.mu, lam = params.lambda, kappa = params.kappa;
    const double cl = params.c_light, bbar = c.b_bar, gamma = c.gamma;
    std::vector<double> uq(du), divT(du);

    for (std::size_t q = 0; q < n; ++q) {
        const double r = rho[q];
        if (!(1.0 + r > 0.0)) throw PositivityError("density positivity lost: 1 + rho = " + std::to_string(1.0 + r) + " at " + location(grid, q));
        if (!(1.0 + theta[q] > 0.0)) throw PositivityError("temperature positivity lost: 1 + theta = " + std::to_string(1.0 + theta[q]) + " at " + location(grid, q));
        const double h = 1.0 / (1.0 + r);
        const double g = h - 1.0;
        double div = 0.0;
        for (std::size_t i = 0; i < du; ++i) {
            uq[i] = state.values(state.u(static_cast<int>(i)))[q];
            div += grad_u[i][i][q];
        }
        for (std::size_t i = 0; i < du; ++i) divT[i] = mu * lap_u[i][q] + (mu + lam) * grad_div[i][q];

        double s11 = 0.0, u_grad_theta = 0.0, u_grad_j = 0.0, heating = 0.0;
        for (std::size_t i = 0; i < du; ++i) {
            s11 += uq[i] * grad_rho[i][q];
            u_grad_theta += uq[i] * grad_theta[i][q];
            u_grad_j += uq[i] * grad_j[i][q];
            for (std::size_t j = 0; j < du; ++j) {
                const double tij = mu * (grad_u[i][j][q] + grad_u[j][i][q]) + (i == j ? lam * div : 0.0);
                heating += tij * grad_u[i][j][q];
            }
        }
        s.s11[q] = s11;
        s.s12[q] = r * div;
        s.s1[q] = -(s.s11[q] + s.s12[q]);

        for (std::size_t i = 0; i < du; ++i) {
            double adv = 0.0;
            for (std::size_t j = 0; j < du; ++j) adv += uq[j] * grad_u[i][j][q];
            s.s2[i][q] = -adv - g * grad_rho[i][q] - h * theta[q] * grad_rho[i][q] + g * divT[i]
                         - g * grad_j[i][q] / (3.0 * cl);
        }

        const double rem = eval_b_remainder(params, theta[q]);
        s.s3[q] = -(2.0 / 3.0) * theta[q] * div
                  + (2.0 / 3.0) * kappa * g * lap_theta[q]
                  - (2.0 / 3.0) * bbar * h * rem
                  - (2.0 / 3.0) * g * (gamma * theta[q] - bbar * j0[q])
                  + (2.0 / 3.0) * h * heating
                  + 2.0 / (9.0 * cl) * h * u_grad_j
                  - u_grad_theta;
        s.s4[q] = cl * bbar * rem;
    }
    return s;
}

HelmholtzParts helmholtz_split(const Grid& grid, const std::vector<SpectralArray>& u) {
    if (u.size() != static_cast<std::size_t>(grid.dim())) throw DomainError("helmholtz split: wrong number of velocity components");
    check_mean(grid, u);
    const std::size_t n = grid.size();
    HelmholtzParts parts;
    parts.d.assign(n, cplx{});
    parts.pu.assign(u.size(), SpectralArray(n));
    for (std::size_t q = 1; q < n; ++q) {
        const double k = grid.kabs(q);
        cplx xi_u{};
        for (int i = 0; i < grid.dim(); ++i) xi_u += grid.wavevector(q, i) * u[i][q];
        parts.d[q] = cplx(0.0, 1.0) * xi_u / k;
        for (int i = 0; i < grid.dim(); ++i) parts.pu[i][q] = u[i][q] - grid.wavevector(q, i) * xi_u / (k * k);
    }
    return parts;
}

HelmholtzParts helmholtz_split(const StateField& state) {
    std::vector<SpectralArray> u;
    for (int i = 0; i < state.dim(); ++i) {
        const auto c = state.coeffs(state.u(i));
        u.emplace_back(c.begin(), c.end());
    }
    return helmholtz_split(state.grid(), u);
}

std::vector<SpectralArray> velocity_from_parts(const Grid& grid, const HelmholtzParts& parts) {
    const std::size_t n = grid.size();
    std::vector<SpectralArray> u(parts.pu);
    for (std::size_t q = 1; q < n; ++q) {
        const double k = grid.kabs(q);
        for (int i = 0; i < grid.dim(); ++i) u[i][q] += cplx(0.0, -grid.wavevector(q, i) / k) * parts.d[q];
    }
    return u;
}

std::vector<SpectralArray> helmholtz_reconstruct(const Grid& grid, const SpectralArray& d, const std::vector<SpectralArray>& u) {
    const int dim = grid.dim();
    const std::size_t n = grid.size();
    const cplx I(0.0, 1.0);
    std::vector<SpectralArray> out(static_cast<std::size_t>(dim), SpectralArray(n));
    for (std::size_t q = 1; q < n; ++q) {
        const double k = grid.kabs(q);
        for (int i = 0; i < dim; ++i) {
            // -Λ⁻¹∂_i d
            cplx v = -I * grid.wavevector(q, i) * d[q] / k;
            // -Λ⁻¹ Σ_j ∂_j Λ⁻¹(∂_j u_i - ∂_i u_j)
            cplx div_w{};
            for (int j = 0; j < dim; ++j) {
                const cplx curl_ij = I * grid.wavevector(q, j) * u[i][q] - I * grid.wavevector(q, i) * u[j][q];
                div_w += I * grid.wavevector(q, j) * curl_ij / k;
            }
            v -= div_w / k;
            out[i][q] = v;
        }
    }
    return out;
}

}  // namespace raddiff
