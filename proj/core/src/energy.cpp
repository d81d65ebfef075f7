#include "raddiff/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "raddiff/error.hpp"
#include "raddiff/model.hpp"

namespace raddiff {

AnalysisConstants select_constants(const DerivedConstants& c) {
    AnalysisConstants ac;
    ac.thresholds = compute_thresholds(c);
    ac.modes = mode_change(c);
    double b1 = std::min({c.nu / 4.0, 9.0 * c.a_diff * c.c_light * c.c_light / 4.0, 1.0});
    if (c.kappa > 0.0) b1 = std::min(b1, c.kappa / 2.0);
    ac.beta1 = b1;
    const double gap = std::abs(std::pow(c.b_bar + c.c_light * c.gamma, 2) / c.gamma
                                + 1.0 / (9.0 * c.nu * c.c_light * c.c_light) - c.c_light * c.b_bar);
    ac.beta2 = std::min(b1 * c.nu / 8.0, gap > 0.0 ? c.a_diff / 16.0 / gap : std::numeric_limits<double>::infinity());
    const ModeChange& m = ac.modes;
    ac.beta3 = std::min({2.0 * c.nu / 3.0, m.c3 / (16.0 * c.c_light * m.c1), 1.0 / (2.0 * ac.thresholds.R0)});
    return ac;
}

Matrix4 high_freq_form(double r, const AnalysisConstants& ac, const DerivedConstants& c, CrossWeight weight) {
    const double r2 = r * r;
    const double cross = (weight == CrossWeight::consistent ? 2.0 : 1.0) * ac.beta1 * r;
    Matrix4 q = Matrix4::Zero();
    q(0, 0) = 1.0 + c.nu * ac.beta1 * r2;
    q(0, 1) = q(1, 0) = -0.5 * cross;
    q(1, 1) = 1.0 + ac.beta2 * r2;
    q(2, 2) = 1.5 + 2.25 * ac.beta2 * r2;
    q(3, 3) = 1.0 + ac.beta2 * r2;
    return q;
}

Matrix4 low_freq_form(double r, const AnalysisConstants& ac, const DerivedConstants& c) {
    const ModeChange& m = ac.modes;
    Matrix4 q = Matrix4::Zero();
    q(0, 0) = 0.5;
    q(1, 1) = 0.5;
    q(0, 1) = q(1, 0) = -0.5 * ac.beta3 * r;
    Eigen::Matrix2d w = Eigen::Matrix2d::Zero();
    w(0, 0) = m.c1 / (4.0 * c.c_light);
    w(1, 1) = 3.0 * m.c2 / (4.0 * c.gamma);
    q.bottomRightCorner<2, 2>() = m.transform.transpose() * w * m.transform;
    return q;
}

namespace {

double hermitian(const Matrix4& q, const std::array<cplx, 4>& v) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s += q(i, j) * (std::conj(v[static_cast<std::size_t>(i)]) * v[static_cast<std::size_t>(j)]).real();
    return s;
}

}  // namespace

HighFrequencyValues high_freq_functional(const Decomposition& dec, const CompressibleView& v, int k,
                                         const AnalysisConstants& ac, const DerivedConstants& c, CrossWeight weight) {
    if (k <= ac.thresholds.k1) {
        std::ostringstream os;
        os << "high-frequency functional needs k > k1 = " << ac.thresholds.k1 << ", got " << k;
        throw DomainError(os.str());
    }
    const Grid& grid = dec.grid();
    HighFrequencyValues out;
    const AnalysisConstants base{ac.beta1, 0.0, ac.beta3, ac.thresholds, ac.modes};
    for (std::size_t q : dec.modes_in_shell(k)) {
        const double r = grid.kabs(q);
        const std::array<cplx, 4> w{v.rho[q], v.d[q], v.theta[q], v.j0[q]};
        const double l = hermitian(high_freq_form(r, base, c, weight), w);
        double pu = 0.0;
        for (const auto& p : v.pu) pu += std::norm(p[q]);
        out.L += l;
        out.H += hermitian(high_freq_form(r, ac, c, weight), w) + (1.0 + r * r) * pu;
    }
    out.L *= grid.volume();
    out.H *= grid.volume();
    return out;
}

HighFrequencyValues high_freq_functional(const StateField& state, const Decomposition& dec, int k,
                                         const AnalysisConstants& ac, const DerivedConstants& c, CrossWeight weight) {
    const HelmholtzParts parts = helmholtz_split(state);
    CompressibleView v{state.coeffs(StateField::rho), parts.d, state.coeffs(state.theta()), state.coeffs(state.j0()), {}};
    for (const auto& p : parts.pu) v.pu.emplace_back(p);
    return high_freq_functional(dec, v, k, ac, c, weight);
}

double low_freq_functional(const std::array<cplx, 4>& mode, double xi_abs, const AnalysisConstants& ac,
                           const DerivedConstants& c) {
    if (!(xi_abs >= 0.0 && xi_abs <= ac.thresholds.R0)) {
        std::ostringstream os;
        os << "low-frequency functional needs |xi| <= R0 = " << ac.thresholds.R0 << ", got " << xi_abs;
        throw DomainError(os.str());
    }
    return hermitian(low_freq_form(xi_abs, ac, c), mode);
}

DampedModes damped_mode(const StateField& state, const DerivedConstants& c) {
    const auto th = state.values(state.theta());
    const auto j = state.values(state.j0());
    DampedModes m{RealArray(th.size()), RealArray(th.size())};
    for (std::size_t q = 0; q < th.size(); ++q) {
        m.Theta[q] = 3.0 * c.c_light * th[q] + 2.0 * j[q];
        m.Xi[q] = c.gamma * th[q] - c.b_bar * j[q];
    }
    return m;
}

std::pair<RealArray, RealArray> undo_damped_mode(const DampedModes& m, const DerivedConstants& c) {
    const double D = 3.0 * c.c_light * c.b_bar + 2.0 * c.gamma;
    RealArray th(m.Theta.size()), j(m.Theta.size());
    for (std::size_t q = 0; q < th.size(); ++q) {
        th[q] = (c.b_bar * m.Theta[q] + 2.0 * m.Xi[q]) / D;
        j[q] = (c.gamma * m.Theta[q] - 3.0 * c.c_light * m.Xi[q]) / D;
    }
    return {th, j};
}

double EquivalenceBounds::constant() const { return std::max(upper, 1.0 / lower); }

EquivalenceBounds high_equivalence(const Decomposition& dec, int k, const AnalysisConstants& ac, const DerivedConstants& c,
                                   CrossWeight weight) {
    EquivalenceBounds b{std::numeric_limits<double>::infinity(), 0.0};
    const double ref = 1.0 + std::exp2(2.0 * k);
    for (std::size_t q : dec.modes_in_shell(k)) {
        const double r = dec.grid().kabs(q);
        Eigen::SelfAdjointEigenSolver<Matrix4> es(high_freq_form(r, ac, c, weight));
        const double pu = 1.0 + r * r;
        b.lower = std::min({b.lower, es.eigenvalues()(0) / ref, pu / ref});
        b.upper = std::max({b.upper, es.eigenvalues()(3) / ref, pu / ref});
    }
    return b;
}

EquivalenceBounds low_equivalence(const Grid& grid, const AnalysisConstants& ac, const DerivedConstants& c) {
    EquivalenceBounds b{std::numeric_limits<double>::infinity(), 0.0};
    double last = -1.0;
    std::vector<double> radii;
    for (std::size_t q = 1; q < grid.size(); ++q)
        if (grid.kabs(q) <= ac.thresholds.R0) radii.push_back(grid.kabs(q));
    std::sort(radii.begin(), radii.end());
    for (double r : radii) {
        if (r == last) continue;
        last = r;
        Eigen::SelfAdjointEigenSolver<Matrix4> es(low_freq_form(r, ac, c));
        b.lower = std::min(b.lower, es.eigenvalues()(0));
        b.upper = std::max(b.upper, es.eigenvalues()(3));
    }
    return b;
}

}  // namespace raddiff
