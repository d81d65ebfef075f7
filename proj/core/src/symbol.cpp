#include "raddiff/symbol.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "raddiff/error.hpp"

namespace raddiff {

namespace {

void require_nonnegative(double rho_freq) {
    if (!(rho_freq >= 0.0)) {
        std::ostringstream os;
        os << "frequency must be non-negative, got " << rho_freq;
        throw DomainError(os.str());
    }
}

Eigen::Matrix4d block_transform(const DerivedConstants& c) {
    Eigen::Matrix4d t = Eigen::Matrix4d::Identity();
    t(2, 2) = 3.0 * c.c_light;
    t(2, 3) = 2.0;
    t(3, 2) = c.gamma;
    t(3, 3) = -c.b_bar;
    return t;
}

}  // namespace

Matrix4 assemble_symbol(const DerivedConstants& c, double r) {
    require_nonnegative(r);
    const double r2 = r * r;
    Matrix4 a = Matrix4::Zero();
    a(0, 1) = r;
    a(1, 0) = -r;
    a(1, 1) = c.nu * r2;
    a(1, 2) = -r;
    a(1, 3) = -r / (3.0 * c.c_light);
    a(2, 1) = 2.0 * r / 3.0;
    a(2, 2) = 2.0 / 3.0 * c.kappa * r2 + 2.0 * c.gamma / 3.0;
    a(2, 3) = -2.0 * c.b_bar / 3.0;
    a(3, 2) = -c.c_light * c.gamma;
    a(3, 3) = c.a_diff * r2 + c.c_light * c.b_bar;
    return a;
}

Eigen::MatrixXcd full_symbol(const DerivedConstants& c, std::span<const double> xi) {
    const int d = static_cast<int>(xi.size());
    if (d < 1 || d > 3) throw DomainError("full symbol: wavevector must have 1 to 3 components");
    const cplx I(0.0, 1.0);
    double k2 = 0.0;
    for (double x : xi) k2 += x * x;
    const int th = d + 1, jj = d + 2;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d + 3, d + 3);
    for (int i = 0; i < d; ++i) {
        const double x = xi[static_cast<std::size_t>(i)];
        m(0, 1 + i) = I * x;
        m(1 + i, 0) = I * x;
        m(1 + i, th) = I * x;
        m(1 + i, jj) = I * x / (3.0 * c.c_light);
        for (int j = 0; j < d; ++j)
            m(1 + i, 1 + j) = (i == j ? c.mu * k2 : 0.0) + (c.mu + c.lambda) * x * xi[static_cast<std::size_t>(j)];
        m(th, 1 + i) = 2.0 / 3.0 * I * x;
    }
    m(th, th) = 2.0 / 3.0 * c.kappa * k2 + 2.0 * c.gamma / 3.0;
    m(th, jj) = -2.0 * c.b_bar / 3.0;
    m(jj, th) = -c.c_light * c.gamma;
    m(jj, jj) = c.a_diff * k2 + c.c_light * c.b_bar;
    return m;
}

cplx CharPoly::eval(cplx l) const { return (((a0 * l - a1) * l + a2) * l - a3) * l + a4; }

cplx CharPoly::derivative(cplx l) const { return ((4.0 * a0 * l - 3.0 * a1) * l + 2.0 * a2) * l - a3; }

double CharPoly::scale(cplx l) const {
    const double m = std::abs(l);
    return (((std::abs(a0) * m + std::abs(a1)) * m + std::abs(a2)) * m + std::abs(a3)) * m + std::abs(a4);
}

CharPoly char_poly(const DerivedConstants& c, double r) {
    require_nonnegative(r);
    const double r2 = r * r, r4 = r2 * r2;
    const double nu = c.nu, k = c.kappa, g = c.gamma, a = c.a_diff, b = c.b_bar, C = c.c_light;
    CharPoly p;
    p.a0 = 1.0;
    p.a1 = (a + 2.0 / 3.0 * k + nu) * r2 + 2.0 * g / 3.0 + C * b;
    p.a2 = ((nu * a + 2.0 / 3.0 * nu * k + 2.0 / 3.0 * a * k) * r2 + 2.0 * g * nu / 3.0 + C * b * nu
            + 2.0 * g * a / 3.0 + 2.0 * k * C * b / 3.0 + 5.0 / 3.0) * r2;
    p.a3 = (2.0 / 3.0 * a * k * nu * r4 + (2.0 * (g * a + k * C * b) * nu / 3.0 + 5.0 * a / 3.0 + 2.0 * k / 3.0) * r2
            + 5.0 / 3.0 * C * b + 8.0 * g / 9.0) * r2;
    p.a4 = 2.0 / 3.0 * (a * k * r2 + a * g + k * C * b) * r4;
    return p;
}

HurwitzChain routh_hurwitz(const DerivedConstants& c, double r) {
    const CharPoly p = char_poly(c, r);
    Eigen::Matrix4d h;
    h << p.a1, p.a0, 0.0, 0.0,
         p.a3, p.a2, p.a1, p.a0,
         0.0, p.a4, p.a3, p.a2,
         0.0, 0.0, 0.0, p.a4;
    HurwitzChain out;
    out.A1 = h(0, 0);
    out.A2 = h.topLeftCorner<2, 2>().determinant();
    out.A3 = h.topLeftCorner<3, 3>().determinant();
    out.A4 = h.determinant();

    const double nu = c.nu, k = c.kappa, g = c.gamma, a = c.a_diff, b = c.b_bar, C = c.c_light;
    const double q2 = nu * a + 2.0 / 3.0 * nu * k + 2.0 / 3.0 * a * k;
    const double q0 = 2.0 * g * nu / 3.0 + C * b * nu + 2.0 * g * a / 3.0 + 2.0 * k * C * b / 3.0 + 5.0 / 3.0;
    const double p2 = a + 2.0 / 3.0 * k + nu;
    const double p0 = 2.0 * g / 3.0 + C * b;
    out.a21 = p2 * q2 - 2.0 / 3.0 * a * k * nu;
    out.a22 = p0 * q2 + p2 * q0 - (2.0 * (g * a + k * C * b) * nu / 3.0 + 5.0 * a / 3.0 + 2.0 * k / 3.0);
    out.a23 = p0 * q0 - (5.0 / 3.0 * C * b + 8.0 * g / 9.0);
    return out;
}

SpectrumReport eigenvalues(const DerivedConstants& c, double r, double tol) {
    require_nonnegative(r);
    if (!(tol > 0.0 && tol <= 1e-6)) throw DomainError("eigenvalue tolerance must lie in (0, 1e-6]");
    const CharPoly p = char_poly(c, r);
    const double s = std::max(1.0, r * r);
    // Monic coefficients in μ = λ/s, highest degree first; exact zero roots are deflated.
    std::vector<double> q{1.0, -p.a1 / s, p.a2 / (s * s), -p.a3 / (s * s * s), p.a4 / (s * s * s * s)};
    std::vector<cplx> roots;
    while (q.size() > 1 && q.back() == 0.0) {
        q.pop_back();
        roots.emplace_back(0.0, 0.0);
    }
    const int deg = static_cast<int>(q.size()) - 1;
    if (deg > 0) {
        Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
        for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
        for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -q[static_cast<std::size_t>(deg - i)];
        Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
        if (es.info() != Eigen::Success) {
            std::ostringstream os;
            os << "companion eigen-solve did not converge at rho = " << r;
            throw ConvergenceError(os.str());
        }
        for (int i = 0; i < deg; ++i) {
            cplx l = s * es.eigenvalues()[i];
            for (int it = 0; it < 2; ++it) {
                const cplx dp = p.derivative(l);
                if (dp == cplx{}) break;
                const cplx cand = l - p.eval(l) / dp;
                if (std::abs(p.eval(cand)) < std::abs(p.eval(l))) l = cand;
            }
            roots.push_back(l);
        }
    }

    SpectrumReport rep;
    rep.rho_freq = r;
    auto residual = [&](cplx l) { return std::abs(p.eval(l)) / std::max(std::pow(1.0 + std::abs(l), 4), p.scale(l)); };
    std::copy(roots.begin(), roots.end(), rep.eigenvalues.begin());
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(), [](const cplx& x, const cplx& y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        rep.residuals[i] = residual(rep.eigenvalues[i]);
        worst = std::max(worst, rep.residuals[i]);
    }
    if (!(worst <= tol)) {
        std::ostringstream os;
        os << "eigenvalue residual " << worst << " exceeds tolerance " << tol << " at rho = " << r;
        throw ConvergenceError(os.str());
    }
    rep.hurwitz = routh_hurwitz(c, r);
    rep.abscissa = rep.eigenvalues[0].real();
    return rep;
}

ExpansionCoefficients expansion_coefficients(const DerivedConstants& c, bool kappa_zero) {
    const double k = kappa_zero ? 0.0 : c.kappa;
    const double g = c.gamma, a = c.a_diff, b = c.b_bar, C = c.c_light, nu = c.nu;
    const double D = 3.0 * C * b + 2.0 * g;
    ExpansionCoefficients e;
    e.pair_imag = std::sqrt((8.0 * g + 15.0 * C * b) / (6.0 * g + 9.0 * C * b));
    e.pair_real = 9.0 * g / std::pow(6.0 * g + 9.0 * C * b, 2)
                  + 2.0 * (a * g + k * C * b) * (g + 3.0 * C * b) / ((8.0 * g + 15.0 * C * b) * (2.0 * g + 3.0 * C * b))
                  + nu / 2.0;
    e.slow = 6.0 * (a * g + k * C * b) / (15.0 * C * b + 8.0 * g);
    e.fast0 = 2.0 * g / 3.0 + C * b;
    e.fast2 = (4.0 * g * k + 9.0 * C * a * b) / (3.0 * D) - 2.0 * g / (D * D);
    e.fast2_printed = (4.0 * g * k + 9.0 * C * b * a - g) / (6.0 * g + 9.0 * C * b);
    return e;
}

std::array<cplx, 4> asymptotic_eigenvalues(const DerivedConstants& c, double r, bool kappa_zero, bool printed) {
    const ExpansionCoefficients e = expansion_coefficients(c, kappa_zero);
    const double r2 = r * r;
    const double fast2 = printed ? e.fast2_printed : e.fast2;
    return {cplx(e.pair_real * r2, -e.pair_imag * r), cplx(e.pair_real * r2, e.pair_imag * r),
            cplx(e.slow * r2, 0.0), cplx(e.fast0 + fast2 * r2, 0.0)};
}

GapResult spectral_gap(const DerivedConstants& c, double r, double R, int n_grid) {
    if (!(r > 0.0 && r < R)) throw DomainError("spectral gap: need 0 < r < R");
    if (n_grid < 2) throw DomainError("spectral gap: need at least two grid points");
    GapResult g{std::numeric_limits<double>::infinity(), r};
    for (int i = 0; i < n_grid; ++i) {
        const double rho = r * std::pow(R / r, static_cast<double>(i) / (n_grid - 1));
        const double x = eigenvalues(c, rho).abscissa;
        if (x < g.iota) g = {x, rho};
    }
    if (!(g.iota > 0.0)) {
        std::ostringstream os;
        os << "spectral gap is non-positive (" << g.iota << " at rho = " << g.argmin << ")";
        throw ModelInconsistency(os.str());
    }
    return g;
}

Matrix4 conjugated_symbol(const DerivedConstants& c, double r) {
    const Eigen::Matrix4d t = block_transform(c);
    return t * assemble_symbol(c, r) * t.inverse();
}

Matrix4 ModeChange::system_matrix(double r, double c_light, double gamma, double nu) const {
    Matrix4 m = Matrix4::Zero();
    const double r2 = r * r;
    m(0, 1) = r;
    m(1, 0) = -r;
    m(1, 1) = nu * r2;
    m(1, 2) = -c1 * r;
    m(1, 3) = -c2 * r;
    m(2, 1) = 2.0 * c_light * r;
    m(2, 2) = c3 * r2;
    m(2, 3) = -c4 * r2;
    m(3, 1) = 2.0 * gamma * r / 3.0;
    m(3, 2) = -c6 * r2;
    m(3, 3) = c5(r);
    return m;
}

ModeChange mode_change(const DerivedConstants& c) {
    const double k = c.kappa, g = c.gamma, a = c.a_diff, b = c.b_bar, C = c.c_light;
    const double D = 3.0 * b * C + 2.0 * g;
    ModeChange mc;
    mc.c1 = (b + g / (3.0 * C)) / D;
    mc.c2 = 1.0 / D;
    mc.c3 = (2.0 * k * b * C + 2.0 * a * g) / D;
    mc.c4 = (6.0 * a * C - 4.0 * k * C) / D;
    mc.c5_quad = (4.0 * k * g + 9.0 * a * b * C) / (3.0 * D);
    mc.c5_const = 2.0 * g / 3.0 + b * C;
    mc.c6 = (2.0 * k * g * b - 3.0 * a * b * g) / (3.0 * D);
    mc.transform << 3.0 * C, 2.0, g, -b;
    mc.inverse << b / D, 2.0 / D, g / D, -3.0 * C / D;

    // Read every coefficient back from T A T⁻¹ at two frequencies.
    const double r1 = 1.0, r2 = 2.0;
    const Matrix4 b1 = conjugated_symbol(c, r1);
    const Matrix4 b2 = conjugated_symbol(c, r2);
    struct Entry {
        const char* name;
        double printed;
        double derived;
    };
    const double c5q = (b2(3, 3) - b1(3, 3)) / (r2 * r2 - r1 * r1);
    const Entry entries[] = {
        {"c1", mc.c1, -b1(1, 2) / r1},
        {"c2", mc.c2, -b1(1, 3) / r1},
        {"c3", mc.c3, b1(2, 2) / (r1 * r1)},
        {"c4", mc.c4, -b1(2, 3) / (r1 * r1)},
        {"c5_const", mc.c5_const, b1(3, 3) - c5q * r1 * r1},
        {"c5_quad", mc.c5_quad, c5q},
        {"c6", mc.c6, -b1(3, 2) / (r1 * r1)},
    };
    ModeChange derived = mc;
    for (const auto& e : entries) {
        if (std::abs(e.printed - e.derived) > 1e-10 * std::max(1.0, std::abs(e.derived)))
            mc.discrepancies.push_back({e.name, e.printed, e.derived});
    }
    derived.c1 = entries[0].derived;
    derived.c2 = entries[1].derived;
    derived.c3 = entries[2].derived;
    derived.c4 = entries[3].derived;
    derived.c5_const = entries[4].derived;
    derived.c5_quad = entries[5].derived;
    derived.c6 = entries[6].derived;
    for (double r : {0.1, 0.5, 1.0, 3.0, 10.0}) {
        const Matrix4 diff = conjugated_symbol(c, r) - derived.system_matrix(r, C, g, c.nu);
        const double scale = std::max(1.0, conjugated_symbol(c, r).cwiseAbs().maxCoeff());
        mc.max_conjugation_error = std::max(mc.max_conjugation_error, diff.cwiseAbs().maxCoeff() / scale);
    }
    return mc;
}

double spectral_norm(const Matrix4& m) {
    Eigen::JacobiSVD<Matrix4> svd(m);
    return svd.singularValues()(0);
}

Matrix4 propagator(const DerivedConstants& c, double r, double t, PropagatorMethod method, bool verify) {
    if (!(t >= 0.0)) throw DomainError("propagator: time must be non-negative");
    const Matrix4 a = assemble_symbol(c, r);
    auto compute = [&](double tt) -> Matrix4 {
        if (tt == 0.0) return Matrix4::Identity();
        if (method != PropagatorMethod::pade) {
            Eigen::EigenSolver<Matrix4> es(a);
            if (es.info() == Eigen::Success) {
                const Eigen::Matrix4cd v = es.eigenvectors();
                Eigen::JacobiSVD<Eigen::Matrix4cd> svd(v);
                const double cond = svd.singularValues()(0) / svd.singularValues()(3);
                if (cond < 1e6) {
                    Eigen::Vector4cd e;
                    for (int i = 0; i < 4; ++i) e(i) = std::exp(-tt * es.eigenvalues()(i));
                    return (v * e.asDiagonal() * v.inverse()).real();
                }
                if (method == PropagatorMethod::eigen) {
                    std::ostringstream os;
                    os << "propagator: eigenvector condition number " << cond << " too large at rho = " << r;
                    throw NumericalFailure(os.str());
                }
            }
        }
        const Matrix4 m = -tt * a;
        return m.exp();
    };
    const Matrix4 e = compute(t);
    if (!e.allFinite()) {
        std::ostringstream os;
        os << "propagator overflow at rho = " << r << ", t = " << t;
        throw NumericalFailure(os.str());
    }
    if (verify && t > 0.0) {
        const Matrix4 h = compute(0.5 * t);
        const Matrix4 sq = h * h;
        const double scale = std::max(e.cwiseAbs().maxCoeff(), sq.cwiseAbs().maxCoeff());
        if ((e - sq).cwiseAbs().maxCoeff() > 1e-9 * scale) {
            std::ostringstream os;
            os << "propagator half-step check failed at rho = " << r << ", t = " << t;
            throw NumericalFailure(os.str());
        }
    }
    return e;
}

}  // namespace raddiff
