#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "raddiff/energy.hpp"
#include "raddiff/error.hpp"
#include "support.hpp"

using namespace raddiff;
using namespace raddiff::testing;

namespace {

const DerivedConstants ref = derive_constants(reference_params());

std::shared_ptr<const Grid> energy_grid(int n = 64) { return std::make_shared<const Grid>(2, n, M_PI / 2); }

StateField shell_state(std::shared_ptr<const Grid> g, const Decomposition& dec, int k, std::uint64_t seed) {
    const StateField full = random_state(g, g->n() / 3, 1.0, seed);
    std::vector<SpectralArray> c;
    for (std::size_t comp = 0; comp < full.n_components(); ++comp) c.push_back(dec.project(full.coeffs(comp), k));
    return StateField::from_coeffs(std::move(g), std::move(c));
}

double shell_mass(const StateField& s) {
    double m = 0.0;
    for (std::size_t comp = 0; comp < s.n_components(); ++comp) m += s.grid().l2_norm_squared(s.coeffs(comp));
    return m;
}

// Largest growth factor of L_l over all initial modes: λ_max of Q^{-1/2} Eᵀ Q E Q^{-1/2}.
double worst_ratio(const Matrix4& Q, const Matrix4& E) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix4> es(E.transpose() * Q * E, Q);
    return es.eigenvalues()(3);
}

}  // namespace

TEST(Constants, ReferenceSelection) {
    const auto ac = select_constants(ref);
    EXPECT_DOUBLE_EQ(ac.beta1, 3.0 / 8.0);
    EXPECT_DOUBLE_EQ(ac.beta3, 1.0 / 128.0);
    const double gap = 25.0 / 4.0 + 1.0 / 18.0 - 1.0;
    EXPECT_NEAR(ac.beta2, (1.0 / 6.0) / 16.0 / gap, 1e-15);
    EXPECT_NEAR(ac.beta2, 0.0019634, 1e-7);
}

TEST(Constants, ConstraintsHoldForRandomParameters) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const auto c = derive_constants(random_params(rng));
        const auto ac = select_constants(c);
        EXPECT_GT(ac.beta1, 0.0);
        EXPECT_GT(ac.beta2, 0.0);
        EXPECT_GT(ac.beta3, 0.0);
        EXPECT_LE(ac.beta1, c.nu / 4);
        EXPECT_LE(ac.beta1, 9 * c.a_diff * c.c_light * c.c_light / 4);
        EXPECT_LE(ac.beta1, 1.0);
        EXPECT_LE(ac.beta1, c.kappa / 2);
        EXPECT_LE(ac.beta2, ac.beta1 * c.nu / 8);
        EXPECT_LE(ac.beta3, 2 * c.nu / 3);
        EXPECT_LE(ac.beta3, 1 / (2 * ac.thresholds.R0));
    }
}

TEST(HighFunctional, ZeroAndUnitTemperature) {
    auto g = energy_grid();
    const auto dec = Decomposition::build(g, ref);
    const auto ac = select_constants(ref);
    const int k = ac.thresholds.k1 + 1;

    const StateField zero(g);
    const auto z = high_freq_functional(zero, dec, k, ac, ref);
    EXPECT_EQ(z.L, 0.0);
    EXPECT_EQ(z.H, 0.0);

    // θ = cos(48 x) / ||cos(48 x)||, which lies in shell 6.
    std::vector<SpectralArray> c(5, SpectralArray(g->size()));
    for (std::size_t q = 0; q < g->size(); ++q)
        if (std::abs(g->mode(q)[0]) == 12 && g->mode(q)[1] == 0) c[3][q] = 0.5;
    const double n = g->l2_norm(c[3]);
    for (auto& v : c[3]) v /= n;
    const auto s = StateField::from_coeffs(g, c);
    ASSERT_EQ(dec.shell_of(12 * 64), k);
    const auto v = high_freq_functional(s, dec, k, ac, ref);
    EXPECT_NEAR(v.L, 1.5, 1e-12);
    EXPECT_NEAR(v.H, 1.5 + 2.25 * ac.beta2 * 48.0 * 48.0, 1e-12);
}

TEST(HighFunctional, RejectsLongWaves) {
    auto g = energy_grid();
    const auto dec = Decomposition::build(g, ref);
    const auto ac = select_constants(ref);
    EXPECT_THROW(high_freq_functional(StateField(g), dec, ac.thresholds.k1, ac, ref), DomainError);
}

TEST(HighFunctional, EquivalenceBoundsContainRandomStates) {
    auto g = energy_grid();
    const auto dec = Decomposition::build(g, ref);
    const auto ac = select_constants(ref);
    for (int k = ac.thresholds.k1 + 1; k <= dec.k_max(); ++k) {
        const auto b = high_equivalence(dec, k, ac, ref);
        EXPECT_GT(b.lower, 0.0);
        EXPECT_TRUE(std::isfinite(b.constant()));
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto s = shell_state(g, dec, k, seed);
            const double reference = shell_mass(s) * (1.0 + std::exp2(2.0 * k));
            const double H = high_freq_functional(s, dec, k, ac, ref).H;
            EXPECT_GE(H, b.lower * reference * (1 - 1e-12));
            EXPECT_LE(H, b.upper * reference * (1 + 1e-12));
        }
    }
}

TEST(LowFunctional, ValuesAndDomain) {
    const auto ac = select_constants(ref);
    EXPECT_EQ(low_freq_functional({}, 0.1, ac, ref), 0.0);
    EXPECT_DOUBLE_EQ(low_freq_functional({cplx(1.0), {}, {}, {}}, 0.1, ac, ref), 0.5);
    EXPECT_THROW(low_freq_functional({cplx(1.0), {}, {}, {}}, ac.thresholds.R0 * 1.01, ac, ref), DomainError);
    const auto b = low_equivalence(*energy_grid(), ac, ref);
    EXPECT_GT(b.lower, 0.0);
    EXPECT_TRUE(std::isfinite(b.constant()));
}

TEST(DampedMode, KernelAndRoundTrip) {
    auto g = energy_grid(16);
    const auto s = random_state(g, 4, 0.1, 7);
    const auto m = damped_mode(s, ref);
    const auto [th, j] = undo_damped_mode(m, ref);
    EXPECT_LE(max_abs_diff(th, s.values(s.theta())), 1e-14);
    EXPECT_LE(max_abs_diff(j, s.values(s.j0())), 1e-14);

    // Θ vanishes when 2 j₀ = -3𝒞 θ; Ξ vanishes when γ θ = b j₀.
    StateField t(g);
    auto th_mut = t.values_mut(t.theta());
    auto j_mut = t.values_mut(t.j0());
    for (std::size_t q = 0; q < th_mut.size(); ++q) {
        th_mut[q] = std::sin(g->position(q, 0));
        j_mut[q] = -1.5 * ref.c_light * th_mut[q];
    }
    EXPECT_LE(max_abs(damped_mode(t, ref).Theta), 1e-15);
    for (std::size_t q = 0; q < th_mut.size(); ++q) j_mut[q] = ref.gamma / ref.b_bar * th_mut[q];
    EXPECT_LE(max_abs(damped_mode(t, ref).Xi), 1e-15);
}

TEST(Dissipation, LowBandDecayRate) {
    const auto ac = select_constants(ref);
    const double r0 = ac.thresholds.r0;
    double C4 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 24; ++i) {
        const double r = 1e-2 * std::pow(r0 / 1e-2, i / 23.0);
        const Matrix4 Q = low_freq_form(r, ac, ref);
        for (int j = 1; j <= 40; ++j) {
            const double t = 100.0 * std::pow(1e-3, (40.0 - j) / 39.0);
            const double ratio = worst_ratio(Q, propagator(ref, r, t));
            C4 = std::min(C4, -std::log(ratio) / (r * r * t));
        }
    }
    RecordProperty("C4", std::to_string(C4));
    EXPECT_GT(C4, 0.0);
}

TEST(Dissipation, HighBandNonIncreasing) {
    auto g = energy_grid();
    const auto dec = Decomposition::build(g, ref);
    const auto ac = select_constants(ref);
    const Integrator integ(g, reference_params(), 0.01, true, true);
    for (int k = ac.thresholds.k1 + 1; k <= dec.k_max(); ++k) {
        const auto s0 = shell_state(g, dec, k, 11);
        const auto u0 = spectral_of(s0);
        double prev = high_freq_functional(s0, dec, k, ac, ref).H;
        for (int i = 1; i <= 50; ++i) {
            const double t = 0.2 * i;
            const auto s = StateField::from_coeffs(g, integ.propagate_linear(u0, t));
            const double H = high_freq_functional(s, dec, k, ac, ref).H;
            EXPECT_LE(H, prev * (1 + 1e-12)) << "k " << k << " t " << t;
            prev = H;
        }
    }
}

TEST(Equivalence, GridStable) {
    const auto ac = select_constants(ref);
    const auto coarse = Decomposition::build(energy_grid(64), ref);
    const auto fine = Decomposition::build(energy_grid(128), ref);
    const int k = ac.thresholds.k1 + 1;
    const double hc = high_equivalence(coarse, k, ac, ref).constant();
    const double hf = high_equivalence(fine, k, ac, ref).constant();
    EXPECT_NEAR(hf / hc, 1.0, 0.05);
    const double lc = low_equivalence(*energy_grid(64), ac, ref).constant();
    const double lf = low_equivalence(*energy_grid(128), ac, ref).constant();
    EXPECT_NEAR(lf / lc, 1.0, 0.05);
}

TEST(Dissipation, CrossWeightDefiniteness) {
    // -dH/dt per mode is vᵀ(QA + AᵀQ)v.
    const auto ac = select_constants(ref);
    for (double r : {45.0, 64.0, 200.0, 1e3, 1e4}) {
        const Matrix4 A = assemble_symbol(ref, r);
        const Matrix4 qc = high_freq_form(r, ac, ref, CrossWeight::consistent);
        const Matrix4 qp = high_freq_form(r, ac, ref, CrossWeight::printed);
        Eigen::SelfAdjointEigenSolver<Matrix4> consistent(qc * A + A.transpose() * qc), printed(qp * A + A.transpose() * qp);
        EXPECT_GT(consistent.eigenvalues()(0), 0.0) << r;
        EXPECT_LT(printed.eigenvalues()(0), 0.0) << r;
    }
}
