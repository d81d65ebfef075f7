#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "raddiff/decay.hpp"
#include "raddiff/error.hpp"

using namespace raddiff;

namespace {

std::vector<double> power_law(const std::vector<double>& t, double p) {
    std::vector<double> y;
    for (double s : t) y.push_back(std::pow(1.0 + s, p));
    return y;
}

double slope_of(const DerivedConstants& c, const SemigroupProfile& p, int m, SemigroupQuantity q) {
    const auto times = log_spaced(10.0, 1e4, 12);
    return fit_decay(times, semigroup_norms(c, p, m, times, q));
}

const DerivedConstants ref = derive_constants(reference_params());

}  // namespace

TEST(FitDecay, ExactPowerLaw) {
    const auto t = log_spaced(10.0, 1e4, 12);
    EXPECT_NEAR(fit_decay(t, power_law(t, -0.75)), -0.75, 1e-10);
}

TEST(FitDecay, Constant) {
    const auto t = log_spaced(10.0, 1e4, 12);
    EXPECT_NEAR(fit_decay(t, std::vector<double>(t.size(), 3.0)), 0.0, 1e-14);
}

TEST(FitDecay, NoisyPowerLaw) {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> noise(0.0, 0.01);
    const auto t = log_spaced(10.0, 1e4, 50);
    for (int trial = 0; trial < 20; ++trial) {
        auto y = power_law(t, -1.25);
        for (auto& v : y) v *= 1.0 + noise(rng);
        EXPECT_NEAR(fit_decay(t, y), -1.25, 0.02);
    }
}

TEST(FitDecay, WindowDropsTransient) {
    const auto t = log_spaced(0.1, 1e4, 30);
    auto y = power_law(t, -0.75);
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] < 10.0) y[i] = 1e3;
    EXPECT_NEAR(fit_decay(t, y), -0.75, 1e-10);
}

TEST(FitDecay, RejectsBadInput) {
    const auto t = log_spaced(10.0, 1e4, 12);
    auto y = power_law(t, -1.0);
    EXPECT_THROW(fit_decay(std::vector<double>(t.begin(), t.begin() + 7), std::vector<double>(y.begin(), y.begin() + 7)),
                 DomainError);
    auto neg = y;
    neg[3] = 0.0;
    EXPECT_THROW(fit_decay(t, neg), DomainError);
    auto unordered = t;
    std::swap(unordered[2], unordered[3]);
    EXPECT_THROW(fit_decay(unordered, y), DomainError);
    EXPECT_THROW(fit_decay(t, std::vector<double>(y.begin(), y.end() - 1)), DomainError);
    EXPECT_THROW(fit_decay(t, y, {20.0, 100.0}), DomainError);
}

TEST(DecayProperties, DampedModeDecaysFasterThanTemperature) {
    const SemigroupProfile p;
    const double xi = slope_of(ref, p, 0, SemigroupQuantity::damped);
    const double theta = slope_of(ref, p, 0, SemigroupQuantity::temperature);
    RecordProperty("xi", std::to_string(xi));
    RecordProperty("theta", std::to_string(theta));
    EXPECT_LE(xi, theta - 0.4);
}

TEST(DecayProperties, DerivativeLadder) {
    const SemigroupProfile p;
    double prev = slope_of(ref, p, 0, SemigroupQuantity::full);
    for (int m = 1; m <= 2; ++m) {
        const double s = slope_of(ref, p, m, SemigroupQuantity::full);
        EXPECT_LE(s, prev - 0.4) << m;
        prev = s;
    }
}

TEST(DecayProperties, AmplitudeInvariance) {
    SemigroupProfile p, scaled;
    scaled.v0 = {250.0, 0.0, 0.0, 0.0};
    for (auto q : {SemigroupQuantity::full, SemigroupQuantity::damped})
        EXPECT_NEAR(slope_of(ref, p, 1, q), slope_of(ref, scaled, 1, q), 0.01);
}

TEST(VerifyRates, ReportsPrimaryOrders) {
    RateSettings s;
    s.higher_orders = false;
    s.time_derivatives = false;
    s.include_kappa_zero = false;
    const auto reports = verify_rates(reference_params(), s);
    ASSERT_EQ(reports.size(), 6u);
    for (const auto& r : reports) {
        EXPECT_EQ(r.times.size(), 12u);
        EXPECT_EQ(r.norms.size(), 12u);
        EXPECT_EQ(r.kind, TargetKind::equal);
        EXPECT_EQ(r.pass, std::abs(r.slope - r.target) <= r.tolerance) << r.quantity;
    }
    for (int m = 0; m < 3; ++m) {
        const auto& u = reports[static_cast<std::size_t>(2 * m)];
        EXPECT_EQ(u.quantity, "grad" + std::to_string(m) + "_U");
        EXPECT_DOUBLE_EQ(u.target, -0.75 - 0.5 * m);
        EXPECT_TRUE(u.pass) << u.quantity << " slope " << u.slope;
    }
}

TEST(VerifyRates, RejectsShortGrid) {
    RateSettings s;
    s.times = log_spaced(10.0, 500.0, 12);
    EXPECT_THROW(verify_rates(reference_params(), s), ConstraintViolation);
}
