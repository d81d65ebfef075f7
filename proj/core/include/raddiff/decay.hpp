#pragma once

#include <span>
#include <string>
#include <vector>

#include "raddiff/params.hpp"
#include "raddiff/solver.hpp"

namespace raddiff {

struct FitWindow {
    double t_min = 10.0;
    double t_max = 1e300;
};

/// Least-squares slope of log(norm) against log(1+t) over the window.
double fit_decay(std::span<const double> times, std::span<const double> norms, FitWindow window = {});

enum class TargetKind { equal, upper_bound, report_only };

struct DecayReport {
    std::string quantity;
    std::vector<double> times;
    std::vector<double> norms;
    FitWindow window;
    double slope = 0.0;
    double target = 0.0;
    double tolerance = 0.05;
    TargetKind kind = TargetKind::equal;
    bool pass = false;
};

struct RateSettings {
    std::vector<double> times;  // empty selects 12 log-spaced points on [10, 1e4]
    std::vector<int> m_list{0, 1, 2};
    double tolerance = 0.05;
    SemigroupProfile profile{};
    bool higher_orders = true;  // m = 3, 4 upper-bound checks
    bool time_derivatives = true;
    bool include_kappa_zero = true;
    double rel_tol = 1e-10;
};

std::vector<double> log_spaced(double lo, double hi, int n);

/// Runs the linear semigroup suite and compares fitted slopes to the theoretical rates.
/// Failed comparisons are flagged in the reports, never thrown.
std::vector<DecayReport> verify_rates(const PhysicalParams& params, const RateSettings& settings = {});

bool all_pass(std::span<const DecayReport> reports);

}  // namespace raddiff
