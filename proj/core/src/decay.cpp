#include "raddiff/decay.hpp"

#include <cmath>
#include <sstream>

#include "raddiff/error.hpp"

namespace raddiff {

double fit_decay(std::span<const double> times, std::span<const double> norms, FitWindow window) {
    if (times.size() != norms.size()) throw DomainError("fit_decay: times and norms differ in length");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (i > 0 && !(times[i] > times[i - 1])) throw DomainError("fit_decay: times must be strictly increasing");
        if (times[i] < window.t_min || times[i] > window.t_max) continue;
        if (!(norms[i] > 0.0)) {
            std::ostringstream os;
            os << "fit_decay: non-positive norm " << norms[i] << " at t = " << times[i];
            throw DomainError(os.str());
        }
        const double x = std::log1p(times[i]), y = std::log(norms[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 8) {
        std::ostringstream os;
        os << "fit_decay: " << n << " samples in the fit window, at least 8 required";
        throw DomainError(os.str());
    }
    const double nn = static_cast<double>(n);
    const double mx = sx / nn;
    return (sxy - mx * sy) / (sxx - mx * sx);
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(lo * std::pow(hi / lo, n == 1 ? 0.0 : double(i) / (n - 1)));
    return v;
}

bool all_pass(std::span<const DecayReport> reports) {
    for (const auto& r : reports)
        if (!r.pass) return false;
    return true;
}

namespace {

void judge(DecayReport& r) {
    switch (r.kind) {
        case TargetKind::equal: r.pass = std::abs(r.slope - r.target) <= r.tolerance; break;
        case TargetKind::upper_bound: r.pass = r.slope <= r.target + r.tolerance; break;
        case TargetKind::report_only: r.pass = true; break;
    }
}

}  // namespace

std::vector<DecayReport> verify_rates(const PhysicalParams& params, const RateSettings& settings) {
    params.validate();
    std::vector<double> times = settings.times.empty() ? log_spaced(10.0, 1e4, 12) : settings.times;
    if (times.empty() || times.back() < 10.0 * 100.0)
        throw ConstraintViolation("verify_rates: time grid must span at least two decades above t = 10");

    std::vector<DecayReport> out;
    auto add = [&](const DerivedConstants& c, const std::string& label, int m, SemigroupQuantity q, double target,
                   TargetKind kind) {
        DecayReport r;
        r.quantity = label;
        r.times = times;
        r.norms = semigroup_norms(c, settings.profile, m, times, q, settings.rel_tol);
        r.target = target;
        r.tolerance = kind == TargetKind::upper_bound ? 0.1 : settings.tolerance;
        r.kind = kind;
        r.slope = fit_decay(r.times, r.norms, r.window);
        judge(r);
        out.push_back(std::move(r));
    };
    auto suite = [&](const PhysicalParams& p, const std::string& tag) {
        const DerivedConstants c = derive_constants(p);
        for (int m : settings.m_list) {
            add(c, tag + "grad" + std::to_string(m) + "_U", m, SemigroupQuantity::full, -0.75 - 0.5 * m, TargetKind::equal);
            add(c, tag + "grad" + std::to_string(m) + "_Xi", m, SemigroupQuantity::damped, -1.25 - 0.5 * m,
                TargetKind::equal);
        }
        if (settings.higher_orders)
            for (int m : {3, 4})
                add(c, tag + "grad" + std::to_string(m) + "_U", m, SemigroupQuantity::full, -1.75,
                    TargetKind::upper_bound);
        if (settings.time_derivatives) {
            add(c, tag + "dt_rho_u", 0, SemigroupQuantity::fluid_rate, -1.25, TargetKind::equal);
            add(c, tag + "dt_theta_j0", 0, SemigroupQuantity::radiation_rate, -0.75, TargetKind::equal);
        }
    };
    suite(params, "");
    if (settings.include_kappa_zero && params.kappa != 0.0) {
        PhysicalParams p0 = params;
        p0.kappa = 0.0;
        suite(p0, "kappa0_");
    }
    return out;
}

}  // namespace raddiff
