#include "raddiff/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "raddiff/error.hpp"
#include "raddiff/symbol.hpp"

namespace raddiff {

Thresholds compute_thresholds(const DerivedConstants& c) {
    Thresholds t;
    const double bound = std::max(1.0 / (9.0 * c.a_diff * c.nu * c.c_light * c.c_light),
                                  2.0 * std::pow(c.b_bar + c.c_light * c.gamma, 2) / (c.a_diff * c.gamma));
    t.k1 = 1;
    while (!(std::ldexp(1.0, 2 * t.k1 - 3) > bound)) ++t.k1;
    t.R0 = std::ldexp(1.0, t.k1 + 1);

    const ModeChange mc = mode_change(c);
    const double coupling = mc.c1 * std::abs(mc.c4) / (4.0 * c.c_light) + 3.0 * mc.c2 * std::abs(mc.c6) / (4.0 * c.gamma);
    const double damping = 3.0 * mc.c2 * mc.c5_const / (4.0 * c.gamma);
    double middle = std::numeric_limits<double>::infinity();
    if (coupling > 0.0) middle = std::pow(coupling * coupling * c.c_light / (mc.c1 * mc.c3), -0.5) * damping;
    t.r0 = std::min({1.0 / (2.0 * c.nu), middle, 0.5});
    t.k0 = static_cast<int>(std::floor(std::log2(t.r0))) - 1;
    return t;
}

Decomposition::Decomposition(std::shared_ptr<const Grid> grid) : grid_(std::move(grid)) {
    const std::size_t n = grid_->size();
    shell_.assign(n, INT_MIN);
    k_min_ = INT_MAX;
    k_max_ = INT_MIN;
    for (std::size_t q = 1; q < n; ++q) {
        const int k = shell_index(grid_->kabs(q));
        shell_[q] = k;
        k_min_ = std::min(k_min_, k);
        k_max_ = std::max(k_max_, k);
    }
    if (k_min_ > k_max_) {
        k_min_ = 0;
        k_max_ = -1;
        return;
    }
    members_.resize(static_cast<std::size_t>(k_max_ - k_min_ + 1));
    for (std::size_t q = 1; q < n; ++q) members_[static_cast<std::size_t>(shell_[q] - k_min_)].push_back(q);
}

Decomposition Decomposition::shells(std::shared_ptr<const Grid> grid) { return Decomposition(std::move(grid)); }

Decomposition Decomposition::build(std::shared_ptr<const Grid> grid, const DerivedConstants& c) {
    const Thresholds t = compute_thresholds(c);
    if (grid->nyquist() < t.R0) {
        int need = grid->n();
        while (0.5 * need * grid->dk() < t.R0) need *= 2;
        std::ostringstream os;
        os << "grid cannot resolve the high-frequency band: Nyquist wavenumber " << grid->nyquist() << " < R0 = " << t.R0
           << "; need N >= " << need << " for L_box = " << grid->box_length();
        throw ResolutionError(os.str(), need);
    }
    Decomposition d(std::move(grid));
    d.thresholds_ = t;
    return d;
}

const Thresholds& Decomposition::thresholds() const {
    if (!thresholds_) throw DomainError("decomposition was built without thresholds");
    return *thresholds_;
}

int Decomposition::shell_index(double kabs) { return static_cast<int>(std::floor(std::log2(kabs) + 0.5)); }

double Decomposition::shell_lower(int k) { return std::exp2(k - 0.5); }

double Decomposition::shell_upper(int k) { return std::exp2(k + 0.5); }

const std::vector<std::size_t>& Decomposition::modes_in_shell(int k) const {
    static const std::vector<std::size_t> empty;
    if (k < k_min_ || k > k_max_) return empty;
    return members_[static_cast<std::size_t>(k - k_min_)];
}

SpectralArray Decomposition::project(std::span<const cplx> f, int k, bool* out_of_range) const {
    SpectralArray out(grid_->size());
    const bool outside = k < k_min_ || k > k_max_;
    if (out_of_range) *out_of_range = outside;
    if (outside) return out;
    for (std::size_t q : modes_in_shell(k)) out[q] = f[q];
    return out;
}

double besov_norm(const Decomposition& dec, std::span<const cplx> f, double s, Window window) {
    int lo = dec.k_min(), hi = dec.k_max();
    if (window != Window::all) {
        const int k1 = dec.thresholds().k1;
        if (window == Window::long_wave) hi = std::min(hi, k1);
        else lo = std::max(lo, k1 + 1);
    }
    const Grid& g = dec.grid();
    double total = 0.0;
    for (int k = lo; k <= hi; ++k) {
        double e = 0.0;
        for (std::size_t q : dec.modes_in_shell(k)) e += std::norm(f[q]);
        total += std::exp2(2.0 * s * k) * g.volume() * e;
    }
    return std::sqrt(total);
}

double sobolev_norm(const Grid& grid, std::span<const cplx> f, double s) {
    double total = 0.0;
    for (std::size_t q = 1; q < grid.size(); ++q) total += std::pow(grid.k2(q), s) * std::norm(f[q]);
    return std::sqrt(grid.volume() * total);
}

namespace {

void require_band(const Grid& grid, std::span<const cplx> f, const char* what) {
    for (std::size_t q = 0; q < grid.size(); ++q) {
        if (f[q] != cplx{} && !grid.in_dealias_band(q)) {
            std::ostringstream os;
            os << "commutator: " << what << " has content outside the 2/3 band (mode index " << q
               << "); aliasing would contaminate the products";
            throw DomainError(os.str());
        }
    }
}

// u·∇f with the 2/3 mask applied to the product.
SpectralArray advect(const Grid& grid, const std::vector<SpectralArray>& u, std::span<const cplx> f) {
    RealArray prod(grid.size(), 0.0);
    for (int i = 0; i < grid.dim(); ++i) {
        const RealArray ui = grid.inverse(u[static_cast<std::size_t>(i)]);
        const RealArray df = grid.inverse(grid.derivative(f, i));
        for (std::size_t q = 0; q < grid.size(); ++q) prod[q] += ui[q] * df[q];
    }
    SpectralArray out = grid.forward(prod);
    for (std::size_t q = 0; q < grid.size(); ++q)
        if (!grid.in_dealias_band(q)) out[q] = cplx{};
    return out;
}

double gradient_sup(const Grid& grid, const std::vector<SpectralArray>& fields) {
    const Grid fine(grid.dim(), std::max(128, grid.n()), grid.box_length());
    RealArray acc(fine.size(), 0.0);
    for (const auto& f : fields) {
        for (int j = 0; j < grid.dim(); ++j) {
            const RealArray v = fine.inverse(grid.embed(grid.derivative(f, j), fine));
            for (std::size_t q = 0; q < fine.size(); ++q) acc[q] += v[q] * v[q];
        }
    }
    return std::sqrt(*std::max_element(acc.begin(), acc.end()));
}

}  // namespace

SpectralArray commutator(const Decomposition& dec, const std::vector<SpectralArray>& u, std::span<const cplx> f, int k) {
    const Grid& grid = dec.grid();
    for (const auto& ui : u) require_band(grid, ui, "velocity");
    require_band(grid, f, "scalar");
    SpectralArray a = dec.project(advect(grid, u, f), k);
    const SpectralArray fk = dec.project(f, k);
    const SpectralArray b = advect(grid, u, fk);
    for (std::size_t q = 0; q < grid.size(); ++q) a[q] -= b[q];
    return a;
}

CommutatorTerms commutator_terms(const Decomposition& dec, const std::vector<SpectralArray>& u, std::span<const cplx> f,
                                 std::span<const cplx> g, int k) {
    const Grid& grid = dec.grid();
    const SpectralArray comm = commutator(dec, u, f, k);
    const SpectralArray gk = dec.project(g, k);
    CommutatorTerms t;
    t.lhs = grid.inner(comm, gk);

    const double grad_u = gradient_sup(grid, u);
    const double grad_f = gradient_sup(grid, {SpectralArray(f.begin(), f.end())});
    const double gk_norm = grid.l2_norm(gk);
    const double fk_norm = grid.l2_norm(dec.project(f, k));
    double uk_sq = 0.0;
    for (const auto& ui : u) uk_sq += grid.l2_norm_squared(dec.project(ui, k));
    double tail = 0.0;
    for (int l = std::max(k - 1, dec.k_min()); l <= dec.k_max(); ++l)
        tail += std::exp2(k - l) * grid.l2_norm(dec.project(f, l));
    t.rhs = grad_u * fk_norm * gk_norm + grad_f * std::sqrt(uk_sq) * gk_norm + grad_u * gk_norm * tail;
    return t;
}

}  // namespace raddiff
