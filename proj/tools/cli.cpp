#include "cli.hpp"

#include <chrono>
#include <climits>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "raddiff/energy.hpp"
#include "raddiff/error.hpp"
#include "raddiff/io.hpp"
#include "raddiff/lp.hpp"
#include "raddiff/model.hpp"
#include "raddiff/symbol.hpp"

namespace raddiff::cli {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

// Reads keys from one section and rejects whatever is left over.
class Section {
public:
    Section(const json& doc, std::string name) : name_(std::move(name)) {
        if (doc.contains(name_)) {
            obj_ = &doc.at(name_);
            if (!obj_->is_object()) fail("section must be an object");
        }
    }

    template <class T>
    void read(const std::string& key, T& out) {
        seen_.insert(key);
        if (!obj_ || !obj_->contains(key)) return;
        const json& v = obj_->at(key);
        try {
            if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean()) fail(key + " must be a boolean");
            } else if constexpr (std::is_integral_v<T>) {
                if (!v.is_number_integer()) fail(key + " must be an integer");
            } else if constexpr (std::is_floating_point_v<T>) {
                if (!v.is_number()) fail(key + " must be a number");
            }
            out = v.get<T>();
        } catch (const json::exception&) {
            fail(key + " has the wrong type");
        }
    }

    void finish() const {
        if (!obj_) return;
        for (const auto& [k, v] : obj_->items())
            if (!seen_.count(k)) fail("unknown key '" + k + "'");
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ConstraintViolation("config section '" + name_ + "': " + what);
    }

private:
    std::string name_;
    const json* obj_ = nullptr;
    std::set<std::string> seen_;
};

std::string profile_name(InitProfile p) { return p == InitProfile::gaussian ? "gaussian" : "random_band"; }

}  // namespace

Config parse_config(const json& doc) {
    if (!doc.is_object()) throw ConstraintViolation("config must be a JSON object");
    static const std::set<std::string> sections{"params", "symbol", "grid", "run", "init", "fit", "lp"};
    for (const auto& [k, v] : doc.items())
        if (!sections.count(k)) throw ConstraintViolation("config: unknown section '" + k + "'");

    Config cfg;
    cfg.params = reference_params();
    {
        Section s(doc, "params");
        auto& p = cfg.params;
        s.read("mu", p.mu);
        s.read("lambda", p.lambda);
        s.read("kappa", p.kappa);
        s.read("c_light", p.c_light);
        s.read("l_rad", p.l_rad);
        s.read("sigma_a", p.sigma_a);
        s.read("sigma_s", p.sigma_s);
        s.read("b_power", cfg.b_power);
        s.finish();
        p.b_law = BLaw::power(cfg.b_power);
    }
    {
        Section s(doc, "symbol");
        s.read("rho_min", cfg.symbol.rho_min);
        s.read("rho_max", cfg.symbol.rho_max);
        s.read("n_points", cfg.symbol.n_points);
        s.read("gap_points", cfg.symbol.gap_points);
        s.finish();
        if (!(cfg.symbol.rho_min > 0.0 && cfg.symbol.rho_max > cfg.symbol.rho_min))
            s.fail("require 0 < rho_min < rho_max");
        if (cfg.symbol.n_points < 2 || cfg.symbol.gap_points < 2) s.fail("n_points and gap_points must be >= 2");
    }
    auto& run = cfg.run;
    run.params = cfg.params;
    {
        Section s(doc, "grid");
        s.read("dim", run.dim);
        s.read("N", run.n);
        s.read("L_box", run.box_length);
        s.finish();
    }
    {
        Section s(doc, "run");
        s.read("dt", run.dt);
        s.read("t_end", run.t_end);
        s.read("sample_interval", run.sample_interval);
        s.read("dealias", run.dealias);
        s.read("linear_only", run.linear_only);
        s.finish();
    }
    {
        Section s(doc, "init");
        std::string profile = profile_name(run.init.profile);
        s.read("profile", profile);
        s.read("amplitude", run.init.amplitude);
        s.read("width", run.init.width);
        s.read("seed", run.init.seed);
        s.read("band", run.init.band);
        s.finish();
        if (profile == "gaussian")
            run.init.profile = InitProfile::gaussian;
        else if (profile == "random_band")
            run.init.profile = InitProfile::random_band;
        else
            s.fail("profile must be 'gaussian' or 'random_band'");
    }
    {
        Section s(doc, "fit");
        auto& f = cfg.fit;
        s.read("t_min", cfg.fit_t_min);
        s.read("t_max", cfg.fit_t_max);
        s.read("n_times", cfg.fit_n_times);
        s.read("m_list", f.m_list);
        s.read("tolerance", f.tolerance);
        s.read("kappa_zero", f.include_kappa_zero);
        s.read("higher_orders", f.higher_orders);
        s.read("time_derivatives", f.time_derivatives);
        std::vector<double> v0(f.profile.v0.begin(), f.profile.v0.end());
        s.read("v0", v0);
        s.read("width", f.profile.width);
        s.read("solenoidal", f.profile.solenoidal);
        s.read("rel_tol", f.rel_tol);
        s.finish();
        if (v0.size() != 4) s.fail("v0 must have four entries (rho, d, theta, j0)");
        std::copy(v0.begin(), v0.end(), f.profile.v0.begin());
        if (!(cfg.fit_t_min > 0.0 && cfg.fit_t_max > cfg.fit_t_min)) s.fail("require 0 < t_min < t_max");
        if (cfg.fit_n_times < 8) s.fail("n_times must be >= 8");
        for (int m : f.m_list)
            if (m < 0 || m > 4) s.fail("m_list entries must lie in 0..4");
        if (!(f.profile.width > 0.0)) s.fail("width must be positive");
        if (!(f.rel_tol > 0.0 && f.rel_tol < 1e-3)) s.fail("rel_tol must lie in (0, 1e-3)");
        f.times = log_spaced(cfg.fit_t_min, cfg.fit_t_max, cfg.fit_n_times);
    }
    {
        Section s(doc, "lp");
        s.read("s_list", cfg.lp.s_list);
        s.finish();
    }
    cfg.params.validate();
    run.validate();
    return cfg;
}

ojson resolved_json(const Config& cfg) {
    const auto& p = cfg.params;
    const auto& r = cfg.run;
    const auto& f = cfg.fit;
    ojson j;
    j["params"] = {{"mu", p.mu},           {"lambda", p.lambda},   {"kappa", p.kappa},
                   {"c_light", p.c_light}, {"l_rad", p.l_rad},     {"sigma_a", p.sigma_a},
                   {"sigma_s", p.sigma_s}, {"b_power", cfg.b_power}};
    j["symbol"] = {{"rho_min", cfg.symbol.rho_min},
                   {"rho_max", cfg.symbol.rho_max},
                   {"n_points", cfg.symbol.n_points},
                   {"gap_points", cfg.symbol.gap_points}};
    j["grid"] = {{"dim", r.dim}, {"N", r.n}, {"L_box", r.box_length}};
    j["run"] = {{"dt", r.dt},
                {"t_end", r.t_end},
                {"sample_interval", r.sample_interval},
                {"dealias", r.dealias},
                {"linear_only", r.linear_only}};
    j["init"] = {{"profile", profile_name(r.init.profile)},
                 {"amplitude", r.init.amplitude},
                 {"width", r.init.width},
                 {"seed", r.init.seed},
                 {"band", r.init.band}};
    j["fit"] = {{"t_min", cfg.fit_t_min},
                {"t_max", cfg.fit_t_max},
                {"n_times", cfg.fit_n_times},
                {"m_list", f.m_list},
                {"tolerance", f.tolerance},
                {"kappa_zero", f.include_kappa_zero},
                {"higher_orders", f.higher_orders},
                {"time_derivatives", f.time_derivatives},
                {"v0", f.profile.v0},
                {"width", f.profile.width},
                {"solenoidal", f.profile.solenoidal},
                {"rel_tol", f.rel_tol}};
    j["lp"] = {{"s_list", cfg.lp.s_list}};
    return j;
}

const std::vector<std::string>& commands() {
    static const std::vector<std::string> list{"symbol", "semigroup-decay", "simulate", "lp", "energy", "verify-rates"};
    return list;
}

namespace {

void write_json(const fs::path& path, const ojson& j) { write_text(path, j.dump(2) + "\n"); }

std::string hex64(std::uint64_t h) {
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

ojson report_json(const DecayReport& r) {
    const char* kind = r.kind == TargetKind::equal ? "equal" : r.kind == TargetKind::upper_bound ? "upper_bound" : "report";
    return {{"quantity", r.quantity}, {"slope", r.slope},  {"target", r.target}, {"tolerance", r.tolerance},
            {"comparison", kind},     {"pass", r.pass},    {"fit_t_min", r.window.t_min},
            {"times", r.times},       {"norms", r.norms}};
}

int cmd_symbol(const Config& cfg, const fs::path& out) {
    const DerivedConstants c = derive_constants(cfg.params);
    std::vector<double> grid{0.0};
    for (double r : log_spaced(cfg.symbol.rho_min, cfg.symbol.rho_max, cfg.symbol.n_points)) grid.push_back(r);

    std::vector<std::vector<double>> eig_rows, hw_rows;
    for (double r : grid) {
        const SpectrumReport s = eigenvalues(c, r);
        std::vector<double> row{r};
        for (const auto& l : s.eigenvalues) row.insert(row.end(), {l.real(), l.imag()});
        row.push_back(*std::max_element(s.residuals.begin(), s.residuals.end()));
        row.push_back(s.abscissa);
        eig_rows.push_back(std::move(row));
        if (r > 0.0) {
            const CharPoly p = char_poly(c, r);
            const HurwitzChain h = s.hurwitz;
            hw_rows.push_back({r, p.a1, p.a2, p.a3, p.a4, h.A1, h.A2, h.A3, h.A4, h.a21, h.a22, h.a23});
        }
    }
    write_csv(out / "eigenvalues.csv",
              {"rho", "re1", "im1", "re2", "im2", "re3", "im3", "re4", "im4", "max_residual", "abscissa"}, eig_rows);
    write_csv(out / "hurwitz.csv", {"rho", "a1", "a2", "a3", "a4", "A1", "A2", "A3", "A4", "a21", "a22", "a23"},
              hw_rows);

    const ModeChange mc = mode_change(c);
    const Thresholds th = compute_thresholds(c);
    const GapResult gap = spectral_gap(c, th.r0, th.R0, cfg.symbol.gap_points);
    ojson disc = ojson::array();
    for (const auto& d : mc.discrepancies) disc.push_back({{"name", d.name}, {"printed", d.printed}, {"derived", d.derived}});
    const auto ex = expansion_coefficients(c, c.kappa == 0.0);
    write_json(out / "symbol.json",
               {{"constants", {{"nu", c.nu}, {"gamma", c.gamma}, {"a", c.a_diff}, {"b", c.b_bar}, {"b_eq", c.b_eq}}},
                {"mode_change",
                 {{"c1", mc.c1},
                  {"c2", mc.c2},
                  {"c3", mc.c3},
                  {"c4", mc.c4},
                  {"c5_const", mc.c5_const},
                  {"c5_quad", mc.c5_quad},
                  {"c6", mc.c6},
                  {"discrepancies", disc},
                  {"max_conjugation_error", mc.max_conjugation_error}}},
                {"expansion",
                 {{"pair_imag", ex.pair_imag},
                  {"pair_real", ex.pair_real},
                  {"slow", ex.slow},
                  {"fast0", ex.fast0},
                  {"fast2", ex.fast2},
                  {"fast2_printed", ex.fast2_printed}}},
                {"thresholds", {{"k0", th.k0}, {"k1", th.k1}, {"r0", th.r0}, {"R0", th.R0}}},
                {"spectral_gap", {{"iota", gap.iota}, {"argmin", gap.argmin}, {"n_grid", cfg.symbol.gap_points}}}});
    return ok;
}

int cmd_semigroup(const Config& cfg, const fs::path& out) {
    const DerivedConstants c = derive_constants(cfg.params);
    const auto& times = cfg.fit.times;
    std::vector<std::string> header{"t"};
    std::vector<std::vector<double>> columns;
    ojson slopes = ojson::array();
    auto add = [&](const std::string& label, int m, SemigroupQuantity q) {
        auto norms = semigroup_norms(c, cfg.fit.profile, m, times, q, cfg.fit.rel_tol);
        header.push_back(label);
        ojson entry{{"quantity", label}};
        try {
            entry["slope"] = fit_decay(times, norms, {cfg.fit_t_min, cfg.fit_t_max});
        } catch (const DomainError& e) {
            entry["slope"] = nullptr;
            entry["error"] = e.what();
        }
        slopes.push_back(entry);
        columns.push_back(std::move(norms));
    };
    for (int m : cfg.fit.m_list) {
        add("grad" + std::to_string(m) + "_U", m, SemigroupQuantity::full);
        add("grad" + std::to_string(m) + "_Xi", m, SemigroupQuantity::damped);
        add("grad" + std::to_string(m) + "_theta", m, SemigroupQuantity::temperature);
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::vector<double> row{times[i]};
        for (const auto& col : columns) row.push_back(col[i]);
        rows.push_back(std::move(row));
    }
    write_csv(out / "semigroup.csv", header, rows);
    write_json(out / "slopes.json", slopes);
    return ok;
}

int cmd_simulate(const Config& cfg, const fs::path& out) {
    auto grid = std::make_shared<const Grid>(cfg.run.dim, cfg.run.n, cfg.run.box_length);
    write_snapshot(out / "initial.snap", init_perturbation(cfg.run, grid), 0.0);
    StateField final_state(grid);
    try {
        const Trajectory traj = run(cfg.run, &final_state);
        write_trajectory_csv(out / "trajectory.csv", traj);
        write_snapshot(out / "final.snap", final_state, traj.samples.back().t);
    } catch (const RunAborted& e) {
        write_trajectory_csv(out / "trajectory.csv", e.partial());
        write_snapshot(out / "last_valid.snap", e.last_state(), e.time());
        std::cerr << e.what() << "\n";
        return numerical;
    }
    return ok;
}

ojson threshold_json(const Thresholds& th) { return {{"k0", th.k0}, {"k1", th.k1}, {"r0", th.r0}, {"R0", th.R0}}; }

int cmd_lp(const Config& cfg, const fs::path& out) {
    const DerivedConstants c = derive_constants(cfg.params);
    auto grid = std::make_shared<const Grid>(cfg.run.dim, cfg.run.n, cfg.run.box_length);
    const StateField state = init_perturbation(cfg.run, grid);
    const Decomposition dec = Decomposition::shells(grid);
    const auto names = state.component_names();

    std::vector<std::string> header{"k", "lower", "upper", "modes"};
    for (const auto& n : names) header.push_back(n + "_l2");
    std::vector<std::vector<double>> rows;
    for (int k = dec.k_min(); k <= dec.k_max(); ++k) {
        std::vector<double> row{double(k), Decomposition::shell_lower(k), Decomposition::shell_upper(k),
                                double(dec.modes_in_shell(k).size())};
        for (std::size_t comp = 0; comp < state.n_components(); ++comp)
            row.push_back(grid->l2_norm(dec.project(state.coeffs(comp), k)));
        rows.push_back(std::move(row));
    }
    write_csv(out / "shells.csv", header, rows);

    ojson norms = ojson::array();
    for (std::size_t comp = 0; comp < state.n_components(); ++comp)
        for (double s : cfg.lp.s_list)
            norms.push_back({{"field", names[comp]},
                             {"s", s},
                             {"besov", besov_norm(dec, state.coeffs(comp), s)},
                             {"sobolev", sobolev_norm(*grid, state.coeffs(comp), s)}});
    ojson doc{{"k_min", dec.k_min()}, {"k_max", dec.k_max()}, {"thresholds", threshold_json(compute_thresholds(c))},
              {"norms", norms}};
    write_json(out / "lp.json", doc);
    return ok;
}

int cmd_energy(const Config& cfg, const fs::path& out) {
    const DerivedConstants c = derive_constants(cfg.params);
    const AnalysisConstants ac = select_constants(c);
    auto grid = std::make_shared<const Grid>(cfg.run.dim, cfg.run.n, cfg.run.box_length);
    const StateField state = init_perturbation(cfg.run, grid);

    ojson doc{{"beta1", ac.beta1},
              {"beta2", ac.beta2},
              {"beta3", ac.beta3},
              {"thresholds", threshold_json(ac.thresholds)},
              {"c1", ac.modes.c1},
              {"c2", ac.modes.c2},
              {"c3", ac.modes.c3}};
    const EquivalenceBounds low = low_equivalence(*grid, ac, c);
    doc["low_equivalence"] = {{"lower", low.lower}, {"upper", low.upper}, {"constant", low.constant()}};

    // Low band: one row per grid mode with |ξ| <= R₀.
    const auto parts = helmholtz_split(state);
    std::vector<std::vector<double>> low_rows;
    for (std::size_t q = 1; q < grid->size(); ++q) {
        const double r = grid->kabs(q);
        if (r > ac.thresholds.R0 || grid->is_nyquist(q)) continue;
        const std::array<cplx, 4> mode{state.coeffs(StateField::rho)[q], parts.d[q], state.coeffs(state.theta())[q],
                                       state.coeffs(state.j0())[q]};
        low_rows.push_back({double(q), r, low_freq_functional(mode, r, ac, c)});
    }
    write_csv(out / "low_freq.csv", {"index", "xi_abs", "L_l"}, low_rows);

    try {
        const Decomposition dec = Decomposition::build(grid, c);
        std::vector<std::vector<double>> rows;
        ojson eq = ojson::array();
        for (int k = ac.thresholds.k1 + 1; k <= dec.k_max(); ++k) {
            if (dec.modes_in_shell(k).empty()) continue;
            const auto v = high_freq_functional(state, dec, k, ac, c);
            rows.push_back({double(k), v.L, v.H});
            const auto b = high_equivalence(dec, k, ac, c);
            eq.push_back({{"k", k}, {"lower", b.lower}, {"upper", b.upper}, {"constant", b.constant()}});
        }
        write_csv(out / "high_freq.csv", {"k", "L_hk", "H_hk"}, rows);
        doc["high_equivalence"] = eq;
        doc["high_band_resolved"] = true;
    } catch (const ResolutionError& e) {
        doc["high_band_resolved"] = false;
        doc["required_N"] = e.required_n();
        std::cerr << "energy: high band skipped: " << e.what() << "\n";
    }
    write_json(out / "energy.json", doc);
    return ok;
}

int cmd_verify(const Config& cfg, const fs::path& out) {
    RateSettings s = cfg.fit;
    auto reports = verify_rates(cfg.params, s);
    ojson arr = ojson::array();
    for (auto& r : reports) {
        arr.push_back(report_json(r));
    }
    write_json(out / "rates.json", {{"all_pass", all_pass(reports)}, {"reports", arr}});
    for (const auto& r : reports)
        if (!r.pass)
            std::cerr << "rate check failed: " << r.quantity << " slope " << format_double(r.slope) << " vs target "
                      << r.target << "\n";
    return all_pass(reports) ? ok : numerical;
}

}  // namespace

int execute(const std::string& command, const fs::path& config_path, const fs::path& out_dir,
            std::optional<std::uint64_t> seed) {
    const auto started = std::chrono::steady_clock::now();
    Config cfg;
    std::string config_text;
    try {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) throw ConstraintViolation("cannot read config file " + config_path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        json doc;
        try {
            doc = json::parse(buf.str());
        } catch (const json::parse_error& e) {
            throw ConstraintViolation(std::string("config is not valid JSON: ") + e.what());
        }
        cfg = parse_config(doc);
        if (seed) cfg.run.init.seed = *seed;
        if (std::find(commands().begin(), commands().end(), command) == commands().end())
            throw ConstraintViolation("unknown command '" + command + "'");
        fs::create_directories(out_dir);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return invalid;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return invalid;
    }

    const ojson resolved = resolved_json(cfg);
    const std::string resolved_text = resolved.dump(2) + "\n";
    int code = ok;
    std::string failure;
    try {
        write_text(out_dir / "resolved_config.json", resolved_text);
        if (command == "symbol") code = cmd_symbol(cfg, out_dir);
        else if (command == "semigroup-decay") code = cmd_semigroup(cfg, out_dir);
        else if (command == "simulate") code = cmd_simulate(cfg, out_dir);
        else if (command == "lp") code = cmd_lp(cfg, out_dir);
        else if (command == "energy") code = cmd_energy(cfg, out_dir);
        else code = cmd_verify(cfg, out_dir);
    } catch (const ConstraintViolation& e) {
        failure = e.what();
        code = invalid;
    } catch (const DomainError& e) {
        failure = e.what();
        code = invalid;
    } catch (const ResolutionError& e) {
        failure = e.what();
        code = invalid;
    } catch (const Error& e) {
        failure = e.what();
        code = numerical;
    }
    if (!failure.empty()) std::cerr << "error: " << failure << "\n";

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    ojson manifest{{"command", command},
                   {"config_hash", "fnv1a64:" + hex64(fnv1a64(resolved_text))},
                   {"version", std::string(version())},
                   {"seed", cfg.run.init.seed},
                   {"exit_code", code},
                   {"wall_time_s", wall}};
    if (!failure.empty()) manifest["error"] = failure;
    try {
        write_json(out_dir / "manifest.json", manifest);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return code == ok ? invalid : code;
    }
    return code;
}

int main(int argc, char** argv) {
    CLI::App app{"Diffusion-approximation radiation hydrodynamics laboratory"};
    app.require_subcommand(1, 1);
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    for (const auto& name : commands()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config, "JSON configuration document")->required();
        sub->add_option("--out", out, "output directory")->required();
        sub->add_option("--seed", seed, "override init.seed");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : invalid;
    }
    return execute(app.get_subcommands().front()->get_name(), config, out, seed);
}

}  // namespace raddiff::cli
