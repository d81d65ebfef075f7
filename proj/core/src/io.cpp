#include "raddiff/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "raddiff/error.hpp"

namespace raddiff {

#ifndef RADDIFF_VERSION
#define RADDIFF_VERSION "0.0.0"
#endif

std::string_view version() noexcept { return RADDIFF_VERSION; }

std::string format_double(double x) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << x;
    return os.str();
}

namespace {

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream f(path, mode | std::ios::binary);
    if (!f) throw Error("cannot open " + path.string() + " for writing");
    return f;
}

}  // namespace

void write_text(const std::filesystem::path& path, std::string_view text) {
    auto f = open_out(path);
    f << text;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    auto f = open_out(path);
    for (std::size_t i = 0; i < header.size(); ++i) f << (i ? "," : "") << header[i];
    f << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << format_double(row[i]);
        f << '\n';
    }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
    std::vector<std::string> header{"t", "grad0", "grad1", "grad2", "grad3", "grad4", "h4", "theta_l2",
                                    "xi_l2", "Theta_l2", "min_density", "min_temperature", "mass_mean", "u_sup"};
    std::vector<std::vector<double>> rows;
    for (const auto& s : traj.samples) {
        std::vector<double> r{s.t};
        r.insert(r.end(), s.gradient_norms.begin(), s.gradient_norms.end());
        r.insert(r.end(), {s.h4, s.theta_norm, s.xi_norm, s.big_theta_norm, s.min_density, s.min_temperature,
                           s.mass_mean, s.u_sup});
        rows.push_back(std::move(r));
    }
    write_csv(path, header, rows);
}

namespace {

void put_le(std::ostream& os, double x) {
    auto bits = std::bit_cast<std::uint64_t>(x);
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
    os.write(buf, 8);
}

double get_le(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return std::bit_cast<double>(bits);
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const StateField& state, double t) {
    const Grid& g = state.grid();
    nlohmann::ordered_json h;
    h["dim"] = g.dim();
    h["N"] = g.n();
    h["L_box"] = g.box_length();
    h["fields"] = state.component_names();
    h["time"] = t;
    h["dtype"] = "float64-le";
    auto f = open_out(path);
    f << h.dump() << '\n';
    for (std::size_t c = 0; c < state.n_components(); ++c)
        for (double v : state.values(c)) put_le(f, v);
}

Snapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open snapshot " + path.string());
    std::string line;
    std::getline(f, line);
    const auto h = nlohmann::json::parse(line);
    auto grid = std::make_shared<const Grid>(h.at("dim").get<int>(), h.at("N").get<int>(), h.at("L_box").get<double>());
    StateField state(grid);
    const std::size_t count = state.n_components() * grid->size();
    if (h.at("fields").size() != state.n_components()) throw Error("snapshot field list does not match dimension");
    std::vector<unsigned char> raw(count * 8);
    f.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(f.gcount()) != raw.size()) throw Error("snapshot payload truncated");
    for (std::size_t c = 0; c < state.n_components(); ++c) {
        auto v = state.values_mut(c);
        for (std::size_t i = 0; i < grid->size(); ++i) v[i] = get_le(&raw[(c * grid->size() + i) * 8]);
    }
    state.refresh_spectral();
    return {std::move(state), h.at("time").get<double>()};
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace raddiff
