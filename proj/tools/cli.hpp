#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "raddiff/decay.hpp"
#include "raddiff/params.hpp"
#include "raddiff/solver.hpp"

namespace raddiff::cli {

enum ExitCode : int { ok = 0, invalid = 1, numerical = 2 };

struct SymbolSettings {
    double rho_min = 1e-2;
    double rho_max = 1e3;
    int n_points = 25;
    int gap_points = 256;
};

struct LpSettings {
    std::vector<double> s_list{0.0, 3.0, 4.0};
};

struct Config {
    PhysicalParams params;
    double b_power = 4.0;
    SymbolSettings symbol;
    RunConfig run;
    RateSettings fit;
    double fit_t_min = 10.0, fit_t_max = 1e4;
    int fit_n_times = 12;
    LpSettings lp;
};

/// Strict parse: unknown keys and wrong types throw ConstraintViolation.
Config parse_config(const nlohmann::json& doc);
nlohmann::ordered_json resolved_json(const Config& cfg);

const std::vector<std::string>& commands();

/// Runs one command; returns the process exit code. Messages go to stderr.
int execute(const std::string& command, const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
            std::optional<std::uint64_t> seed);

int main(int argc, char** argv);

}  // namespace raddiff::cli
