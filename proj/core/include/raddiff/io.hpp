#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "raddiff/solver.hpp"
#include "raddiff/state.hpp"

namespace raddiff {

std::string_view version() noexcept;

/// Shortest round-trip-safe text for a double, fixed at 17 significant digits.
std::string format_double(double x);

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

/// One JSON header line, then little-endian float64 samples component by component.
void write_snapshot(const std::filesystem::path& path, const StateField& state, double t);

struct Snapshot {
    StateField state;
    double t;
};
Snapshot read_snapshot(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view bytes);

void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace raddiff
