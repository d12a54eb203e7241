#pragma once

// CSV and JSON artifacts. Numbers are written with 17 significant digits.

#include <filesystem>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "kdvflat/trajectory.hpp"

namespace kdvflat::cli {

inline constexpr int kReportSchemaVersion = 1;

/// t,u
void write_control_csv(const std::filesystem::path& path, const ControlSignal& u);

/// t,x,y for `rows` time indices spread evenly over the trajectory (first and last included).
void write_snapshots_csv(const std::filesystem::path& path, const Trajectory& traj, int rows);

/// x,y for the last time row; with a target, x,y,y1.
void write_final_csv(const std::filesystem::path& path, const Trajectory& traj, const Profile& target = {});

/// Header line followed by the rows of equal-length columns.
void write_columns_csv(const std::filesystem::path& path, const std::string& header,
                       std::span<const std::vector<double>> columns);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// Reads a two-column x,y CSV (header optional) as a piecewise-linear profile on [-1, 0].
Profile read_profile_csv(const std::filesystem::path& path);

}  // namespace kdvflat::cli
