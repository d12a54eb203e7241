#include "kdvflat_cli/artifacts.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include <fmt/format.h>

#include "kdvflat/error.hpp"

namespace kdvflat::cli {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_out(const std::filesystem::path& path) {
  File f(std::fopen(path.c_str(), "w"));
  if (!f) fail(ErrorCode::io, "cannot write " + path.string());
  return f;
}

void close_checked(File f, const std::filesystem::path& path) {
  if (std::fclose(f.release()) != 0) fail(ErrorCode::io, "error writing " + path.string());
}

}  // namespace

void write_control_csv(const std::filesystem::path& path, const ControlSignal& u) {
  auto f = open_out(path);
  fmt::print(f.get(), "t,u\n");
  for (std::size_t k = 0; k < u.times.size(); ++k) fmt::print(f.get(), "{:.17g},{:.17g}\n", u.times[k], u.values[k]);
  close_checked(std::move(f), path);
}

void write_snapshots_csv(const std::filesystem::path& path, const Trajectory& traj, int rows) {
  auto f = open_out(path);
  fmt::print(f.get(), "t,x,y\n");
  const std::size_t nt = traj.t_grid.size();
  std::vector<std::size_t> picks;
  for (int r = 0; r < rows; ++r) {
    const auto it = static_cast<std::size_t>(std::llround(static_cast<double>(r) * (nt - 1) / (rows - 1)));
    if (picks.empty() || picks.back() != it) picks.push_back(it);
  }
  for (std::size_t it : picks) {
    for (std::size_t ix = 0; ix < traj.x_grid.size(); ++ix) {
      fmt::print(f.get(), "{:.17g},{:.17g},{:.17g}\n", traj.t_grid[it], traj.x_grid[ix], traj.y(it, ix));
    }
  }
  close_checked(std::move(f), path);
}

void write_final_csv(const std::filesystem::path& path, const Trajectory& traj, const Profile& target) {
  auto f = open_out(path);
  const std::size_t last = traj.t_grid.size() - 1;
  fmt::print(f.get(), "{}\n", target ? "x,y,y1" : "x,y");
  for (std::size_t ix = 0; ix < traj.x_grid.size(); ++ix) {
    const double x = traj.x_grid[ix];
    if (target) {
      fmt::print(f.get(), "{:.17g},{:.17g},{:.17g}\n", x, traj.y(last, ix), target(x));
    } else {
      fmt::print(f.get(), "{:.17g},{:.17g}\n", x, traj.y(last, ix));
    }
  }
  close_checked(std::move(f), path);
}

void write_columns_csv(const std::filesystem::path& path, const std::string& header,
                       std::span<const std::vector<double>> columns) {
  auto f = open_out(path);
  fmt::print(f.get(), "{}\n", header);
  const std::size_t n = columns.empty() ? 0 : columns.front().size();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      fmt::print(f.get(), "{}{:.17g}", c == 0 ? "" : ",", columns[c][r]);
    }
    fmt::print(f.get(), "\n");
  }
  close_checked(std::move(f), path);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) fail(ErrorCode::io, "error writing " + path.string());
}

Profile read_profile_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::config, "cannot open profile " + path.string());
  std::vector<std::pair<double, double>> pts;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x = 0.0;
    double y = 0.0;
    if (!(row >> x >> y)) {
      if (pts.empty()) continue;  // header
      fail(ErrorCode::config, "bad row in " + path.string() + ": " + line);
    }
    pts.emplace_back(x, y);
  }
  if (pts.size() < 2) fail(ErrorCode::config, "profile needs at least two samples");
  std::sort(pts.begin(), pts.end());
  if (pts.front().first > -1.0 + 1e-12 || pts.back().first < -1e-12) {
    fail(ErrorCode::config, "profile samples must cover [-1, 0]");
  }
  return [pts = std::move(pts)](double x) {
    auto hi = std::lower_bound(pts.begin(), pts.end(), std::make_pair(x, -1e300));
    if (hi == pts.begin()) return hi->second;
    if (hi == pts.end()) return pts.back().second;
    const auto lo = std::prev(hi);
    const double w = (x - lo->first) / (hi->first - lo->first);
    return (1.0 - w) * lo->second + w * hi->second;
  };
}

}  // namespace kdvflat::cli
