// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hcq/error.hpp"
#include "hcq/format.hpp"
#include "hcq/noise.hpp"
#include "hcq/parallel.hpp"
#include "hcq/qaoa.hpp"

namespace hcq {

/// Two-dimensional cost scan over one parameter pair, all other parameters
/// pinned at a reference vector.
struct LandscapeGrid {
  int param_i = 0;
  int param_j = 0;
  std::vector<double> axis_i;
  std::vector<double> axis_j;
  std::vector<double> values;  // row-major, |axis_i| x |axis_j|
  std::vector<double> fixed_params;
  std::string profile_name;
  std::uint64_t seed = 0;

  double at(std::size_t a, std::size_t b) const { return values[a * axis_j.size() + b]; }
};

inline std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> xs(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    xs[std::size_t(i)] = lo + (hi - lo) * double(i) / double(count - 1);
  return xs;
}

/// Scans the (i, j) parameter pair on a resolution x resolution lattice over
/// the canonical boxes. Cell (a, b) draws from child seed (seed, a, b), so
/// noisy grids are reproducible and independent of evaluation order.
inline LandscapeGrid scan_pair(const CircuitGeometry& geom, int m,
                               std::span<const double> cost_values,
                               std::pair<int, int> pair, int resolution,
                               std::span<const double> theta_star, const NoiseProfile& profile,
                               std::uint64_t seed, unsigned jobs = 1) {
  const auto [i, j] = pair;
  const int dims = 2 * geom.p;
  if (i == j || i < 0 || j < 0 || i >= dims || j >= dims)
    throw usage_error("scan_pair: invalid parameter pair");
  if (resolution < 2) throw usage_error("scan_pair: resolution must be >= 2");
  if (static_cast<int>(theta_star.size()) != dims)
    throw usage_error("scan_pair: theta_star arity mismatch");

  const std::vector<Bounds> box = canonical_bounds(geom.p);
  LandscapeGrid grid;
  grid.param_i = i;
  grid.param_j = j;
  grid.axis_i = linspace(box[std::size_t(i)].lo, box[std::size_t(i)].hi, resolution);
  grid.axis_j = linspace(box[std::size_t(j)].lo, box[std::size_t(j)].hi, resolution);
  grid.fixed_params.assign(theta_star.begin(), theta_star.end());
  grid.profile_name = profile.name;
  grid.seed = seed;
  grid.values.assign(std::size_t(resolution) * resolution, 0.0);

  const RngStream base(seed);
  parallel_for(grid.values.size(), jobs, [&](std::size_t cell) {
    const std::size_t a = cell / std::size_t(resolution);
    const std::size_t b = cell % std::size_t(resolution);
    std::vector<double> theta(theta_star.begin(), theta_star.end());
    theta[std::size_t(i)] = grid.axis_i[a];
    theta[std::size_t(j)] = grid.axis_j[b];
    const RngStream cell_rng = base.child(a, b);
    grid.values[cell] =
        estimate_cost(geom, m, cost_values, params_from_flat(theta), profile, cell_rng).value;
  });
  return grid;
}

/// The six unordered pairs of a p = 2 parameter set, in figure order:
/// (β1,β2), (β1,γ1), (β1,γ2), (β2,γ1), (β2,γ2), (γ1,γ2).
inline std::vector<std::pair<int, int>> all_param_pairs_p2() {
  return {{2, 3}, {2, 0}, {2, 1}, {3, 0}, {3, 1}, {0, 1}};
}

inline std::vector<LandscapeGrid> scan_all_pairs(const CircuitGeometry& geom, int m,
                                                 std::span<const double> cost_values,
                                                 int resolution, std::span<const double> theta_star,
                                                 const NoiseProfile& profile, std::uint64_t seed,
                                                 unsigned jobs = 1) {
  if (geom.p != 2)
    throw config_error("scan_all_pairs: the all-pairs scan is defined for p = 2");
  std::vector<LandscapeGrid> grids;
  for (auto pair : all_param_pairs_p2())
    grids.push_back(scan_pair(geom, m, cost_values, pair, resolution, theta_star, profile, seed, jobs));
  return grids;
}

/// Mean absolute difference between lattice neighbors (horizontal and
/// vertical); the ruggedness figure reported beside each grid.
inline double roughness(const LandscapeGrid& grid) {
  const std::size_t rows = grid.axis_i.size();
  const std::size_t cols = grid.axis_j.size();
  double acc = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < rows; ++a)
    for (std::size_t b = 0; b < cols; ++b) {
      if (b + 1 < cols) {
        acc += std::abs(grid.at(a, b + 1) - grid.at(a, b));
        ++pairs;
      }
      if (a + 1 < rows) {
        acc += std::abs(grid.at(a + 1, b) - grid.at(a, b));
        ++pairs;
      }
    }
  return pairs == 0 ? 0.0 : acc / double(pairs);
}

inline std::string grid_csv(const LandscapeGrid& grid, int p) {
  std::string out = "param_i,param_j,value_i,value_j,cost\n";
  const std::string ni = param_name(grid.param_i, p);
  const std::string nj = param_name(grid.param_j, p);
  for (std::size_t a = 0; a < grid.axis_i.size(); ++a)
    for (std::size_t b = 0; b < grid.axis_j.size(); ++b) {
      out += ni;
      out += ',';
      out += nj;
      out += ',';
      out += fmt_g17(grid.axis_i[a]);
      out += ',';
      out += fmt_g17(grid.axis_j[b]);
      out += ',';
      out += fmt_g17(grid.at(a, b));
      out += '\n';
    }
  return out;
}

inline nlohmann::ordered_json grid_sidecar(const LandscapeGrid& grid, int p) {
  nlohmann::ordered_json j;
  j["param_i"] = param_name(grid.param_i, p);
  j["param_j"] = param_name(grid.param_j, p);
  j["fixed_params"] = grid.fixed_params;
  j["profile"] = grid.profile_name;
  j["seed"] = grid.seed;
  j["resolution"] = grid.axis_i.size();
  j["roughness"] = roughness(grid);
  return j;
}

/// Filled level-band rendering: cells are binned into `bands` value bands
/// between the grid minimum and maximum, one path per band.
inline std::string grid_svg(const LandscapeGrid& grid, int bands = 10, int cell_px = 8) {
  const std::size_t rows = grid.axis_i.size();
  const std::size_t cols = grid.axis_j.size();
  double lo = grid.values[0], hi = grid.values[0];
  for (double v : grid.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi > lo ? hi - lo : 1.0;
  const int width = int(cols) * cell_px;
  const int height = int(rows) * cell_px;
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    std::to_string(width) + "\" height=\"" + std::to_string(height) + "\">\n";
  for (int band = 0; band < bands; ++band) {
    std::string path;
    for (std::size_t a = 0; a < rows; ++a)
      for (std::size_t b = 0; b < cols; ++b) {
        int k = int(double(bands) * (grid.at(a, b) - lo) / span);
        k = std::clamp(k, 0, bands - 1);
        if (k != band) continue;
        path += "M" + std::to_string(int(b) * cell_px) + " " + std::to_string(int(a) * cell_px) +
                "h" + std::to_string(cell_px) + "v" + std::to_string(cell_px) + "h-" +
                std::to_string(cell_px) + "z";
      }
    if (path.empty()) continue;
    // Grayscale ramp, dark = low cost.
    const int shade = 32 + (223 * band) / std::max(1, bands - 1);
    char color[8];
    std::snprintf(color, sizeof(color), "#%02x%02x%02x", shade, shade, 255 - shade / 3);
    svg += "<path d=\"" + path + "\" fill=\"" + color + "\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

inline std::string grid_file_stem(const LandscapeGrid& grid, int p) {
  return "landscape_" + param_name(grid.param_i, p) + "_" + param_name(grid.param_j, p) + "_" +
         grid.profile_name;
}

inline void write_grid_files(const LandscapeGrid& grid, int p,
                             const std::filesystem::path& out_dir, bool svg) {
  const std::string stem = grid_file_stem(grid, p);
  write_text_file(out_dir / (stem + ".csv"), grid_csv(grid, p));
  write_text_file(out_dir / (stem + ".json"), grid_sidecar(grid, p).dump(2) + "\n");
  if (svg) write_text_file(out_dir / (stem + ".svg"), grid_svg(grid));
}

}  // namespace hcq
