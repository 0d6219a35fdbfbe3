#pragma once

// ||e^{i n phi}||_{A(T)} on the full circle, approximated from below by grid
// norms ||e^{i n phi}||_{A(T_M)} (folding the circle series onto T_M can only
// shrink the l^1 norm), with M doubled until the values settle.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "bhlab/circle_maps.hpp"
#include "bhlab/config.hpp"

namespace bhlab {

struct NormEstimate {
  std::int64_t n = 0;
  double value = 1.0;        // last grid norm, a lower bound for the circle norm
  std::uint64_t grid = 1;    // M of the last grid used
  bool converged = false;
  double tail_estimate = 0.0;  // last increment value(M) - value(M/2)
  std::vector<std::pair<std::uint64_t, double>> history;  // (M, ||.||_{A(T_M)})
};

/// Smallest power of two >= resolution * (1 + |n| L).
std::uint64_t initial_grid(const CircleMap& map, std::int64_t n, const Caps& caps = {});

/// Doubles M from initial_grid until two successive values differ relatively
/// by less than `tolerance`, or M would exceed caps.circle_grid (converged is
/// then false). Linear maps and n = 0 give exactly 1. Throws
/// std::invalid_argument if tolerance <= 0.
NormEstimate circle_a_norm(const CircleMap& map, std::int64_t n, double tolerance, const Caps& caps = {});

struct GrowthSeries {
  MapSpec map;
  double tolerance = 0.0;
  std::vector<NormEstimate> entries;
};

/// n_list must be strictly increasing and positive.
GrowthSeries growth_table(const CircleMap& map, std::span<const std::int64_t> n_list, double tolerance,
                          const Caps& caps = {});

enum class GrowthModel { constant, log, power };

std::string_view to_string(GrowthModel m);

struct FitResult {
  GrowthModel model = GrowthModel::constant;
  double coefficient = 0.0;  // constant: c; log: a in a log n + b; power: C in C n^p
  double exponent = 0.0;     // power only
  double intercept = 0.0;    // log only
  double residual = 0.0;     // RMS of log(norm) - log(model)
  std::size_t points = 0;
};

/// Least squares over converged entries: constant = mean, log = linear
/// regression of norm on log n, power = regression of log norm on log n.
/// Needs at least 4 converged entries (std::invalid_argument otherwise). A
/// log model that goes non-positive at a data point has infinite residual.
FitResult fit_growth(const GrowthSeries& series, GrowthModel model);

/// Header "n,norm,grid,converged".
void write_growth_csv(std::ostream& out, const GrowthSeries& series);
/// Long format "n,quantity,value" (quantities norm, grid, converged,
/// tail_estimate, norm_over_log_n) for plotting tools.
void write_growth_long(std::ostream& out, const GrowthSeries& series);

}  // namespace bhlab
