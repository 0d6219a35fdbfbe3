#pragma once

// Continuous self-maps of the circle, represented by a lift
//
//   lift(t) = winding * t + periodic(t),   periodic(t + 2 pi) = periodic(t),
//
// so lift(t + 2 pi) = lift(t) + 2 pi * winding. Keeping the winding and the
// periodic part separate makes "subtract the linear part" free and lets
// four-term combinations of a linear map cancel exactly in floating point.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bhlab/cyclic_fourier.hpp"

namespace bhlab {

enum class MapFamily { linear, piecewise_linear, smooth, custom };

std::string_view to_string(MapFamily family);

/// Declarative description of a map, as read from experiment configs.
struct MapSpec {
  MapFamily family = MapFamily::linear;
  std::int64_t winding = 0;
  double offset = 0.0;     // linear: lift(0)
  double amplitude = 0.0;  // smooth: coefficient of sin t
  std::vector<double> breaks;  // piecewise_linear knots t_0 = 0 < ... < t_k = 2 pi
  std::vector<double> values;  // piecewise_linear lift(t_i)
  std::string label;           // custom maps only
};

/// Parses {"family": ..., ...}. Accepted families: "linear" (winding, offset),
/// "smooth" (winding, amplitude), "tent", "piecewise_linear" (breaks plus
/// either values, or slopes and start). With "unit": "pi" breaks, values and
/// start are given in multiples of pi. Throws std::invalid_argument.
MapSpec parse_map_spec(const nlohmann::json& j);
MapSpec parse_map_spec(std::string_view text);
nlohmann::json to_json(const MapSpec& spec);

class CircleMap {
 public:
  double lift(double t) const { return static_cast<double>(winding_) * t + periodic_(t); }
  double periodic_part(double t) const { return periodic_(t); }
  std::int64_t winding() const { return winding_; }
  MapFamily family() const { return spec_.family; }
  /// Upper bound on |lift'|, used for continuity checks and grid resolution.
  double lipschitz() const { return lipschitz_; }
  const MapSpec& spec() const { return spec_; }
  bool is_linear() const { return spec_.family == MapFamily::linear; }

 private:
  friend CircleMap make_linear(std::int64_t, double);
  friend CircleMap make_smooth(std::int64_t, double);
  friend CircleMap make_piecewise_linear_knots(std::vector<double>, std::vector<double>);
  friend CircleMap make_custom(std::function<double(double)>, double, std::string);

  CircleMap(MapSpec spec, std::function<double(double)> periodic, double lipschitz);

  MapSpec spec_;
  std::int64_t winding_;
  std::function<double(double)> periodic_;
  double lipschitz_;
};

/// lift(t) = winding * t + offset.
CircleMap make_linear(std::int64_t winding, double offset);

/// lift(t) = winding * t + amplitude * sin t.
CircleMap make_smooth(std::int64_t winding, double amplitude);

/// Piecewise-linear lift through (breaks[i], values[i]). breaks must start at
/// 0, end at 2 pi and be strictly increasing (a repeated break is a jump and is
/// rejected as discontinuous); values.back() - values.front() must be 2 pi
/// times an integer.
CircleMap make_piecewise_linear_knots(std::vector<double> breaks, std::vector<double> values);

/// Same, with slopes per segment and the starting value lift(0).
CircleMap make_piecewise_linear(std::span<const double> breaks, std::span<const double> slopes,
                                double start = 0.0);

/// Knots (0, 0), (pi, 2 pi), (2 pi, 2 pi): winding 1, lift - t is a tent.
CircleMap make_tent();

/// Arbitrary lift given on [0, 2 pi]; winding is read off the endpoints and
/// continuity is checked against `lipschitz`.
CircleMap make_custom(std::function<double(double)> lift_on_period, double lipschitz,
                      std::string label = "custom");

CircleMap make_map(const MapSpec& spec);

/// Largest |lift(t_{i+1}) - lift(t_i)| / (L h) over a uniform grid of
/// `points` steps on [0, 2 pi]; <= 1 (up to rounding) for a continuous map
/// within its Lipschitz budget L.
double continuity_ratio(const CircleMap& map, std::size_t points = std::size_t{1} << 14);

/// lift(2 pi) - lift(0) - 2 pi * winding.
double winding_defect(const CircleMap& map);

/// Entry j is lift(2 pi j / N).
std::vector<double> sample_lift(const CircleMap& map, std::size_t order);

/// e^{i n lift} restricted to T_N. The winding contribution n*nu*j is reduced
/// mod N in integers, so linear maps with zero offset give characters exactly.
CyclicFunction exp_sample(const CircleMap& map, std::int64_t n, std::size_t order);

}  // namespace bhlab
