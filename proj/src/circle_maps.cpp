#include "bhlab/circle_maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "bhlab/config.hpp"

namespace bhlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// User-supplied knot values are decimal approximations of multiples of 2 pi.
constexpr double kKnotWindingTol = 1e-9;

double reduce_period(double t) {
  double r = t - kTwoPi * std::floor(t / kTwoPi);
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

std::int64_t integer_winding(double rise, double tol, const char* what) {
  const double turns = rise / kTwoPi;
  const double nearest = std::round(turns);
  if (std::abs(rise - kTwoPi * nearest) > tol * std::max(1.0, std::abs(rise)))
    throw std::invalid_argument(std::string(what) + ": lift(2pi) - lift(0) is not a multiple of 2pi");
  return static_cast<std::int64_t>(nearest);
}

}  // namespace

std::string_view to_string(MapFamily family) {
  switch (family) {
    case MapFamily::linear: return "linear";
    case MapFamily::piecewise_linear: return "piecewise_linear";
    case MapFamily::smooth: return "smooth";
    case MapFamily::custom: return "custom";
  }
  return "unknown";
}

CircleMap::CircleMap(MapSpec spec, std::function<double(double)> periodic, double lipschitz)
    : spec_(std::move(spec)), winding_(spec_.winding), periodic_(std::move(periodic)), lipschitz_(lipschitz) {}

CircleMap make_linear(std::int64_t winding, double offset) {
  MapSpec spec;
  spec.family = MapFamily::linear;
  spec.winding = winding;
  spec.offset = offset;
  return CircleMap(spec, [offset](double) { return offset; }, std::abs(static_cast<double>(winding)));
}

CircleMap make_smooth(std::int64_t winding, double amplitude) {
  MapSpec spec;
  spec.family = MapFamily::smooth;
  spec.winding = winding;
  spec.amplitude = amplitude;
  return CircleMap(spec, [amplitude](double t) { return amplitude * std::sin(t); },
                   std::abs(static_cast<double>(winding)) + std::abs(amplitude));
}

CircleMap make_piecewise_linear_knots(std::vector<double> breaks, std::vector<double> values) {
  if (breaks.size() < 2 || breaks.size() != values.size())
    throw std::invalid_argument("piecewise_linear: need >= 2 knots with one value per break");
  if (breaks.front() != 0.0) throw std::invalid_argument("piecewise_linear: first break must be 0");
  if (std::abs(breaks.back() - kTwoPi) > 1e-12)
    throw std::invalid_argument("piecewise_linear: last break must be 2pi");
  breaks.back() = kTwoPi;
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    if (breaks[i] == breaks[i - 1])
      throw std::invalid_argument("piecewise_linear: repeated break (discontinuous lift)");
    if (breaks[i] < breaks[i - 1]) throw std::invalid_argument("piecewise_linear: breaks must increase");
  }
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("piecewise_linear: non-finite value");

  MapSpec spec;
  spec.family = MapFamily::piecewise_linear;
  spec.winding = integer_winding(values.back() - values.front(), kKnotWindingTol, "piecewise_linear");
  spec.breaks = breaks;
  spec.values = values;

  double lipschitz = 0.0;
  for (std::size_t i = 1; i < breaks.size(); ++i)
    lipschitz = std::max(lipschitz, std::abs((values[i] - values[i - 1]) / (breaks[i] - breaks[i - 1])));

  auto knots = std::make_shared<const std::pair<std::vector<double>, std::vector<double>>>(
      std::move(breaks), std::move(values));
  const auto nu = static_cast<double>(spec.winding);
  auto periodic = [knots, nu](double t) {
    const auto& [b, v] = *knots;
    const double r = reduce_period(t);
    auto it = std::upper_bound(b.begin(), b.end(), r);
    std::size_t i = (it == b.begin()) ? 0 : static_cast<std::size_t>(it - b.begin()) - 1;
    if (i + 1 >= b.size()) i = b.size() - 2;
    const double w = (r - b[i]) / (b[i + 1] - b[i]);
    return v[i] + w * (v[i + 1] - v[i]) - nu * r;
  };
  return CircleMap(std::move(spec), std::move(periodic), lipschitz);
}

CircleMap make_piecewise_linear(std::span<const double> breaks, std::span<const double> slopes,
                                double start) {
  if (breaks.size() != slopes.size() + 1)
    throw std::invalid_argument("piecewise_linear: need one slope per segment");
  std::vector<double> values(breaks.size());
  values[0] = start;
  for (std::size_t i = 0; i < slopes.size(); ++i)
    values[i + 1] = values[i] + slopes[i] * (breaks[i + 1] - breaks[i]);
  return make_piecewise_linear_knots(std::vector<double>(breaks.begin(), breaks.end()), std::move(values));
}

CircleMap make_tent() {
  constexpr double pi = std::numbers::pi;
  return make_piecewise_linear_knots({0.0, pi, 2.0 * pi}, {0.0, 2.0 * pi, 2.0 * pi});
}

CircleMap make_custom(std::function<double(double)> lift_on_period, double lipschitz, std::string label) {
  if (!lift_on_period) throw std::invalid_argument("custom map: empty lift");
  if (!(lipschitz >= 0.0)) throw std::invalid_argument("custom map: Lipschitz budget must be >= 0");
  MapSpec spec;
  spec.family = MapFamily::custom;
  spec.label = std::move(label);
  spec.winding = integer_winding(lift_on_period(kTwoPi) - lift_on_period(0.0), kKnotWindingTol, "custom map");
  const auto nu = static_cast<double>(spec.winding);
  auto periodic = [f = std::move(lift_on_period), nu](double t) {
    const double r = reduce_period(t);
    return f(r) - nu * r;
  };
  CircleMap map(std::move(spec), std::move(periodic), lipschitz);
  if (continuity_ratio(map) > 1.0 + 1e-6)
    throw std::invalid_argument("custom map: lift is discontinuous or exceeds its Lipschitz budget");
  return map;
}

CircleMap make_map(const MapSpec& spec) {
  switch (spec.family) {
    case MapFamily::linear: return make_linear(spec.winding, spec.offset);
    case MapFamily::smooth: return make_smooth(spec.winding, spec.amplitude);
    case MapFamily::piecewise_linear: return make_piecewise_linear_knots(spec.breaks, spec.values);
    case MapFamily::custom: break;
  }
  throw std::invalid_argument("make_map: custom maps cannot be rebuilt from a spec");
}

double continuity_ratio(const CircleMap& map, std::size_t points) {
  if (points == 0) throw std::invalid_argument("continuity_ratio: points must be >= 1");
  const double h = kTwoPi / static_cast<double>(points);
  double worst = 0.0;
  double prev = map.lift(0.0);
  for (std::size_t i = 1; i <= points; ++i) {
    const double cur = map.lift(kTwoPi * static_cast<double>(i) / static_cast<double>(points));
    worst = std::max(worst, std::abs(cur - prev));
    prev = cur;
  }
  if (worst == 0.0) return 0.0;
  const double budget = map.lipschitz() * h;
  // rounding in lift evaluation is a few ulps of |lift|
  const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(map.lift(kTwoPi)));
  return worst / (budget + rounding);
}

double winding_defect(const CircleMap& map) {
  return map.lift(kTwoPi) - map.lift(0.0) - kTwoPi * static_cast<double>(map.winding());
}

std::vector<double> sample_lift(const CircleMap& map, std::size_t order) {
  if (order == 0) throw std::invalid_argument("sample_lift: N must be >= 1");
  std::vector<double> out(order);
  for (std::size_t j = 0; j < order; ++j)
    out[j] = map.lift(kTwoPi * static_cast<double>(j) / static_cast<double>(order));
  return out;
}

CyclicFunction exp_sample(const CircleMap& map, std::int64_t n, std::size_t order) {
  if (order == 0) throw std::invalid_argument("exp_sample: N must be >= 1");
  if (n == 0) return CyclicFunction::constant(order, 1.0);
  const auto big_n = static_cast<__int128>(order);
  __int128 step = (static_cast<__int128>(n) * map.winding()) % big_n;
  if (step < 0) step += big_n;
  std::vector<cplx> v(order);
  for (std::size_t j = 0; j < order; ++j) {
    const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(order);
    const auto r = static_cast<double>((step * static_cast<__int128>(j)) % big_n);
    const double linear_angle = kTwoPi * r / static_cast<double>(order);
    v[j] = std::polar(1.0, linear_angle) * std::polar(1.0, static_cast<double>(n) * map.periodic_part(t));
  }
  return CyclicFunction(std::move(v));
}

// --- config parsing --------------------------------------------------------

namespace {

std::vector<double> number_array(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw std::invalid_argument(std::string("map spec: '") + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw std::invalid_argument(std::string("map spec: '") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::int64_t int_field(const nlohmann::json& j, const char* key, std::int64_t fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw std::invalid_argument(std::string("map spec: '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

double real_field(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) throw std::invalid_argument(std::string("map spec: '") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

MapSpec parse_map_spec(const nlohmann::json& j) {
  if (j.is_string()) return parse_map_spec(nlohmann::json{{"family", j.get<std::string>()}});
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
    throw std::invalid_argument("map spec: expected an object with a string 'family'");
  const auto family = j.at("family").get<std::string>();
  double unit = 1.0;
  if (j.contains("unit")) {
    if (j.at("unit") == "pi") unit = std::numbers::pi;
    else if (j.at("unit") != "radian") throw std::invalid_argument("map spec: unit must be 'pi' or 'radian'");
  }

  MapSpec spec;
  if (family == "linear") {
    spec.family = MapFamily::linear;
    spec.winding = int_field(j, "winding", 1);
    spec.offset = real_field(j, "offset", 0.0) * unit;
  } else if (family == "smooth") {
    spec.family = MapFamily::smooth;
    spec.winding = int_field(j, "winding", 1);
    spec.amplitude = real_field(j, "amplitude", 0.5);
  } else if (family == "tent") {
    spec = make_tent().spec();
  } else if (family == "piecewise_linear") {
    auto breaks = number_array(j, "breaks");
    for (auto& b : breaks) b *= unit;
    std::vector<double> values;
    if (j.contains("values")) {
      values = number_array(j, "values");
      for (auto& v : values) v *= unit;
    } else {
      const auto slopes = number_array(j, "slopes");
      const double start = real_field(j, "start", 0.0) * unit;
      // goes through the validating constructor below
      spec = make_piecewise_linear(breaks, slopes, start).spec();
      return spec;
    }
    spec = make_piecewise_linear_knots(std::move(breaks), std::move(values)).spec();
  } else {
    throw std::invalid_argument("map spec: unknown family '" + family + "'");
  }
  return spec;
}

MapSpec parse_map_spec(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    // bare family name, e.g. --map smooth
    j = std::string(text);
  }
  return parse_map_spec(j);
}

nlohmann::json to_json(const MapSpec& spec) {
  nlohmann::json j;
  j["family"] = std::string(to_string(spec.family));
  j["winding"] = spec.winding;
  switch (spec.family) {
    case MapFamily::linear: j["offset"] = spec.offset; break;
    case MapFamily::smooth: j["amplitude"] = spec.amplitude; break;
    case MapFamily::piecewise_linear:
      j["breaks"] = spec.breaks;
      j["values"] = spec.values;
      break;
    case MapFamily::custom: j["label"] = spec.label; break;
  }
  return j;
}

}  // namespace bhlab
