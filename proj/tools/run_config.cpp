#include "run_config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>

#include <fmt/format.h>

namespace bhlab::cli {

namespace {

template <typename T>
T get_as(const nlohmann::json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config: bad value for '" + key + "'");
  }
}

template <typename T>
void require_range(const char* name, T value, T lo, T hi) {
  if (value < lo || value > hi) throw ConfigError(fmt::format("{} must be in [{}, {}], got {}", name, lo, hi, value));
}

std::uint64_t parse_cap(const char* name, const char* text) {
  std::uint64_t v = 0;
  const std::string s(text);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v == 0)
    throw ConfigError(fmt::format("{} must be a positive integer, got '{}'", name, s));
  return v;
}

}  // namespace

void apply_config_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& [key, v] : j.items()) {
    if (key == "map") cfg.map_text = v.is_string() ? v.get<std::string>() : v.dump();
    else if (key == "N") cfg.N = get_as<std::size_t>(v, key);
    else if (key == "D") cfg.D = get_as<std::int64_t>(v, key);
    else if (key == "budget") cfg.budget = get_as<std::int64_t>(v, key);
    else if (key == "n_min") cfg.n_min = get_as<std::int64_t>(v, key);
    else if (key == "n_max") cfg.n_max = get_as<std::int64_t>(v, key);
    else if (key == "tol") cfg.tol = get_as<double>(v, key);
    else if (key == "seed") cfg.seed = get_as<std::uint64_t>(v, key);
    else if (key == "out") cfg.out = get_as<std::string>(v, key);
    else if (key == "format") cfg.format = get_as<std::string>(v, key);
    else if (key == "phi_n") cfg.phi_n = get_as<std::string>(v, key);
    else if (key == "norms") cfg.norms_out = get_as<std::string>(v, key);
    else if (key == "strategy") cfg.strategy = get_as<std::string>(v, key);
    else if (key == "primes") cfg.primes = get_as<std::vector<std::uint64_t>>(v, key);
    else if (key == "trials") cfg.trials = get_as<std::size_t>(v, key);
    else if (key == "mode") cfg.mode = get_as<std::string>(v, key);
    else if (key == "shape") cfg.shape = get_as<std::string>(v, key);
    else if (key == "kernel_grid") cfg.kernel_grid = get_as<std::size_t>(v, key);
    else throw ConfigError("config: unknown key '" + key + "'");
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  apply_config_json(cfg, j);
}

void apply_env_caps(RunConfig& cfg) {
  if (const char* v = std::getenv("BHLAB_TRIPLE_CAP")) cfg.caps.triple_grid = parse_cap("BHLAB_TRIPLE_CAP", v);
  if (const char* v = std::getenv("BHLAB_IDENTITY_CAP")) cfg.caps.identity_work = parse_cap("BHLAB_IDENTITY_CAP", v);
  if (const char* v = std::getenv("BHLAB_CIRCLE_GRID")) cfg.caps.circle_grid = parse_cap("BHLAB_CIRCLE_GRID", v);
  if (const char* v = std::getenv("BHLAB_KERNEL_SUPPORT"))
    cfg.caps.kernel_support = parse_cap("BHLAB_KERNEL_SUPPORT", v);
}

std::vector<std::size_t> parse_shape(const std::string& shape) {
  std::vector<std::size_t> sizes;
  std::size_t pos = 0;
  while (pos <= shape.size()) {
    const std::size_t next = std::min(shape.find('x', pos), shape.size());
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(shape.data() + pos, shape.data() + next, v);
    if (ec != std::errc() || ptr != shape.data() + next || v == 0)
      throw ConfigError("shape must look like 4x4 or 3x3x3, got '" + shape + "'");
    sizes.push_back(v);
    pos = next + 1;
  }
  return sizes;
}

void finalize(RunConfig& cfg) {
  try {
    cfg.map = parse_map_spec(std::string_view(cfg.map_text));
  } catch (const std::exception& e) {
    throw ConfigError(std::string("--map: ") + e.what());
  }
  require_range<std::size_t>("N", cfg.N, 1, 4096);
  require_range<std::int64_t>("D", cfg.D, 1, 1'000'000);
  require_range<std::int64_t>("budget", cfg.budget, 1, 1'000'000'000'000);
  if (cfg.n_min) require_range<std::int64_t>("n-min", *cfg.n_min, 1, std::int64_t{1} << 20);
  if (cfg.n_max) require_range<std::int64_t>("n-max", *cfg.n_max, cfg.n_min.value_or(0), std::int64_t{1} << 20);
  if (!(cfg.tol > 0.0 && cfg.tol < 1.0)) throw ConfigError(fmt::format("tol must be in (0, 1), got {}", cfg.tol));
  require_range<std::size_t>("trials", cfg.trials, 1, 100'000'000);
  require_range<std::size_t>("kernel-grid", cfg.kernel_grid, 1, std::size_t{1} << 20);
  if (!cfg.format.empty() && cfg.format != "csv" && cfg.format != "json" && cfg.format != "long")
    throw ConfigError("format must be csv, json or long, got '" + cfg.format + "'");
  if (cfg.mode != "exhaustive" && cfg.mode != "random")
    throw ConfigError("mode must be exhaustive or random, got '" + cfg.mode + "'");
  parse_shape(cfg.shape);
}

}  // namespace bhlab::cli
