#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bhlab/circle_maps.hpp"
#include "bhlab/config.hpp"

namespace bhlab::cli {

/// Bad flags, config files or fixtures; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string map_text = "smooth";
  MapSpec map;
  std::size_t N = 6;
  std::int64_t D = 3;
  std::int64_t budget = 1'000'000;
  // Per-command defaults apply when unset: growth 16..1024, operators 0..16.
  std::optional<std::int64_t> n_min;
  std::optional<std::int64_t> n_max;
  double tol = 1e-3;
  std::optional<std::uint64_t> seed;
  std::string out;     // empty: stdout
  std::string format;  // empty: the command's default
  std::string phi_n;   // fixture path (pipeline)
  std::string norms_out;  // pipeline: optional (n, ||e^{in phi_N}||_A) CSV
  std::string strategy = "intervals";
  std::vector<std::uint64_t> primes;
  std::size_t trials = 1000;
  std::string mode = "exhaustive";  // sections: exhaustive | random
  std::string shape = "4x4";
  std::size_t kernel_grid = 256;
  Caps caps;
};

/// Keys mirror the long flag names with '-' replaced by '_'. Unknown keys are
/// rejected.
void apply_config_json(RunConfig& cfg, const nlohmann::json& j);
void apply_config_file(RunConfig& cfg, const std::string& path);

/// BHLAB_TRIPLE_CAP, BHLAB_IDENTITY_CAP, BHLAB_CIRCLE_GRID, BHLAB_KERNEL_SUPPORT.
void apply_env_caps(RunConfig& cfg);

/// Parses map_text into map and checks every field's range. Throws
/// ConfigError.
void finalize(RunConfig& cfg);

/// "4x4" -> {4, 4}
std::vector<std::size_t> parse_shape(const std::string& shape);

}  // namespace bhlab::cli
