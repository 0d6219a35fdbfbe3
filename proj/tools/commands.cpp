#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "bhlab/bh_pipeline.hpp"
#include "bhlab/conv_operators.hpp"
#include "bhlab/littlewood_gk.hpp"
#include "bhlab/norm_growth.hpp"
#include "bhlab/section_measure.hpp"

namespace bhlab::cli {

namespace {

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot open output file '" + cfg.out + "'");
  f << text;
  if (!f) throw ConfigError("failed writing output file '" + cfg.out + "'");
}

std::string format_or(const RunConfig& cfg, const char* fallback) { return cfg.format.empty() ? fallback : cfg.format; }

void require_format(const std::string& format, std::initializer_list<const char*> allowed, const char* command) {
  for (const char* a : allowed)
    if (format == a) return;
  throw ConfigError(fmt::format("{}: format '{}' not supported", command, format));
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

// "/a/b" -> value rows, keys in sorted order.
std::string flat_csv(const nlohmann::json& j) {
  std::string out = "key,value\n";
  const nlohmann::json flat = j.flatten();
  for (const auto& [key, v] : flat.items()) out += key + "," + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
  return out;
}

RationalSampling load_fixture(const std::string& path, const CircleMap& map, std::int64_t default_D) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read phi_N fixture '" + path + "'");
  try {
    const auto j = nlohmann::json::parse(in);
    const auto numerators = j.at("numerators").get<std::vector<std::int64_t>>();
    if (j.contains("N") && j.at("N").get<std::size_t>() != numerators.size())
      throw ConfigError("phi_N fixture: N does not match the number of numerators");
    std::optional<std::vector<double>> angles;
    if (j.contains("angles")) angles = j.at("angles").get<std::vector<double>>();
    const std::int64_t D = j.value("D", default_D);
    return make_rational_sampling(map, j.at("Q").get<std::int64_t>(), D, numerators, std::move(angles));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("phi_N fixture '" + path + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("phi_N fixture '" + path + "': " + e.what());
  }
}

}  // namespace

int cmd_pipeline(const RunConfig& cfg, std::ostream& log) {
  const std::string format = format_or(cfg, "json");
  require_format(format, {"json", "csv"}, "pipeline");
  const CircleMap map = make_map(cfg.map);
  PipelineConfig pc;
  pc.map = cfg.map;
  pc.N = cfg.N;
  pc.D = cfg.D;
  pc.budget = cfg.budget;
  pc.caps = cfg.caps;
  PipelineRun run;
  std::optional<RationalSampling> phi;
  if (!cfg.phi_n.empty()) {
    phi = load_fixture(cfg.phi_n, map, cfg.D);
    pc.N = phi->N;
    pc.D = phi->D;
    run = run_pipeline(map, *phi, pc);
  } else {
    try {
      phi = build_phi_N(map, pc.N, pc.D, pc.budget);
    } catch (const BudgetExhausted&) {
    }
    run = phi ? run_pipeline(map, *phi, pc) : run_pipeline(map, pc);
    if (phi) run.report["phi_N"]["dirichlet_certificate"] = true;
  }
  if (!cfg.norms_out.empty() && phi) {
    std::ofstream f(cfg.norms_out, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot open norms file '" + cfg.norms_out + "'");
    write_phiN_norms_csv(f, *phi, pc.norm_check_cap);
  }
  emit(cfg, format == "json" ? dump(run.report) : flat_csv(run.report));
  const auto& skipped = run.report.at("skipped");
  log << fmt::format("pipeline: {} (skipped: {})\n", run.certificates_pass ? "all certificates pass" : "CERTIFICATE FAILED",
                     skipped.empty() ? "none" : skipped.dump());
  return run.certificates_pass ? kExitPass : kExitCertificateFailed;
}

int cmd_growth(const RunConfig& cfg, std::ostream& log) {
  const std::string format = format_or(cfg, "csv");
  const CircleMap map = make_map(cfg.map);
  const std::int64_t lo = cfg.n_min.value_or(16);
  const std::int64_t hi = cfg.n_max.value_or(1024);
  if (hi < lo) throw ConfigError("growth: n-max must be >= n-min");
  std::vector<std::int64_t> ns;
  for (std::int64_t n = lo; n <= hi; n *= 2) ns.push_back(n);
  const GrowthSeries series = growth_table(map, ns, cfg.tol, cfg.caps);

  bool floor_ok = true, chain_ok = true;
  for (const auto& e : series.entries) {
    floor_ok = floor_ok && e.value >= 1.0 - 1e-9;
    for (std::size_t i = 1; i < e.history.size(); ++i)
      chain_ok = chain_ok && e.history[i].second >= e.history[i - 1].second - 1e-9;
  }
  const bool pass = floor_ok && chain_ok;

  std::ostringstream out;
  if (format == "csv") {
    write_growth_csv(out, series);
  } else if (format == "long") {
    write_growth_long(out, series);
  } else {
    nlohmann::json j;
    j["map"] = to_json(series.map);
    j["tolerance"] = series.tolerance;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : series.entries) {
      nlohmann::json h = nlohmann::json::array();
      for (const auto& [m, v] : e.history) h.push_back({m, v});
      j["entries"].push_back({{"n", e.n},
                              {"norm", e.value},
                              {"grid", e.grid},
                              {"converged", e.converged},
                              {"tail_estimate", e.tail_estimate},
                              {"history", h}});
    }
    nlohmann::json fits = nlohmann::json::object();
    for (auto model : {GrowthModel::constant, GrowthModel::log, GrowthModel::power}) {
      try {
        const FitResult f = fit_growth(series, model);
        fits[std::string(to_string(model))] = {{"coefficient", f.coefficient},
                                               {"exponent", f.exponent},
                                               {"intercept", f.intercept},
                                               {"residual", std::isfinite(f.residual) ? nlohmann::json(f.residual)
                                                                                      : nlohmann::json(nullptr)},
                                               {"points", f.points}};
      } catch (const std::invalid_argument&) {
        fits[std::string(to_string(model))] = nullptr;
      }
    }
    j["fits"] = fits;
    j["floor_holds"] = floor_ok;
    j["lower_bound_chain_holds"] = chain_ok;
    out << dump(j);
  }
  emit(cfg, out.str());
  const auto converged = std::count_if(series.entries.begin(), series.entries.end(), [](const auto& e) { return e.converged; });
  log << fmt::format("growth: {} entries, {} converged, {}\n", series.entries.size(), converged,
                     pass ? "floor and lower-bound chain hold" : "CERTIFICATE FAILED");
  return pass ? kExitPass : kExitCertificateFailed;
}

int cmd_sections(const RunConfig& cfg, std::ostream& log) {
  const std::string format = format_or(cfg, "json");
  require_format(format, {"json", "csv"}, "sections");
  const auto sizes = parse_shape(cfg.shape);
  const FiniteProductSpace space(sizes);
  const std::size_t cells = space.cells();

  std::uint64_t subsets = 0, violations = 0, traces = 0, trace_failures = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  auto check = [&](std::vector<std::uint8_t> m) {
    const ProductSubset e(space, std::move(m));
    const SectionBoundCheck c = section_bound_check(e);
    ++subsets;
    if (!c.holds) ++violations;
    worst_slack = std::min(worst_slack, c.slack());
    if (sizes.size() == 2 && c.delta0 < 0.5) {
      ++traces;
      if (!two_factor_inequality_trace(e).all_hold()) ++trace_failures;
    }
  };

  if (cfg.mode == "exhaustive") {
    if (cells > 20) throw ConfigError(fmt::format("sections: exhaustive mode needs at most 20 cells, shape has {}", cells));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells); ++mask) {
      std::vector<std::uint8_t> m(cells);
      for (std::size_t f = 0; f < cells; ++f) m[f] = (mask >> f) & 1u;
      check(std::move(m));
    }
  } else {
    if (!cfg.seed) throw ConfigError("sections: random mode requires --seed");
    std::mt19937_64 rng(*cfg.seed);
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      std::vector<std::uint8_t> m(cells);
      std::uint64_t word = 0;
      for (std::size_t f = 0; f < cells; ++f) {
        if (f % 64 == 0) word = rng();
        m[f] = (word >> (f % 64)) & 1u;
      }
      check(std::move(m));
    }
  }
  const bool pass = violations == 0 && trace_failures == 0;
  nlohmann::json j = {{"mode", cfg.mode},
                      {"shape", cfg.shape},
                      {"seed", cfg.mode == "random" ? nlohmann::json(*cfg.seed) : nlohmann::json(nullptr)},
                      {"subsets", subsets},
                      {"violations", violations},
                      {"worst_slack", worst_slack},
                      {"traces_checked", traces},
                      {"trace_failures", trace_failures},
                      {"pass", pass}};
  if (format == "json") {
    emit(cfg, dump(j));
  } else {
    emit(cfg, fmt::format("mode,shape,subsets,violations,worst_slack,traces_checked,trace_failures\n{},{},{},{},{},{},{}\n",
                          cfg.mode, cfg.shape, subsets, violations, worst_slack, traces, trace_failures));
  }
  log << fmt::format("sections: {} on {} subsets of {}, worst slack {}\n", pass ? "pass" : "FAIL", subsets, cfg.shape,
                     worst_slack);
  return pass ? kExitPass : kExitCertificateFailed;
}

int cmd_littlewood(const RunConfig& cfg, std::ostream& log) {
  const std::string format = format_or(cfg, "csv");
  require_format(format, {"json", "csv"}, "littlewood");
  const std::vector<std::uint64_t> primes = cfg.primes.empty() ? std::vector<std::uint64_t>{cfg.N} : cfg.primes;
  for (auto p : primes)
    if (!is_prime(p)) throw ConfigError(fmt::format("N must be prime (got {})", p));
  SearchStrategy strategy;
  try {
    strategy = parse_strategy(cfg.strategy);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (strategy == SearchStrategy::random_sets && !cfg.seed) throw ConfigError("littlewood: random_sets requires --seed");

  std::vector<GKRecord> records;
  for (auto p : primes) records.push_back(extremal_search(p, strategy, cfg.trials, cfg.seed.value_or(0)));

  std::ostringstream out;
  if (format == "csv") {
    write_gk_csv(out, records);
  } else {
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records)
      arr.push_back({{"N", r.N},
                     {"strategy", std::string(to_string(r.strategy))},
                     {"best_ratio", r.best.ratio},
                     {"delta", r.best.delta},
                     {"a_norm", r.best.a_norm},
                     {"min_modulus_ratio", opt(r.min_modulus_ratio)},
                     {"envelope", opt(r.envelope)},
                     {"alt_envelope", opt(r.alt_envelope)},
                     {"candidates", r.candidates},
                     {"witness", witness_hex(r.witness)}});
    out << dump(nlohmann::json{{"seed", cfg.seed ? nlohmann::json(*cfg.seed) : nlohmann::json(nullptr)},
                               {"records", arr}});
  }
  emit(cfg, out.str());
  log << fmt::format("littlewood: {} record(s), strategy {}\n", records.size(), to_string(strategy));
  return kExitPass;
}

int cmd_operators(const RunConfig& cfg, std::ostream& log) {
  const std::string format = format_or(cfg, "csv");
  require_format(format, {"json", "csv"}, "operators");
  const CircleMap map = make_map(cfg.map);
  const std::int64_t n_max = cfg.n_max.value_or(16);
  const Kernel u = kernel_from_map(map, cfg.kernel_grid);
  const auto powers = power_norms(u, n_max, cfg.caps);
  if (!powers) {
    const nlohmann::json j = {{"status", "skipped"}, {"reason", powers.reason()}};
    emit(cfg, format == "json" ? dump(j) : "n,power_norm,support_width,tail_mass\n");
    log << "operators: skipped (" << powers.reason() << ")\n";
    return kExitPass;
  }
  const auto& p = *powers;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < p.size(); ++m)
    for (std::size_t n = 0; m + n < p.size(); ++n) {
      const double rhs = p[m].norm * p[n].norm;
      worst = std::min(worst, rhs - p[m + n].norm + 1e-9 * std::max(1.0, rhs));
    }
  const bool pass = p.front().norm == 1.0 && worst >= 0.0;

  std::ostringstream out;
  if (format == "csv") {
    write_power_csv(out, p);
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : p)
      arr.push_back({{"n", e.n}, {"power_norm", e.norm}, {"support_width", e.support_width}, {"tail_mass", e.tail_mass}});
    out << dump(nlohmann::json{{"map", to_json(cfg.map)},
                               {"kernel_grid", cfg.kernel_grid},
                               {"kernel_l1", u.l1()},
                               {"kernel_tail_mass", u.tail_mass()},
                               {"powers", arr},
                               {"submultiplicative", worst >= 0.0},
                               {"status", "ok"}});
  }
  emit(cfg, out.str());
  log << fmt::format("operators: {} powers, {}\n", p.size() - 1, pass ? "submultiplicative" : "CERTIFICATE FAILED");
  return pass ? kExitPass : kExitCertificateFailed;
}

int run_command(const RunConfig& cfg, std::ostream& log) {
  try {
    if (cfg.command == "pipeline") return cmd_pipeline(cfg, log);
    if (cfg.command == "growth") return cmd_growth(cfg, log);
    if (cfg.command == "sections") return cmd_sections(cfg, log);
    if (cfg.command == "littlewood") return cmd_littlewood(cfg, log);
    if (cfg.command == "operators") return cmd_operators(cfg, log);
    throw ConfigError("unknown command '" + cfg.command + "'");
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    log << "certificate failure: " << e.what() << "\n";
    return kExitCertificateFailed;
  }
}

}  // namespace bhlab::cli
