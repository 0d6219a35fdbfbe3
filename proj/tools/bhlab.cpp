#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "run_config.hpp"

using bhlab::cli::RunConfig;

namespace {

void add_common(CLI::App& sub, RunConfig& cfg, std::string& config_path) {
  sub.add_option("--map", cfg.map_text, "Map: family name (linear, smooth, tent) or JSON spec");
  sub.add_option("--N", cfg.N, "Grid order (pipeline) or prime order (littlewood)");
  sub.add_option("--D", cfg.D, "Dirichlet parameter");
  sub.add_option("--budget", cfg.budget, "Largest Q the Dirichlet scan may try");
  sub.add_option("--n-min", cfg.n_min, "Smallest power n");
  sub.add_option("--n-max", cfg.n_max, "Largest power n");
  sub.add_option("--tol", cfg.tol, "Relative convergence tolerance");
  sub.add_option("--seed", cfg.seed, "Seed for randomized commands");
  sub.add_option("--out", cfg.out, "Report path (stdout when omitted)");
  sub.add_option("--format", cfg.format, "csv, json or long");
  sub.add_option("--config", config_path, "JSON config file; its keys override flags");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-grid experiments on powers e^{in phi} of circle maps"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string config_path;

  auto* pipeline = app.add_subcommand("pipeline", "Rational approximant chain with every certificate");
  add_common(*pipeline, cfg, config_path);
  pipeline->add_option("--phi-n", cfg.phi_n, "JSON fixture {Q, numerators, angles?, D?} replacing the Dirichlet step");
  pipeline->add_option("--norms", cfg.norms_out, "Also write n,||e^{in phi_N}||_A to this CSV");

  auto* growth = app.add_subcommand("growth", "||e^{in phi}||_A on the circle for n = n-min, 2 n-min, ..., n-max");
  add_common(*growth, cfg, config_path);

  auto* sections = app.add_subcommand("sections", "Section bound over exhaustive or random subsets");
  add_common(*sections, cfg, config_path);
  sections->add_option("--mode", cfg.mode, "exhaustive or random");
  sections->add_option("--shape", cfg.shape, "Product shape such as 4x4 or 3x3x3");
  sections->add_option("--trials", cfg.trials, "Random subsets to draw");

  auto* littlewood = app.add_subcommand("littlewood", "delta(E) / ||1_E||_A extremal search on Z_N, N prime");
  add_common(*littlewood, cfg, config_path);
  littlewood->add_option("--strategy", cfg.strategy, "random_sets, intervals or quadratic_residues");
  littlewood->add_option("--primes", cfg.primes, "Several primes at once")->delimiter(',');
  littlewood->add_option("--trials", cfg.trials, "Random sets to draw");

  auto* operators = app.add_subcommand("operators", "l^1 norms of convolution powers of the symbol e^{i phi}");
  add_common(*operators, cfg, config_path);
  operators->add_option("--kernel-grid", cfg.kernel_grid, "Grid M used to read off the kernel");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return bhlab::cli::kExitConfigError;
  }

  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  try {
    if (!config_path.empty()) bhlab::cli::apply_config_file(cfg, config_path);
    bhlab::cli::apply_env_caps(cfg);
    bhlab::cli::finalize(cfg);
  } catch (const bhlab::cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bhlab::cli::kExitConfigError;
  }
  return bhlab::cli::run_command(cfg, std::cerr);
}
