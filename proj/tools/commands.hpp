#pragma once

#include <iosfwd>

#include "run_config.hpp"

namespace bhlab::cli {

// Exit statuses.
inline constexpr int kExitPass = 0;
inline constexpr int kExitCertificateFailed = 1;
inline constexpr int kExitConfigError = 2;

// Each command writes its report to cfg.out (stdout when empty) and a one-line
// summary to `log`. ConfigError propagates to the caller.
int cmd_pipeline(const RunConfig& cfg, std::ostream& log);
int cmd_growth(const RunConfig& cfg, std::ostream& log);
int cmd_sections(const RunConfig& cfg, std::ostream& log);
int cmd_littlewood(const RunConfig& cfg, std::ostream& log);
int cmd_operators(const RunConfig& cfg, std::ostream& log);

/// Dispatches on cfg.command and maps exceptions to exit statuses.
int run_command(const RunConfig& cfg, std::ostream& log);

}  // namespace bhlab::cli
