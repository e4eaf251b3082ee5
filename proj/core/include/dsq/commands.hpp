#ifndef DSQ_COMMANDS_HPP
#define DSQ_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "dsq/run_config.hpp"

namespace dsq {

enum class OutputFormat { csv, json };
enum class RunMode { analytic, mc };

struct CommandOptions {
  OutputFormat format = OutputFormat::csv;
  RunMode mode = RunMode::analytic;
  double phi_s_pi = 0.25;  // analysis phase of the fringe scan, units of pi
  int n_phases = 16;       // idler phases per fringe scan
};

// Exit codes shared with the command line tool: 0 success, 2 configuration
// error, 3 numerical failure, 4 completed Bell run without a violation.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitNoViolation = 4;

// Accidental-coincidence audit of a derived run: total singles probabilities
// with background folded in, the fringe extrema of the total coincidence
// probability, the accidental floor p1*p2 (the delayed-window estimate), and
// the minima-to-floor ratio.
struct BackgroundAudit {
  double p_singles_d1 = 0;
  double p_singles_d2 = 0;
  double rate_d1_hz = 0;
  double rate_d2_hz = 0;
  double p_coincidence_min = 0;
  double p_coincidence_max = 0;
  double p_accidental_floor = 0;
  double minima_over_floor = 0;
};

BackgroundAudit audit_background(const DerivedParams& derived);

int cmd_validate(const RunConfig& config, std::ostream& out);
int cmd_params(const RunConfig& config, const CommandOptions& opts,
               std::ostream& out);
int cmd_fringes(const RunConfig& config, const CommandOptions& opts,
                std::ostream& out);
int cmd_bell(const RunConfig& config, const CommandOptions& opts,
             std::ostream& out);

// Re-derives and reruns the Bell estimate with the config value at `path`
// (JSON pointer, or dots for slashes) replaced by each entry of `values`.
int cmd_sweep(const RunConfig& config, const CommandOptions& opts,
              const std::string& path, const std::vector<double>& values,
              std::ostream& out);

}  // namespace dsq

#endif
