#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "realclock/cli/config.hpp"
#include "realclock/cli/output.hpp"

namespace realclock::cli {

Report run_evolve(const RunConfig& cfg);
Report run_zurek(const RunConfig& cfg);
Report run_condprob(const RunConfig& cfg);
Report run_clock_limits(const RunConfig& cfg);

/// Runs the sweep's embedded command once per axis value on `workers`
/// threads; rows come out in axis order whatever the worker count.
Report run_sweep(const RunConfig& cfg, std::size_t workers);

Report run_command(const RunConfig& cfg, std::size_t workers);

/// Per-run scalars reported by a sweep row.
struct Summary {
  std::vector<std::string> columns;
  std::vector<double> values;
};

Summary summarize(const RunConfig& cfg, Command command);

/// Axis value i of n on [min, max]; exactly min when n = 1.
double sweep_value(const SweepSettings& s, std::size_t i);

/// Worker-pool size from REALCLOCK_QM_WORKERS, default 1.
std::size_t workers_from_env();

/// A run that failed inside a sweep, tagged with its axis value.
class SweepError : public Error {
 public:
  SweepError(std::string what, int exit_code) : Error(std::move(what)), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

}  // namespace realclock::cli
