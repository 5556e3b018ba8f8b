#pragma once

#include <string>
#include <vector>

#include "gbo/config.hpp"

namespace gbo {

enum ExitStatus : int { kPass = 0, kAssertionFailed = 1, kAborted = 2 };

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string message;
};

struct RunResult {
  int status = kPass;
  std::vector<SuiteResult> suites;
  std::string abort_message;
};

/// Runs the selected suites and writes into out_dir:
///   config.json       resolved configuration
///   series.csv        observables of the simulated trajectory
///   final.gbo         last recorded state; checkpoints/ holds periodic ones
///   <suite>.json      one report per suite
///   abort.json        only when the simulation stopped early (status 2)
///   summary.json      status and per-suite outcome
RunResult run(const RunConfig& c, const std::string& out_dir);

/// One run per override in c.sweep, in out_dir/run_000, run_001, ...,
/// executed by up to `workers` threads.  Returns the largest status.
int run_sweep(const RunConfig& c, const std::string& out_dir, unsigned workers);

/// Suite name behind a CLI subcommand ("simulate" -> "conservation", ...).
std::string suite_for_command(const std::string& command);

}  // namespace gbo
