#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gbo/sim_config.hpp"

namespace gbo {

inline const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> s{"conservation", "monotonicity", "local", "positivity",
                                          "norms"};
  return s;
}

struct ConservationOptions {
  double tol = 1e-8;  ///< relative drift of mass and energy
};

struct MonotonicityOptions {
  std::size_t samples = 200;  ///< random band-limited fields
  std::size_t N = 256;
  double L = 64.0;
  std::size_t max_mode = 24;
  double gap_tol = 1e-10;  ///< relative to monotonicity_scale
  double drift_tol = 1e-9;  ///< allowed decrease of xE - xM between records
};

struct LocalOptions {
  std::vector<double> radii{32.0, 64.0, 128.0};
  double fft_tol = 1e-10;
  double sup_slack = 1.1;  ///< sup|M|/R may grow by at most this factor
  bool budget = true;
};

struct PositivityOptions {
  std::vector<std::size_t> N_modes{4, 8};
  int restarts = 32;
  double tol = 1e-8;
  int max_iter = 20000;
  std::size_t samples = 10000;
  std::size_t falsifier_N = 8;
  double chi_beta = 0.0;
  int chi_n = 1;
  bool precondition = false;
  double f_floor = -1e-6;
  double identity_tol = 1e-6;
};

struct NormsOptions {
  std::size_t samples = 20;
  std::size_t N = 256;
  double L = 64.0;
  std::size_t max_mode = 40;
  int J = 5;
  int C_k = 0;  ///< 0 selects the default width for k
  double eps = 0.1;
  double identity_tol = 1e-10;
};

struct RunConfig {
  SimConfig sim;
  std::vector<std::string> suites{"conservation"};
  std::string out = "gbo-out";
  std::uint64_t seed = 1;
  unsigned workers = 1;
  ConservationOptions conservation;
  MonotonicityOptions monotonicity;
  LocalOptions local;
  PositivityOptions positivity;
  NormsOptions norms;
  /// Override objects (serialized JSON) applied on top of this config, one run each.
  std::vector<std::string> sweep;
  /// The input document with "sweep" removed, serialized.
  std::string base_json;
};

/// Parses and validates a JSON document.  Unknown keys are rejected; messages
/// name the offending field.  Throws FormatError for malformed JSON and
/// InvalidArgument for schema or range violations.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

/// Base document merged with one sweep override (RFC 7386 merge patch).
RunConfig apply_override(const RunConfig& base, const std::string& override_json);

/// Fully resolved config as pretty JSON (deterministic key order).  The
/// output directory and worker count are left out: they do not affect results.
std::string to_json(const RunConfig& c);

}  // namespace gbo
