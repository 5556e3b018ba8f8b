#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>

namespace gbo {

enum class Integrator { EtdRk4, IfRk4 };

std::string to_string(Integrator m);
/// "etd_rk4" or "if_rk4".
Integrator integrator_from_string(const std::string& s);

/// Named initial-data family and its parameters.
struct InitialData {
  std::string family = "gaussian";  ///< gaussian | modulated | random
  double amp = 0.5;                 ///< peak amplitude (random: H^{1/2} norm)
  double width = 5.0;
  double x0 = std::numeric_limits<double>::quiet_NaN();  ///< NaN: domain center
  double carrier = 0.0;             ///< modulated family only
  std::size_t max_mode = 64;        ///< random family: highest wavenumber index
  double decay = 1.0;               ///< random family: spectral decay exponent
  std::uint64_t seed = 1;
};

struct SimConfig {
  std::size_t N = 1024;
  double L = 200.0;
  std::size_t pad = 4;
  int k = 6;
  double dt = 1e-3;
  double t_end = 10.0;
  Integrator integrator = Integrator::EtdRk4;
  InitialData data;
  double snapshot_dt = 0.1;
  double checkpoint_dt = 0.0;  ///< 0 disables checkpoints
  double R = 64.0;
  double R1 = 0.0;             ///< 0 selects R^0.9
  /// Off-equation sign flip, only for exercising the blow-up guard.
  bool focusing = false;
  /// Drop the nonlinearity (pure linear flow).
  bool linear_only = false;
  double guard_tol = 1e-6;
  double cfl_max = 2.0;
  double blowup_factor = 1e3;

  std::size_t steps() const { return static_cast<std::size_t>(std::llround(t_end / dt)); }
  std::size_t snapshot_every() const {
    return static_cast<std::size_t>(std::llround(snapshot_dt / dt));
  }
  std::size_t checkpoint_every() const {
    return static_cast<std::size_t>(std::llround(checkpoint_dt / dt));
  }
  double effective_R1() const { return R1 > 0.0 ? R1 : std::pow(R, 0.9); }
};

/// Throws InvalidArgument naming the offending field.
void validate(const SimConfig& c);

/// k even and >= 4.
void require_valid_power(int k);

}  // namespace gbo
