#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gbo/diagnostics.hpp"
#include "gbo/field.hpp"
#include "gbo/sim_config.hpp"

namespace gbo {

struct SimState {
  double t = 0.0;
  SpectralField u;
  int k = 6;
  std::size_t step_count = 0;
};

/// Raised when a run must stop.  Carries the last state that passed all checks.
class SimulationAbort : public std::runtime_error {
 public:
  enum class Kind { BlowUp, Cfl, Guard };
  SimulationAbort(Kind kind, const std::string& what, SimState last)
      : std::runtime_error(what), kind_(kind), last_(std::move(last)) {}
  Kind kind() const { return kind_; }
  const SimState& last_valid() const { return last_; }

 private:
  Kind kind_;
  SimState last_;
};

/// One-step map for u_t = -i xi|xi| u - sign * d_x(u^{k+1}) with precomputed
/// exponential coefficients.
class Stepper {
 public:
  Stepper(GridPtr grid, int k, double dt, Integrator method, bool focusing = false,
          bool linear_only = false);

  SpectralField step(const SpectralField& u) const;
  /// dt * max|xi| * (k+1) * ||u||_inf^k, the advective stability number of
  /// the nonlinear stage.
  double cfl_number(const SpectralField& u) const;
  double dt() const { return dt_; }

 private:
  std::vector<cplx> nonlinear(const std::vector<cplx>& v) const;

  GridPtr grid_;
  int k_;
  double dt_;
  Integrator method_;
  double sign_;
  bool linear_only_;
  std::vector<cplx> e_, e2_, q_, f1_, f2_, f3_, dx_;
};

/// Single step of size dt (dt may be negative for time reversal).
SimState advance(const SimState& s, double dt, Integrator method, bool focusing = false);

SpectralField initial_data(GridPtr grid, const InitialData& d);

/// Runs the configured simulation.  Snapshots and observables are recorded
/// every snapshot_dt.  Throws SimulationAbort on blow-up, CFL or guard
/// failure.  When checkpoint_dt > 0, on_checkpoint receives the state every
/// checkpoint_dt.
using CheckpointSink = std::function<void(const SimState&)>;
Trajectory simulate(const SimConfig& c, const CheckpointSink& on_checkpoint = {});

}  // namespace gbo
