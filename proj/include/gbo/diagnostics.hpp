#pragma once

#include <iosfwd>
#include <vector>

#include "gbo/field.hpp"
#include "gbo/littlewood_paley.hpp"
#include "gbo/sim_config.hpp"

namespace gbo {

/// Integrals and positions of one snapshot.
struct Observables {
  double t = 0.0;
  double mass = 0.0;    ///< int u^2
  double energy = 0.0;  ///< int (1/2 u H u_x + u^{k+2}/(k+2))
  double mean = 0.0;    ///< int u
  double xM = 0.0;      ///< mass center
  double xE = 0.0;      ///< energy center
  double Jint = 0.0;    ///< int j
  double Kint = 0.0;    ///< int kappa
  double Pint = 0.0;    ///< int u^{k+2}
  double sup = 0.0;
  double H12 = 0.0;     ///< ||u||_{H^{1/2}}
  double Hsk = 0.0;     ///< ||u||_{dot H^{s_k}}
  double XM = 0.0;      ///< int x rho
  double XE = 0.0;      ///< int x e
  double boundary_fraction = 0.0;  ///< mass share within L/8 of the window edge
  bool centers_valid = true;
};

struct Trajectory {
  SimConfig config;
  double dt_out = 0.0;
  std::vector<double> times;
  std::vector<SpectralField> snapshots;
  std::vector<Observables> records;
};

/// Densities, currents and their integrals.  Integrals use trapezoid
/// quadrature on the padded grid; positions are measured in a window of
/// length L centered on the circular mean of rho.
Observables observables(const SpectralField& u, int k, double guard_tol = 1e-6);

/// Builds a trajectory from uniformly spaced snapshots.
Trajectory make_trajectory(std::vector<SpectralField> snapshots, double t0, double dt_out, int k,
                           double guard_tol = 1e-6);

struct CenterResidual {
  std::vector<double> t;
  std::vector<double> mass;    ///< d/dt int x rho - int j
  std::vector<double> energy;  ///< d/dt int x e - int kappa
};

/// Central differences at interior records.
CenterResidual center_current_residual(const Trajectory& traj);

/// int rho int kappa - int j int e - k^2/(2(k+2)^2) M^2 (int u^{k+2})^2
double monotonicity_gap(const SpectralField& u, int k);
/// |int rho int kappa| + |int j int e|, the magnitude scale of the gap.
double monotonicity_scale(const SpectralField& u, int k);

/// ||w(t_{i+1}) - w(t_i)||_{dot H^s} with w(t) = V(-t) u(t).
std::vector<double> scattering_cauchy(const Trajectory& traj, double s);

/// Least-squares slope of xM(t).
double packet_velocity(const Trajectory& traj);

/// ||u||_{L^k_x L^inf_t} over the snapshots.
double lk_linf_norm(const SpaceTimeArray& a, double k);

SpaceTimeArray to_space_time(const Trajectory& traj);

/// Header plus one row per record: t, mass, energy, mean, xM, xE, Jint, Kint,
/// Pint, sup, H12, Hsk.
void write_csv(std::ostream& os, const std::vector<Observables>& records);

}  // namespace gbo
