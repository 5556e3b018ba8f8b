#include "gbo/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "gbo/error.hpp"
#include "gbo/spectral.hpp"

namespace gbo {
namespace {

struct Integrals {
  double M = 0.0, E = 0.0, J = 0.0, K = 0.0, P = 0.0;
};

struct FineData {
  std::vector<double> u, ux, hux;
  double dx = 0.0;
};

FineData fine_data(const SpectralField& u) {
  const std::size_t m = u.grid().pad_factor() * u.size();
  return {u.fine_samples(m), derivative(u).fine_samples(m),
          hilbert_derivative(u).fine_samples(m), u.grid().length() / static_cast<double>(m)};
}

struct Densities {
  double rho, e, j, kappa, p;
};

Densities densities(double u, double ux, double hux, int k) {
  const double uk1 = std::pow(u, k + 1);
  const double uk2 = uk1 * u;
  const double kk = static_cast<double>(k);
  return {u * u, 0.5 * u * hux + uk2 / (kk + 2.0),
          2.0 * u * hux + 2.0 * (kk + 1.0) / (kk + 2.0) * uk2,
          ux * ux + 1.5 * uk1 * hux + 0.5 * uk1 * uk1, uk2};
}

Integrals integrals(const FineData& d, int k) {
  Integrals s;
  for (std::size_t i = 0; i < d.u.size(); ++i) {
    const Densities q = densities(d.u[i], d.ux[i], d.hux[i], k);
    s.M += q.rho;
    s.E += q.e;
    s.J += q.j;
    s.K += q.kappa;
    s.P += q.p;
  }
  s.M *= d.dx;
  s.E *= d.dx;
  s.J *= d.dx;
  s.K *= d.dx;
  s.P *= d.dx;
  return s;
}

void require_uniform(const Trajectory& traj) {
  const auto& t = traj.times;
  if (t.size() != traj.records.size() || t.size() != traj.snapshots.size())
    throw InvalidArgument("trajectory arrays have inconsistent lengths");
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double h = t[i] - t[i - 1];
    if (!(std::abs(h - traj.dt_out) <= 1e-9 * std::abs(traj.dt_out)))
      throw InvalidArgument("trajectory records are not uniformly spaced");
  }
}

}  // namespace

Observables observables(const SpectralField& u, int k, double guard_tol) {
  Observables o;
  const FineData d = fine_data(u);
  const Integrals s = integrals(d, k);
  o.mass = s.M;
  o.energy = s.E;
  o.Jint = s.J;
  o.Kint = s.K;
  o.Pint = s.P;
  o.mean = integrate(u);
  for (double v : d.u) o.sup = std::max(o.sup, std::abs(v));
  o.H12 = sobolev_norm(u, 0.5, false);
  o.Hsk = sobolev_norm(u, 0.5 - 1.0 / k, true);
  if (!(o.mass > 0.0)) return o;

  const double L = u.grid().length();
  const double w = 2.0 * std::numbers::pi / L;
  std::complex<double> z{};
  for (std::size_t i = 0; i < d.u.size(); ++i) {
    const double x = d.dx * static_cast<double>(i);
    z += d.u[i] * d.u[i] * std::polar(1.0, w * x);
  }
  double theta = std::arg(z);
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  const double c = theta / w;

  double edge = 0.0;
  for (std::size_t i = 0; i < d.u.size(); ++i) {
    double y = std::fmod(d.dx * static_cast<double>(i) - c, L);
    if (y < -0.5 * L) y += L;
    if (y >= 0.5 * L) y -= L;
    const Densities q = densities(d.u[i], d.ux[i], d.hux[i], k);
    const double x = c + y;
    o.XM += x * q.rho;
    o.XE += x * q.e;
    if (std::abs(y) > 0.375 * L) edge += q.rho;
  }
  o.XM *= d.dx;
  o.XE *= d.dx;
  o.xM = o.XM / o.mass;
  o.xE = o.energy != 0.0 ? o.XE / o.energy : 0.0;
  o.boundary_fraction = edge * d.dx / o.mass;
  o.centers_valid = o.boundary_fraction <= guard_tol;
  return o;
}

Trajectory make_trajectory(std::vector<SpectralField> snapshots, double t0, double dt_out, int k,
                           double guard_tol) {
  if (snapshots.empty()) throw InvalidArgument("trajectory needs at least one snapshot");
  Trajectory traj;
  traj.config.k = k;
  traj.config.N = snapshots.front().size();
  traj.config.L = snapshots.front().grid().length();
  traj.config.pad = snapshots.front().grid().pad_factor();
  traj.dt_out = dt_out;
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    const double t = t0 + dt_out * static_cast<double>(i);
    Observables o = observables(snapshots[i], k, guard_tol);
    o.t = t;
    traj.times.push_back(t);
    traj.records.push_back(o);
  }
  traj.snapshots = std::move(snapshots);
  return traj;
}

CenterResidual center_current_residual(const Trajectory& traj) {
  require_uniform(traj);
  if (traj.records.size() < 3) throw InvalidArgument("center residual needs >= 3 records");
  CenterResidual r;
  const auto& rec = traj.records;
  const double h2 = 2.0 * traj.dt_out;
  for (std::size_t i = 1; i + 1 < rec.size(); ++i) {
    r.t.push_back(rec[i].t);
    r.mass.push_back((rec[i + 1].XM - rec[i - 1].XM) / h2 - rec[i].Jint);
    r.energy.push_back((rec[i + 1].XE - rec[i - 1].XE) / h2 - rec[i].Kint);
  }
  return r;
}

double monotonicity_gap(const SpectralField& u, int k) {
  const Integrals s = integrals(fine_data(u), k);
  const double c = static_cast<double>(k * k) / (2.0 * (k + 2.0) * (k + 2.0));
  return s.M * s.K - s.J * s.E - c * s.M * s.M * s.P * s.P;
}

double monotonicity_scale(const SpectralField& u, int k) {
  const Integrals s = integrals(fine_data(u), k);
  return std::abs(s.M * s.K) + std::abs(s.J * s.E);
}

std::vector<double> scattering_cauchy(const Trajectory& traj, double s) {
  if (traj.snapshots.size() < 2) throw InvalidArgument("scattering series needs >= 2 records");
  std::vector<double> out;
  SpectralField prev = linear_propagate(traj.snapshots[0], -traj.times[0]);
  for (std::size_t i = 1; i < traj.snapshots.size(); ++i) {
    SpectralField w = linear_propagate(traj.snapshots[i], -traj.times[i]);
    out.push_back(sobolev_norm(w - prev, s, true));
    prev = std::move(w);
  }
  return out;
}

double packet_velocity(const Trajectory& traj) {
  const auto& rec = traj.records;
  if (rec.size() < 2) throw InvalidArgument("velocity fit needs >= 2 records");
  double st = 0.0, sx = 0.0;
  for (const auto& o : rec) {
    if (!o.centers_valid) throw InvalidArgument("packet reached the domain boundary");
    st += o.t;
    sx += o.xM;
  }
  const double n = static_cast<double>(rec.size());
  st /= n;
  sx /= n;
  double num = 0.0, den = 0.0;
  for (const auto& o : rec) {
    num += (o.t - st) * (o.xM - sx);
    den += (o.t - st) * (o.t - st);
  }
  return num / den;
}

double lk_linf_norm(const SpaceTimeArray& a, double k) { return lk_linf(a, k); }

SpaceTimeArray to_space_time(const Trajectory& traj) {
  if (traj.snapshots.empty()) throw InvalidArgument("trajectory has no snapshots");
  return SpaceTimeArray{traj.snapshots, traj.times.front(), traj.dt_out > 0.0 ? traj.dt_out : 1.0};
}

void write_csv(std::ostream& os, const std::vector<Observables>& records) {
  os << "t,mass,energy,mean,xM,xE,Jint,Kint,Pint,sup,H12,Hsk\n";
  os << std::setprecision(17);
  for (const auto& o : records) {
    os << o.t << ',' << o.mass << ',' << o.energy << ',' << o.mean << ',' << o.xM << ',' << o.xE
       << ',' << o.Jint << ',' << o.Kint << ',' << o.Pint << ',' << o.sup << ',' << o.H12 << ','
       << o.Hsk << '\n';
  }
}

}  // namespace gbo
