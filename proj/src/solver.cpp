#include "gbo/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "gbo/error.hpp"
#include "gbo/spectral.hpp"

namespace gbo {
namespace {

constexpr int kContourPoints = 64;
constexpr double kContourSwitch = 0.5;

struct PhiCoeffs {
  cplx q, f1, f2, f3;
};

// Cox-Matthews coefficients for z = h * lambda.  Small |z| averages over a
// unit circle around z to avoid cancellation.
PhiCoeffs etd_coeffs(cplx z, double h) {
  auto direct = [](cplx r) {
    const cplx er = std::exp(r);
    const cplx r3 = r * r * r;
    return PhiCoeffs{(std::exp(r / 2.0) - 1.0) / r,
                     (-4.0 - r + er * (4.0 - 3.0 * r + r * r)) / r3,
                     (2.0 + r + er * (r - 2.0)) / r3,
                     (-4.0 - 3.0 * r - r * r + er * (4.0 - r)) / r3};
  };
  PhiCoeffs out{};
  if (std::abs(z) >= kContourSwitch) {
    out = direct(z);
  } else {
    for (int j = 0; j < kContourPoints; ++j) {
      const double th = 2.0 * std::numbers::pi * (j + 0.5) / kContourPoints;
      const PhiCoeffs p = direct(z + std::polar(1.0, th));
      out.q += p.q;
      out.f1 += p.f1;
      out.f2 += p.f2;
      out.f3 += p.f3;
    }
    const double inv = 1.0 / kContourPoints;
    out.q *= inv;
    out.f1 *= inv;
    out.f2 *= inv;
    out.f3 *= inv;
  }
  out.q *= h;
  out.f1 *= h;
  out.f2 *= h;
  out.f3 *= h;
  return out;
}

double sup_abs(const SpectralField& u) {
  double s = 0.0;
  for (double v : u.samples()) s = std::max(s, std::abs(v));
  return s;
}

double periodic_offset(double x, double x0, double L) {
  double d = std::fmod(x - x0, L);
  if (d < -0.5 * L) d += L;
  if (d >= 0.5 * L) d -= L;
  return d;
}

bool is_multiple(double a, double b) {
  const double r = a / b;
  return std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, std::abs(r)) && std::round(r) >= 1.0;
}

}  // namespace

std::string to_string(Integrator m) { return m == Integrator::EtdRk4 ? "etd_rk4" : "if_rk4"; }

Integrator integrator_from_string(const std::string& s) {
  if (s == "etd_rk4") return Integrator::EtdRk4;
  if (s == "if_rk4") return Integrator::IfRk4;
  throw InvalidArgument("integrator must be etd_rk4 or if_rk4, got '" + s + "'");
}

void require_valid_power(int k) {
  if (k < 4 || k % 2 != 0) throw InvalidArgument("k must be even ≥ 4");
}

void validate(const SimConfig& c) {
  require_valid_power(c.k);
  if (!is_power_of_two(c.N) || c.N < 16) throw InvalidArgument("N must be a power of two >= 16");
  if (!(c.L > 0.0)) throw InvalidArgument("L must be positive");
  if (c.pad < 1) throw InvalidArgument("pad must be >= 1");
  if (!(c.dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (!(c.t_end > 0.0)) throw InvalidArgument("t_end must be positive");
  if (!is_multiple(c.t_end, c.dt)) throw InvalidArgument("t_end must be a multiple of dt");
  if (!is_multiple(c.snapshot_dt, c.dt))
    throw InvalidArgument("snapshot_dt must be a positive multiple of dt");
  if (c.checkpoint_dt != 0.0 && !is_multiple(c.checkpoint_dt, c.snapshot_dt))
    throw InvalidArgument("checkpoint_dt must be a positive multiple of snapshot_dt");
  if (!(c.R > 0.0) || c.R1 < 0.0) throw InvalidArgument("R must be positive and R1 nonnegative");
  if (!(c.data.width > 0.0)) throw InvalidArgument("data.width must be positive");
  const auto& f = c.data.family;
  if (f != "gaussian" && f != "modulated" && f != "random")
    throw InvalidArgument("data.family must be gaussian, modulated or random");
  if (!(c.guard_tol > 0.0) || !(c.cfl_max > 0.0) || !(c.blowup_factor > 1.0))
    throw InvalidArgument("guard_tol, cfl_max must be positive and blowup_factor > 1");
}

Stepper::Stepper(GridPtr grid, int k, double dt, Integrator method, bool focusing,
                 bool linear_only)
    : grid_(std::move(grid)),
      k_(k),
      dt_(dt),
      method_(method),
      sign_(focusing ? -1.0 : 1.0),
      linear_only_(linear_only) {
  if (dt == 0.0 || !std::isfinite(dt)) throw InvalidArgument("time step must be finite and nonzero");
  if (k < 1) throw InvalidArgument("power k must be >= 1");
  const TorusGrid& g = *grid_;
  e_ = propagator_symbol(g, dt).symbol;
  e2_ = propagator_symbol(g, 0.5 * dt).symbol;
  dx_ = derivative_symbol(g).symbol;
  if (method_ == Integrator::EtdRk4) {
    const std::size_t n = g.size();
    q_.resize(n);
    f1_.resize(n);
    f2_.resize(n);
    f3_.resize(n);
    for (std::size_t m = 0; m < n; ++m) {
      const double xi = g.xi(m);
      const cplx lam = m == g.nyquist() ? cplx{} : cplx(0.0, -xi * std::abs(xi));
      const PhiCoeffs p = etd_coeffs(lam * dt, dt);
      q_[m] = p.q;
      f1_[m] = p.f1;
      f2_[m] = p.f2;
      f3_[m] = p.f3;
    }
  }
}

std::vector<cplx> Stepper::nonlinear(const std::vector<cplx>& v) const {
  const std::size_t n = v.size();
  if (linear_only_) return std::vector<cplx>(n, cplx{});
  SpectralField f(grid_, v);
  std::vector<cplx> out = dealiased_power(f, k_ + 1).field.coeffs();
  for (std::size_t m = 0; m < n; ++m) out[m] *= -sign_ * dx_[m];
  return out;
}

SpectralField Stepper::step(const SpectralField& u) const {
  const std::vector<cplx>& v = u.coeffs();
  const std::size_t n = v.size();
  std::vector<cplx> out(n);
  if (method_ == Integrator::EtdRk4) {
    const auto nu = nonlinear(v);
    std::vector<cplx> a(n), b(n), c(n);
    for (std::size_t m = 0; m < n; ++m) a[m] = e2_[m] * v[m] + q_[m] * nu[m];
    const auto na = nonlinear(a);
    for (std::size_t m = 0; m < n; ++m) b[m] = e2_[m] * v[m] + q_[m] * na[m];
    const auto nb = nonlinear(b);
    for (std::size_t m = 0; m < n; ++m) c[m] = e2_[m] * a[m] + q_[m] * (2.0 * nb[m] - nu[m]);
    const auto nc = nonlinear(c);
    for (std::size_t m = 0; m < n; ++m)
      out[m] = e_[m] * v[m] + f1_[m] * nu[m] + 2.0 * f2_[m] * (na[m] + nb[m]) + f3_[m] * nc[m];
  } else {
    const double h = dt_;
    const auto k1 = nonlinear(v);
    std::vector<cplx> a(n), b(n), c(n);
    for (std::size_t m = 0; m < n; ++m) a[m] = e2_[m] * (v[m] + 0.5 * h * k1[m]);
    const auto k2 = nonlinear(a);
    for (std::size_t m = 0; m < n; ++m) b[m] = e2_[m] * v[m] + 0.5 * h * k2[m];
    const auto k3 = nonlinear(b);
    for (std::size_t m = 0; m < n; ++m) c[m] = e_[m] * v[m] + h * e2_[m] * k3[m];
    const auto k4 = nonlinear(c);
    for (std::size_t m = 0; m < n; ++m)
      out[m] = e_[m] * v[m] +
               h / 6.0 * (e_[m] * k1[m] + 2.0 * e2_[m] * (k2[m] + k3[m]) + k4[m]);
  }
  SpectralField r(grid_, std::move(out));
  r.enforce_real();
  return r;
}

double Stepper::cfl_number(const SpectralField& u) const {
  if (linear_only_) return 0.0;
  const double ximax = std::numbers::pi * static_cast<double>(grid_->size()) / grid_->length();
  return std::abs(dt_) * ximax * (k_ + 1) * std::pow(sup_abs(u), k_);
}

SimState advance(const SimState& s, double dt, Integrator method, bool focusing) {
  Stepper st(s.u.grid_ptr(), s.k, dt, method, focusing);
  return SimState{s.t + dt, st.step(s.u), s.k, s.step_count + 1};
}

SpectralField initial_data(GridPtr grid, const InitialData& d) {
  const double L = grid->length();
  const double x0 = std::isnan(d.x0) ? 0.5 * L : d.x0;
  auto envelope = [&](double x) {
    const double r = periodic_offset(x, x0, L) / d.width;
    return std::exp(-r * r);
  };
  if (d.family == "gaussian")
    return SpectralField::from_function(grid, [&](double x) { return d.amp * envelope(x); });
  if (d.family == "modulated")
    return SpectralField::from_function(grid, [&](double x) {
      return d.amp * envelope(x) * std::cos(d.carrier * periodic_offset(x, x0, L));
    });
  if (d.family == "random") {
    std::mt19937_64 rng(d.seed);
    const std::vector<double> base = random_field(grid, d.max_mode, d.decay, rng).samples();
    std::vector<double> s(base.size());
    for (std::size_t m = 0; m < s.size(); ++m) s[m] = base[m] * envelope(grid->x(m));
    SpectralField f = SpectralField::from_samples(grid, s);
    const double nrm = sobolev_norm(f, 0.5, false);
    if (nrm > 0.0) f *= d.amp / nrm;
    return f;
  }
  throw InvalidArgument("unknown initial-data family '" + d.family + "'");
}

Trajectory simulate(const SimConfig& c, const CheckpointSink& on_checkpoint) {
  validate(c);
  GridPtr grid = make_grid(c.N, c.L, c.pad);
  Stepper st(grid, c.k, c.dt, c.integrator, c.focusing, c.linear_only);

  Trajectory traj;
  traj.config = c;
  traj.dt_out = c.dt * static_cast<double>(c.snapshot_every());

  SimState s{0.0, initial_data(grid, c.data), c.k, 0};
  auto record = [&](const SimState& st_) {
    Observables o = observables(st_.u, c.k, c.guard_tol);
    o.t = st_.t;
    if (!o.centers_valid) {
      std::ostringstream msg;
      msg << "boundary-mass guard violated at t=" << st_.t << " (fraction "
          << o.boundary_fraction << ")";
      throw SimulationAbort(SimulationAbort::Kind::Guard, msg.str(), st_);
    }
    traj.times.push_back(st_.t);
    traj.snapshots.push_back(st_.u);
    traj.records.push_back(o);
  };
  record(s);

  const double sup0 = std::max(sup_abs(s.u), 1e-300);
  const std::size_t total = c.steps();
  const std::size_t every = c.snapshot_every();
  for (std::size_t i = 1; i <= total; ++i) {
    const double cfl = st.cfl_number(s.u);
    if (cfl > c.cfl_max) {
      std::ostringstream msg;
      msg << "nonlinear CFL number " << cfl << " exceeds " << c.cfl_max << " at t=" << s.t;
      throw SimulationAbort(SimulationAbort::Kind::Cfl, msg.str(), s);
    }
    SimState next{c.dt * static_cast<double>(i), st.step(s.u), c.k, i};
    if (!next.u.all_finite() || sup_abs(next.u) > c.blowup_factor * sup0) {
      std::ostringstream msg;
      msg << "blow-up detected at t=" << next.t;
      throw SimulationAbort(SimulationAbort::Kind::BlowUp, msg.str(), s);
    }
    s = std::move(next);
    if (i % every == 0) record(s);
    if (on_checkpoint && c.checkpoint_dt > 0.0 && i % c.checkpoint_every() == 0) on_checkpoint(s);
  }
  return traj;
}

}  // namespace gbo
