#include "gbo/monotonicity_local.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "gbo/error.hpp"
#include "gbo/spectral.hpp"

namespace gbo {
namespace {

struct GridData {
  std::vector<double> u, ux, hu, hux, rho, e;
  double dx = 0.0;
};

GridData grid_data(const SpectralField& u, int k) {
  GridData d;
  d.u = u.samples();
  d.ux = derivative(u).samples();
  d.hu = hilbert(u).samples();
  d.hux = hilbert_derivative(u).samples();
  d.dx = u.grid().spacing();
  const std::size_t n = d.u.size();
  d.rho.resize(n);
  d.e.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.rho[i] = d.u[i] * d.u[i];
    d.e[i] = 0.5 * d.u[i] * d.hux[i] + std::pow(d.u[i], k + 2) / (k + 2.0);
  }
  return d;
}

void require_grid(const SpectralField& u, const WeightFamily& w) {
  if (!(u.grid() == *w.grid)) throw InvalidArgument("weights were built on another grid");
}

double dot(const std::vector<double>& a, const std::vector<double>& b, double dx) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * dx;
}

double l2_over_R(const std::vector<double>& v, double ds, double R) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s * ds / R);
}

double wrap(double y, double L) {
  y = std::fmod(y, L);
  if (y < -0.5 * L) y += L;
  if (y >= 0.5 * L) y -= L;
  return y;
}

// Quadrature points on the support of u, in line coordinates centered on the
// circular mean of u^2.
struct Support {
  std::vector<double> pos;
  std::vector<std::size_t> idx;
  double lo = 0.0, hi = 0.0;
};

double circular_center(const GridData& d, double L) {
  std::complex<double> z{};
  const double w = 2.0 * std::numbers::pi / L;
  for (std::size_t i = 0; i < d.u.size(); ++i)
    z += d.rho[i] * std::polar(1.0, w * d.dx * static_cast<double>(i));
  double th = std::arg(z);
  if (th < 0.0) th += 2.0 * std::numbers::pi;
  return th / w;
}

Support support(const std::vector<double>& f, double dx, double L, double c, int stride,
                double tol) {
  double sup = 0.0;
  for (double v : f) sup = std::max(sup, std::abs(v));
  Support s;
  if (sup == 0.0) return s;
  bool any = false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::abs(f[i]) <= tol * sup) continue;
    const double y = wrap(dx * static_cast<double>(i) - c, L);
    s.lo = any ? std::min(s.lo, y) : y;
    s.hi = any ? std::max(s.hi, y) : y;
    any = true;
  }
  std::vector<std::pair<double, std::size_t>> pts;
  for (std::size_t i = 0; i < f.size(); i += static_cast<std::size_t>(stride)) {
    const double y = wrap(dx * static_cast<double>(i) - c, L);
    if (y >= s.lo && y <= s.hi) pts.emplace_back(c + y, i);
  }
  std::sort(pts.begin(), pts.end());
  for (const auto& [p, i] : pts) {
    s.pos.push_back(p);
    s.idx.push_back(i);
  }
  s.lo += c;
  s.hi += c;
  return s;
}

// Four-point Lagrange interpolation of periodic grid data at position p.
double interp(const std::vector<double>& f, double dx, double p) {
  const long n = static_cast<long>(f.size());
  const double q = p / dx;
  const double fl = std::floor(q);
  const double t = q - fl;
  const long i0 = static_cast<long>(fl);
  auto at = [&](long i) { return f[static_cast<std::size_t>(((i % n) + n) % n)]; };
  const double a = at(i0 - 1), b = at(i0), c = at(i0 + 1), d = at(i0 + 2);
  return a * (-t * (t - 1.0) * (t - 2.0) / 6.0) + b * ((t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0) +
         c * (-(t + 1.0) * t * (t - 2.0) / 2.0) + d * ((t + 1.0) * t * (t - 1.0) / 6.0);
}

double e2_kernel_sum(const GridData& d, const std::vector<double>& psi, const Support& sy,
                     const Support& sz, const std::vector<double>& v, double h, int nr) {
  double total = 0.0;
  for (int ir = 0; ir < nr; ++ir) {
    const double r = (ir + 0.5) / nr;
    double acc = 0.0;
    for (std::size_t a = 0; a < sy.pos.size(); ++a) {
      const double uy = d.u[sy.idx[a]];
      double inner = 0.0;
      for (std::size_t b = 0; b < sz.pos.size(); ++b)
        inner += interp(psi, d.dx, r * sz.pos[b] + (1.0 - r) * sy.pos[a]) * v[sz.idx[b]];
      acc += uy * inner;
    }
    total += r * r * acc / nr;
  }
  return -total * h * h / std::numbers::pi;
}

struct CommutatorTerms {
  double T1 = 0.0, T2 = 0.0;
};

// Shift positions s on the stride grid covering every s with chi(y - s) != 0
// for some y in the support.  Positions are grid aligned so chi(y - s) can be
// read from the sampled table.
std::vector<double> shift_grid(const Support& sp, const WeightFamily& w, double h) {
  const double reach = w.R + w.R1;
  const long steps = static_cast<long>(std::ceil(reach / h)) + 1;
  std::vector<double> s;
  if (sp.pos.empty()) return s;
  for (double x = sp.lo - h * steps; x <= sp.hi + h * steps + 0.5 * h; x += h) s.push_back(x);
  return s;
}

double chi_at(const WeightFamily& w, double offset) {
  const double dx = w.grid->spacing();
  const long n = static_cast<long>(w.grid->size());
  const long m = std::lround(offset / dx);
  if (std::abs(offset) >= 0.5 * w.grid->length()) return 0.0;
  return w.chi[static_cast<std::size_t>(((m % n) + n) % n)];
}

// Non-periodic four-point interpolation of f sampled at p0 + j h.
double interp_line(const std::vector<double>& f, double p0, double h, double p) {
  const double q = (p - p0) / h;
  const double fl = std::floor(q);
  const double t = q - fl;
  const long i0 = static_cast<long>(fl);
  const long n = static_cast<long>(f.size());
  auto at = [&](long i) { return (i < 0 || i >= n) ? 0.0 : f[static_cast<std::size_t>(i)]; };
  const double a = at(i0 - 1), b = at(i0), c = at(i0 + 1), d = at(i0 + 2);
  return a * (-t * (t - 1.0) * (t - 2.0) / 6.0) + b * ((t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0) +
         c * (-(t + 1.0) * t * (t - 2.0) / 2.0) + d * ((t + 1.0) * t * (t - 1.0) / 6.0);
}

// int E~1(s) = -(1/pi) int_r D(r, s), int E~2(s) = (1/pi) int_r r D(r, s),
// D(r, s) = sum_y chi(y - s) u(y) F_r(s - (1-r) y) h,
// F_r(p) = sum_z chi''(r z - p) u(z) h, tabulated in p and interpolated.
CommutatorTerms commutator_kernel(const GridData& d, const Support& sp, const WeightFamily& w,
                                  double h, int nr) {
  const std::vector<double> shifts = shift_grid(sp, w, h);
  if (shifts.empty()) return {};
  const std::size_t ns = shifts.size();
  std::vector<double> i1(ns, 0.0), i2(ns, 0.0);
  const double band_lo = w.R, band_hi = w.R + w.R1;
  for (int ir = 0; ir < nr; ++ir) {
    const double r = (ir + 0.5) / nr;
    const double p0 = shifts.front() - (1.0 - r) * sp.hi - 2.0 * h;
    const double p1 = shifts.back() - (1.0 - r) * sp.lo + 2.0 * h;
    const std::size_t np = static_cast<std::size_t>(std::ceil((p1 - p0) / h)) + 1;
    std::vector<double> F(np, 0.0);
    for (std::size_t j = 0; j < np; ++j) {
      const double p = p0 + h * static_cast<double>(j);
      double acc = 0.0;
      for (std::size_t b = 0; b < sp.pos.size(); ++b) {
        const double a = std::abs(r * sp.pos[b] - p);
        if (a <= band_lo || a >= band_hi) continue;
        acc += cutoff(r * sp.pos[b] - p, w.R, w.R1, 2) * d.u[sp.idx[b]];
      }
      F[j] = acc * h;
    }
    for (std::size_t js = 0; js < ns; ++js) {
      const double s = shifts[js];
      double acc = 0.0;
      for (std::size_t a = 0; a < sp.pos.size(); ++a) {
        const double cy = chi_at(w, sp.pos[a] - s);
        if (cy == 0.0) continue;
        acc += cy * d.u[sp.idx[a]] * interp_line(F, p0, h, s - (1.0 - r) * sp.pos[a]);
      }
      i1[js] += acc * h / nr;
      i2[js] += r * acc * h / nr;
    }
  }
  for (std::size_t js = 0; js < ns; ++js) {
    i1[js] *= -1.0 / std::numbers::pi;
    i2[js] *= 1.0 / std::numbers::pi;
  }
  return {l2_over_R(i1, h, w.R), l2_over_R(i2, h, w.R)};
}

CommutatorTerms commutator_spectral(const SpectralField& u, const GridData& d, const Support& sp,
                                    const WeightFamily& w, double h) {
  const GridPtr& g = u.grid_ptr();
  const std::size_t n = d.u.size();
  const long nl = static_cast<long>(n);
  std::vector<double> i1, i2;
  std::vector<double> chi(n), dchi(n), cu(n);
  for (double s : shift_grid(sp, w, h)) {
    const long is = std::lround(s / d.dx);
    for (std::size_t i = 0; i < n; ++i) {
      const auto m = static_cast<std::size_t>((((static_cast<long>(i) - is) % nl) + nl) % nl);
      chi[i] = w.chi[m];
      dchi[i] = w.dchi[m];
      cu[i] = chi[i] * d.u[i];
    }
    const std::vector<double> hcu = hilbert(SpectralField::from_samples(g, cu)).samples();
    double a1 = 0.0, a2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      a1 += dchi[i] * (d.u[i] * hcu[i] + cu[i] * d.hu[i]);
      a2 += chi[i] * (d.ux[i] * hcu[i] + cu[i] * d.hux[i]);
    }
    i1.push_back(-a1 * d.dx);
    i2.push_back(-a2 * d.dx);
  }
  return {l2_over_R(i1, h, w.R), l2_over_R(i2, h, w.R)};
}

}  // namespace

double interaction_M(const SpectralField& u, const WeightFamily& w, int k) {
  require_grid(u, w);
  const GridData d = grid_data(u, k);
  return dot(d.e, convolve(*w.grid, w.phi, d.rho), d.dx);
}

double interaction_M_direct(const SpectralField& u, const WeightFamily& w, int k) {
  require_grid(u, w);
  const GridData d = grid_data(u, k);
  const std::size_t n = d.u.size();
  double s = 0.0;
  for (std::size_t y = 0; y < n; ++y) {
    double inner = 0.0;
    for (std::size_t x = 0; x < n; ++x) inner += w.phi[(y + n - x) % n] * d.rho[x];
    s += d.e[y] * inner;
  }
  return s * d.dx * d.dx;
}

double dM_main_term(const SpectralField& u, const WeightFamily& w, int k) {
  require_grid(u, w);
  const GridData d = grid_data(u, k);
  const std::size_t n = d.u.size();
  std::vector<double> chi2(n), chik(n), uk(n);
  for (std::size_t i = 0; i < n; ++i) {
    chi2[i] = w.chi[i] * w.chi[i];
    chik[i] = std::pow(w.chi[i], k + 2);
    uk[i] = std::pow(d.u[i], k + 2);
  }
  const auto A = convolve(*w.grid, chi2, d.rho);
  const auto B = convolve(*w.grid, chik, uk);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += A[i] * A[i] * B[i] * B[i];
  const double c = static_cast<double>(k * k) / (2.0 * (k + 2.0) * (k + 2.0));
  return c * s * d.dx / w.R;
}

DMReport dM_report(const Trajectory& traj, const WeightFamily& w, int k) {
  const auto& snaps = traj.snapshots;
  if (snaps.size() < 3) throw InvalidArgument("dM report needs >= 3 records");
  for (std::size_t i = 1; i < traj.times.size(); ++i)
    if (!(std::abs(traj.times[i] - traj.times[i - 1] - traj.dt_out) <= 1e-9 * traj.dt_out))
      throw InvalidArgument("dM report needs a uniform cadence");
  DMReport rep;
  rep.R = w.R;
  rep.R1 = w.R1;
  std::vector<double> M(snaps.size());
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    M[i] = interaction_M(snaps[i], w, k);
    rep.sup_abs_M = std::max(rep.sup_abs_M, std::abs(M[i]));
  }
  rep.min_residual = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < snaps.size(); ++i) {
    DMEntry e;
    e.t = traj.times[i];
    e.M = M[i];
    e.dM_fd = (M[i + 1] - M[i - 1]) / (2.0 * traj.dt_out);
    e.main_term = dM_main_term(snaps[i], w, k);
    e.residual = e.dM_fd - e.main_term;
    rep.min_residual = std::min(rep.min_residual, e.residual);
    rep.entries.push_back(e);
  }
  rep.negative_part = std::max(0.0, -rep.min_residual);
  return rep;
}

double error_E1_direct(const SpectralField& u, const WeightFamily& w) {
  require_grid(u, w);
  const std::vector<double> s = u.samples();
  const std::size_t n = s.size();
  double acc = 0.0;
  for (std::size_t y = 0; y < n; ++y) {
    double inner = 0.0;
    for (std::size_t x = 0; x < n; ++x) inner += w.d3phi[(y + n - x) % n] * s[x] * s[x];
    acc += s[y] * s[y] * inner;
  }
  const double dx = u.grid().spacing();
  return acc * dx * dx;
}

ErrorBudget error_budget(const SpectralField& u, const WeightFamily& w, int k,
                         const BudgetOptions& opt) {
  require_grid(u, w);
  if (opt.r_nodes < 1 || opt.stride < 1) throw InvalidArgument("budget resolution must be >= 1");
  ErrorBudget b;
  b.R = w.R;
  b.R1 = w.R1;
  b.stride = opt.stride;
  const GridData d = grid_data(u, k);
  const std::size_t n = d.u.size();
  const TorusGrid& g = *w.grid;
  bool zero = true;
  for (double v : d.u) zero = zero && v == 0.0;
  if (zero) return b;

  std::vector<double> u2(n), vk(n), ukhu(n), uhu(n), uk2(n), chichi(n), chidiff(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double uk1 = std::pow(d.u[i], k + 1);
    u2[i] = d.rho[i];
    vk[i] = uk1;
    ukhu[i] = uk1 * d.hu[i];
    uhu[i] = d.u[i] * d.hu[i];
    uk2[i] = uk1 * d.u[i];
    chichi[i] = w.chi[i] * w.dchi[i];
    chidiff[i] = w.chi[i] * w.chi[i] - std::pow(w.chi[i], k + 2);
  }

  const auto psi3 = convolve(g, w.d3phi, d.rho);
  b.E1 = dot(u2, psi3, d.dx);
  b.E3 = dot(ukhu, convolve(g, w.d2phi, d.rho), d.dx);

  const double c = circular_center(d, g.length());
  auto e2_at = [&](int stride) {
    const Support sy = support(d.u, d.dx, g.length(), c, stride, opt.support_tol);
    const Support sz = support(vk, d.dx, g.length(), c, stride, opt.support_tol);
    return e2_kernel_sum(d, psi3, sy, sz, vk, d.dx * stride, opt.r_nodes);
  };
  b.E2 = e2_at(opt.stride);
  b.E2_quad_err = std::abs(b.E2 - e2_at(2 * opt.stride));

  const Support sp = support(d.u, d.dx, g.length(), c, opt.stride, opt.support_tol);
  const CommutatorTerms ct = commutator_kernel(d, sp, w, d.dx * opt.stride, opt.r_nodes);
  const Support sp2 = support(d.u, d.dx, g.length(), c, 2 * opt.stride, opt.support_tol);
  const CommutatorTerms ct2 = commutator_kernel(d, sp2, w, d.dx * 2 * opt.stride, opt.r_nodes);
  b.T1 = ct.T1;
  b.T2 = ct.T2;
  b.T1_quad_err = std::abs(ct.T1 - ct2.T1);
  b.T2_quad_err = std::abs(ct.T2 - ct2.T2);
  const CommutatorTerms cs = commutator_spectral(u, d, sp, w, d.dx * opt.stride);
  b.T1_spectral = cs.T1;
  b.T2_spectral = cs.T2;

  std::vector<double> i3 = convolve(g, chichi, uhu);
  b.T3 = l2_over_R(i3, d.dx, w.R);
  b.T4 = l2_over_R(convolve(g, chidiff, uk2), d.dx, w.R);
  return b;
}

double localization_ratio(const SpectralField& f, std::span<const double> g, double H, int k) {
  if (g.size() != f.size()) throw InvalidArgument("multiplier samples do not match the grid");
  if (!(H > 0.0)) throw InvalidArgument("W^{1,inf} bound H must be positive");
  const double n12 = sobolev_norm(f, 0.5, false);
  if (n12 == 0.0) throw InvalidArgument("localization ratio undefined for f = 0");
  const std::vector<double> s = f.samples();
  const std::vector<double> hfx = hilbert_derivative(f).samples();
  double a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    a += g[i] * s[i] * hfx[i];
    b += g[i] * std::pow(s[i], k + 2);
  }
  const double dx = f.grid().spacing();
  const double num = std::abs(a * dx) + std::abs(b * dx);
  return num / (H * (n12 * n12 + std::pow(n12, k + 2)));
}

SchurResult schur_check(const SampledKernel& K, std::span<const double> u,
                        std::span<const double> v, double H, double R1, double R2) {
  if (K.values.size() != K.ny * K.nz || u.size() != K.ny || v.size() != K.nz)
    throw InvalidArgument("kernel and vector sizes disagree");
  SchurResult res;
  const double slack = 1.0 + 1e-12;
  double height = 0.0;
  for (double x : K.values) height = std::max(height, std::abs(x));
  if (height > H * slack) {
    res.admissible = false;
    res.violation = "height";
  }
  for (std::size_t j = 0; j < K.nz && res.admissible; ++j) {
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < K.ny; ++i) cnt += K.at(i, j) != 0.0;
    if (static_cast<double>(cnt) * K.h > R1 * slack) {
      res.admissible = false;
      res.violation = "y-support";
    }
  }
  for (std::size_t i = 0; i < K.ny && res.admissible; ++i) {
    std::size_t cnt = 0;
    for (std::size_t j = 0; j < K.nz; ++j) cnt += K.at(i, j) != 0.0;
    if (static_cast<double>(cnt) * K.h > R2 * slack) {
      res.admissible = false;
      res.violation = "z-support";
    }
  }
  double s = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < K.ny; ++i) {
    double inner = 0.0;
    for (std::size_t j = 0; j < K.nz; ++j) inner += K.at(i, j) * v[j];
    s += u[i] * inner;
    uu += u[i] * u[i];
  }
  for (double x : v) vv += x * x;
  s *= K.h * K.h;
  uu *= K.h;
  vv *= K.h;
  const double den = H * std::sqrt(R1 * R2 * uu * vv);
  res.ratio = den > 0.0 ? std::abs(s) / den : 0.0;
  return res;
}

}  // namespace gbo
