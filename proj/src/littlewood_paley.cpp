#include "gbo/littlewood_paley.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

#include "gbo/error.hpp"
#include "gbo/spectral.hpp"

namespace gbo {
namespace {

bool is_zero(const SpectralField& f) {
  return std::all_of(f.coeffs().begin(), f.coeffs().end(),
                     [](const cplx& c) { return c == cplx{}; });
}

double power_norm_term(double v, double p) { return std::pow(std::abs(v), p); }

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// pi_j(psi, phi) for every band j, in band order.
std::vector<SpectralField> pi_pieces(const SpectralField& psi, const SpectralField& phi,
                                     const DyadicDecomposition& d, int k) {
  const std::size_t fine = psi.grid().pad_factor() * psi.grid().size();
  std::vector<SpectralField> out;
  out.reserve(static_cast<std::size_t>(d.count()));
  for (int j = d.j_min; j <= d.j_max; ++j) {
    SpectralField low = dyadic_project(psi, d, j, BandMode::WellBelow);
    SpectralField near = dyadic_project(phi, d, j, BandMode::Near);
    if (is_zero(low) || is_zero(near)) {
      out.emplace_back(psi.grid_ptr());
      continue;
    }
    std::vector<double> a = low.fine_samples(fine);
    const std::vector<double> b = near.fine_samples(fine);
    for (std::size_t i = 0; i < fine; ++i) a[i] = std::pow(a[i], k) * b[i];
    SpectralField prod = SpectralField::from_fine_samples(psi.grid_ptr(), a);
    out.push_back(derivative(dyadic_project(prod, d, j, BandMode::At)));
  }
  return out;
}

}  // namespace

int default_diagonal_width(int k) {
  return static_cast<int>(std::ceil(std::log2(static_cast<double>(k + 2)))) + 1;
}

DyadicDecomposition make_decomposition(GridPtr grid, int J, int C_k) {
  if (J < 0 || C_k < 0) throw InvalidArgument("J and C_k must be nonnegative");
  DyadicDecomposition d;
  d.J = J;
  d.C_k = C_k;
  const std::size_t n = grid->size();
  d.band.assign(n, INT_MIN);
  d.j_min = INT_MAX;
  d.j_max = INT_MIN;
  for (std::size_t m = 1; m < n; ++m) {
    // ilogb is exactly floor(log2 x) for positive finite doubles.
    const int j = std::ilogb(std::abs(grid->xi(m)));
    d.band[m] = j;
    d.j_min = std::min(d.j_min, j);
    d.j_max = std::max(d.j_max, j);
  }
  d.grid = std::move(grid);
  return d;
}

SpectralField dyadic_project(const SpectralField& f, const DyadicDecomposition& d, int j,
                             BandMode mode) {
  if (f.size() != d.band.size()) throw InvalidArgument("decomposition built for another grid");
  SpectralField out(f.grid_ptr());
  for (std::size_t m = 0; m < f.size(); ++m) {
    bool keep;
    if (m == 0) {
      keep = mode == BandMode::Below || mode == BandMode::WellBelow;
    } else {
      const int b = d.band[m];
      switch (mode) {
        case BandMode::At: keep = b == j; break;
        case BandMode::Below: keep = b < j; break;
        case BandMode::WellBelow: keep = b < j - d.J; break;
        case BandMode::Near: keep = std::abs(b - j) <= d.J; break;
        default: keep = false;
      }
    }
    if (keep) out[m] = f[m];
  }
  return out;
}

SpaceTimeArray SpaceTimeArray::window(std::size_t first, std::size_t last) const {
  if (first >= last || last > snapshots.size()) throw InvalidArgument("invalid time window");
  SpaceTimeArray w;
  w.snapshots.assign(snapshots.begin() + static_cast<long>(first),
                     snapshots.begin() + static_cast<long>(last));
  w.t0 = t0 + dt_out * static_cast<double>(first);
  w.dt_out = dt_out;
  return w;
}

void check_array(const SpaceTimeArray& a) {
  if (a.snapshots.empty()) throw InvalidArgument("space-time array has no snapshots");
  if (!(a.dt_out > 0.0)) throw InvalidArgument("snapshot spacing must be positive");
  for (const auto& s : a.snapshots) require_same_grid(a.snapshots.front(), s);
}

double mixed_norm(const std::vector<std::vector<double>>& samples, double dx, double dt, double p,
                  double q) {
  if (samples.empty()) return 0.0;
  if (p < 1.0 || q < 1.0) throw InvalidArgument("Lebesgue exponents must lie in [1, inf]");
  const std::size_t nx = samples.front().size();
  double outer = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    double inner = 0.0;
    if (std::isinf(q)) {
      for (const auto& s : samples) inner = std::max(inner, std::abs(s[x]));
    } else {
      for (const auto& s : samples) inner += dt * power_norm_term(s[x], q);
      inner = std::pow(inner, 1.0 / q);
    }
    if (std::isinf(p))
      outer = std::max(outer, inner);
    else
      outer += dx * power_norm_term(inner, p);
  }
  return std::isinf(p) ? outer : std::pow(outer, 1.0 / p);
}

double besov_spacetime_norm(const SpaceTimeArray& a, const DyadicDecomposition& d, double s,
                            double p, double q, double r) {
  check_array(a);
  if (r < 1.0) throw InvalidArgument("summation exponent must lie in [1, inf]");
  const double dx = a.snapshots.front().grid().spacing();
  double acc = 0.0;
  for (int j = d.j_min; j <= d.j_max; ++j) {
    std::vector<std::vector<double>> samples;
    samples.reserve(a.snapshots.size());
    bool any = false;
    for (const auto& snap : a.snapshots) {
      SpectralField qj = dyadic_project(snap, d, j, BandMode::At);
      any = any || !is_zero(qj);
      samples.push_back(qj.samples());
    }
    if (!any) continue;
    const double term = std::pow(2.0, j * s) * mixed_norm(samples, dx, a.dt_out, p, q);
    if (std::isinf(r))
      acc = std::max(acc, term);
    else
      acc += std::pow(term, r);
  }
  return std::isinf(r) ? acc : std::pow(acc, 1.0 / r);
}

double strichartz_norm(const SpaceTimeArray& a, const DyadicDecomposition& d, double s,
                       double theta) {
  if (theta < 0.0 || theta > 1.0) throw InvalidArgument("theta must lie in [0, 1]");
  const double p = theta == 1.0 ? kInf : 4.0 / (1.0 - theta);
  const double q = theta == 0.0 ? kInf : 2.0 / theta;
  return besov_spacetime_norm(a, d, s + (3.0 * theta - 1.0) / 4.0, p, q, 2.0);
}

double dual_norm(const SpaceTimeArray& a, const DyadicDecomposition& d, double s) {
  return besov_spacetime_norm(a, d, s - 0.5, 1.0, 2.0, 2.0);
}

double x_norm(const SpaceTimeArray& a, const DyadicDecomposition& d, double s, double eps) {
  return strichartz_norm(a, d, s, eps) + strichartz_norm(a, d, s, 1.0);
}

double lk_linf(const SpaceTimeArray& a, double k) {
  check_array(a);
  std::vector<std::vector<double>> samples;
  for (const auto& snap : a.snapshots) samples.push_back(snap.samples());
  return mixed_norm(samples, a.snapshots.front().grid().spacing(), a.dt_out, k, kInf);
}

SpectralField paraproduct_pi(const SpectralField& psi, const SpectralField& phi,
                             const DyadicDecomposition& d, int k) {
  require_same_grid(psi, phi);
  SpectralField total(psi.grid_ptr());
  for (const auto& piece : pi_pieces(psi, phi, d, k)) total += piece;
  return total;
}

Paraproduct paraproduct_decompose(const SpectralField& u, const DyadicDecomposition& d, int k) {
  if (k < 1) throw InvalidArgument("power k must be >= 1");
  Paraproduct out;
  PowerResult pw = dealiased_power(u, k + 1);
  out.truncated = pw.truncated;
  out.F = -1.0 * derivative(pw.field);

  const std::vector<SpectralField> pieces = pi_pieces(u, u, d, k);
  out.pi_part = SpectralField(u.grid_ptr());
  for (const auto& p : pieces) out.pi_part += p;
  out.g_part = out.F + out.pi_part;

  // Telescoped route: u^{k+1} - mean^{k+1} = sum_r u_r P_r with
  // P_r = sum_l u_{<r+1}^{k-l} u_{<r}^l.  Q_j only sees r >= j - C_k.
  const std::size_t fine = u.grid().pad_factor() * u.grid().size();
  const int nb = d.count();
  std::vector<std::vector<double>> suffix(static_cast<std::size_t>(nb) + 1,
                                          std::vector<double>(fine, 0.0));
  for (int r = d.j_max; r >= d.j_min; --r) {
    const std::vector<double> ur = dyadic_project(u, d, r, BandMode::At).fine_samples(fine);
    const std::vector<double> lo = dyadic_project(u, d, r, BandMode::Below).fine_samples(fine);
    const auto idx = static_cast<std::size_t>(r - d.j_min);
    for (std::size_t i = 0; i < fine; ++i) {
      const double hi = lo[i] + ur[i];
      double p = 0.0;
      for (int l = 0; l <= k; ++l) p += std::pow(hi, k - l) * std::pow(lo[i], l);
      suffix[idx][i] = suffix[idx + 1][i] + ur[i] * p;
    }
  }
  out.g_grouped = SpectralField(u.grid_ptr());
  for (int j = d.j_min; j <= d.j_max; ++j) {
    const int r0 = std::max(j - d.C_k, d.j_min);
    const auto& s = suffix[static_cast<std::size_t>(r0 - d.j_min)];
    SpectralField part = SpectralField::from_fine_samples(u.grid_ptr(), s);
    SpectralField gj = pieces[static_cast<std::size_t>(j - d.j_min)] -
                       derivative(dyadic_project(part, d, j, BandMode::At));
    out.g_grouped += gj;
  }
  return out;
}

EstimateReport nonlinear_estimate_ratios(const std::vector<SpaceTimeArray>& ensemble,
                                         const DyadicDecomposition& d, int k, double eps) {
  if (ensemble.empty()) throw InvalidArgument("estimate ensemble is empty");
  EstimateReport rep;
  rep.k = k;
  rep.eps = eps;
  const double sk = 0.5 - 1.0 / k;
  std::vector<double> pis, gs;
  for (const auto& a : ensemble) {
    check_array(a);
    SpaceTimeArray pi_arr{{}, a.t0, a.dt_out}, g_arr{{}, a.t0, a.dt_out};
    for (const auto& u : a.snapshots) {
      Paraproduct pp = paraproduct_decompose(u, d, k);
      pi_arr.snapshots.push_back(std::move(pp.pi_part));
      g_arr.snapshots.push_back(std::move(pp.g_part));
    }
    const double lk = lk_linf(a, k);
    const double xn = x_norm(a, d, sk, eps);
    const double rhs_pi = std::pow(lk, k) * xn;
    const double rhs_g = std::pow(lk, k - 1) * xn * xn;
    if (!(rhs_pi > 0.0) || !(rhs_g > 0.0)) {
      ++rep.skipped;
      continue;
    }
    EstimateSample s;
    s.pi_ratio = dual_norm(pi_arr, d, sk) / rhs_pi;
    s.g_ratio = dual_norm(g_arr, d, sk) / rhs_g;
    pis.push_back(s.pi_ratio);
    gs.push_back(s.g_ratio);
    rep.samples.push_back(s);
  }
  if (!pis.empty()) {
    rep.pi_max = *std::max_element(pis.begin(), pis.end());
    rep.g_max = *std::max_element(gs.begin(), gs.end());
    rep.pi_median = median(pis);
    rep.g_median = median(gs);
  }
  return rep;
}

}  // namespace gbo
