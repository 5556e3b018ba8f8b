#include "gbo/positivity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "gbo/error.hpp"
#include "gbo/sim_config.hpp"
#include "gbo/spectral.hpp"

namespace gbo {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::size_t next_pow2_above(std::size_t m) {
  std::size_t p = 16;
  while (p <= m) p *= 2;
  return p;
}

// Zero everything outside 1 <= |m| <= N.
void project(SpectralField& f, std::size_t N) {
  const std::size_t n = f.size();
  for (std::size_t i = 0; i < n; ++i) {
    const long m = f.grid().wavenumber(i);
    const std::size_t a = static_cast<std::size_t>(std::labs(m));
    if (a == 0 || a > N || i == f.grid().nyquist()) f[i] = 0.0;
  }
}

double dot(const SpectralField& a, const SpectralField& b) { return integrate_product(a, b); }

double weighted_sum(const std::vector<double>& a, double h) {
  return h * std::accumulate(a.begin(), a.end(), 0.0);
}

}  // namespace

std::string ChiSpec::describe() const {
  if (beta == 0.0) return "1";
  std::ostringstream os;
  os.precision(17);
  os << "1-" << beta << "*(1-cos(" << n << "x))/2";
  return os.str();
}

SphereProblem build_problem(std::size_t N_modes, int k, const ChiSpec& chi) {
  require_valid_power(k);
  if (N_modes < 1) throw InvalidArgument("N_modes must be >= 1");
  if (chi.n < 1) throw InvalidArgument("chi frequency must be >= 1");
  if (!(chi.beta >= 0.0 && chi.beta <= 1.0)) throw InvalidArgument("chi beta must lie in [0, 1]");
  SphereProblem p;
  p.N_modes = N_modes;
  p.k = k;
  p.alpha = 0.5 - 2.0 / (k + 2);
  p.chi = chi;
  const std::size_t band = (static_cast<std::size_t>(k) + 2) * N_modes +
                           (chi.beta == 0.0 ? 0 : static_cast<std::size_t>(chi.n));
  p.grid = make_grid(next_pow2_above(band), kTwoPi, 1);
  const std::size_t P = p.grid->size();
  p.chi2.resize(P);
  p.d2chi2.resize(P);
  for (std::size_t i = 0; i < P; ++i) {
    const double x = p.grid->x(i);
    const double c = std::cos(chi.n * x);
    p.chi2[i] = 1.0 - chi.beta * (1.0 - c) / 2.0;
    p.d2chi2[i] = -chi.beta * chi.n * chi.n * c / 2.0;
  }
  return p;
}

void require_feasible(const SpectralField& u, const SphereProblem& p) {
  if (!(u.grid() == *p.grid)) throw InvalidArgument("vector is not on the problem grid");
  if (!u.all_finite()) throw InvalidArgument("vector has non-finite coefficients");
  const double scale = std::sqrt(std::accumulate(
      u.coeffs().begin(), u.coeffs().end(), 0.0, [](double a, cplx c) { return a + std::norm(c); }));
  if (scale == 0.0) throw InvalidArgument("zero vector is infeasible");
  const double tol = 1e-12 * scale;
  if (u.hermitian_defect() > tol) throw InvalidArgument("vector is not real");
  if (std::abs(u.mean()) > tol) throw InvalidArgument("vector does not have mean zero");
  for (std::size_t i = 0; i < u.size(); ++i) {
    const std::size_t a = static_cast<std::size_t>(std::labs(u.grid().wavenumber(i)));
    if (a > p.N_modes && std::abs(u[i]) > tol)
      throw InvalidArgument("vector is not band-limited to N_modes");
  }
}

double eval_f(const SpectralField& u, const SphereProblem& p) {
  require_feasible(u, p);
  const auto us = u.samples();
  const auto du = frac_deriv(u, 1.0).samples();
  const double h = p.grid->spacing();
  double acc = 0.0;
  for (std::size_t i = 0; i < us.size(); ++i)
    acc += p.chi2[i] * std::pow(us[i], p.k + 1) * du[i];
  return h * acc;
}

FGrad eval_f_grad(const SpectralField& u, const SphereProblem& p) {
  require_feasible(u, p);
  const auto us = u.samples();
  const auto du = frac_deriv(u, 1.0).samples();
  const std::size_t P = us.size();
  const double h = p.grid->spacing();
  std::vector<double> a(P), b(P);
  double acc = 0.0;
  for (std::size_t i = 0; i < P; ++i) {
    const double uk = std::pow(us[i], p.k);
    acc += p.chi2[i] * uk * us[i] * du[i];
    a[i] = (p.k + 1) * p.chi2[i] * uk * du[i];
    b[i] = p.chi2[i] * uk * us[i];
  }
  FGrad out;
  out.value = h * acc;
  out.grad = SpectralField::from_samples(p.grid, a) +
             frac_deriv(SpectralField::from_samples(p.grid, b), 1.0);
  project(out.grad, p.N_modes);
  out.grad.enforce_real();
  return out;
}

double hdot_alpha(const SpectralField& u, const SphereProblem& p) {
  return sobolev_norm(u, p.alpha, true);
}

SpectralField retract(const SpectralField& u, const SphereProblem& p) {
  const double n = hdot_alpha(u, p);
  if (!(n > 0.0)) throw InvalidArgument("zero vector cannot be normalized");
  return (1.0 / n) * u;
}

SpectralField random_point(const SphereProblem& p, std::mt19937_64& rng, double decay) {
  for (;;) {
    SpectralField u = random_field(p.grid, p.N_modes, decay, rng);
    if (hdot_alpha(u, p) > 0.0) return retract(u, p);
  }
}

Residuals evaluate_residuals(const SpectralField& u, const SphereProblem& p) {
  const FGrad fg = eval_f_grad(u, p);
  const SpectralField n = frac_deriv(u, 2.0 * p.alpha);
  Residuals r;
  r.lambda = dot(fg.grad, n) / dot(n, n);
  r.lagrange = std::sqrt(std::max(0.0, dot(fg.grad - r.lambda * n, fg.grad - r.lambda * n)));
  r.pohozaev1 = std::abs(r.lambda - (p.k + 2) * fg.value);

  const SpectralField Du = frac_deriv(u, 1.0);
  const double lhs = r.lambda * dot(n, Du);
  const auto us = u.samples();
  const auto ds = Du.samples();
  const auto xs = derivative(u).samples();
  const double h = p.grid->spacing();
  std::vector<double> t1(us.size()), t2(us.size());
  for (std::size_t i = 0; i < us.size(); ++i) {
    const double uk = std::pow(us[i], p.k);
    t1[i] = p.chi2[i] * uk * (ds[i] * ds[i] + xs[i] * xs[i]);
    t2[i] = p.d2chi2[i] * uk * us[i] * us[i];
  }
  const double a = (p.k + 1) * weighted_sum(t1, h);
  const double b = weighted_sum(t2, h) / (p.k + 2);
  r.pohozaev2 = std::abs(lhs - (a - b));
  r.pohozaev2_scale = std::abs(lhs) + std::abs(a) + std::abs(b);
  return r;
}

ExtremizerReport minimize_from(const SpectralField& start, const SphereProblem& p,
                               const MinimizeOptions& opt) {
  constexpr double armijo = 1e-4;
  SpectralField u = retract(start, p);
  FGrad fg = eval_f_grad(u, p);

  auto direction = [&](const SpectralField& x, const FGrad& g, SpectralField& tg) {
    const SpectralField n = frac_deriv(x, 2.0 * p.alpha);
    tg = g.grad - (dot(g.grad, n) / dot(n, n)) * n;
    if (!opt.precondition) return tg;
    // Steepest descent in the dot H^alpha metric: Riesz map D^{-2 alpha},
    // then remove the component along x (the normal in that metric).
    SpectralField G = frac_deriv(g.grad, -2.0 * p.alpha);
    project(G, p.N_modes);
    const double mu = dot(frac_deriv(G, p.alpha), frac_deriv(x, p.alpha));
    return G - mu * x;
  };

  SpectralField tg;
  SpectralField d = direction(u, fg, tg);
  double gnorm = std::sqrt(dot(tg, tg));
  double step = gnorm > 0.0 ? 0.1 / std::sqrt(dot(d, d)) : 0.0;

  ExtremizerReport rep;
  int it = 0;
  for (; it < opt.max_iter && gnorm > opt.tol; ++it) {
    const double slope = dot(tg, d);
    if (!(slope > 0.0)) break;
    double t = step;
    SpectralField un;
    FGrad fn;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      un = retract(u - t * d, p);
      fn = eval_f_grad(un, p);
      if (fn.value <= fg.value - armijo * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    SpectralField tgn;
    SpectralField dn = direction(un, fn, tgn);
    const SpectralField s = un - u;
    const SpectralField y = dn - d;
    const double sy = dot(s, y);
    step = sy > 0.0 ? dot(s, s) / sy : 2.0 * t;
    if (!std::isfinite(step) || step <= 0.0) step = t;
    u = std::move(un);
    fg = std::move(fn);
    d = std::move(dn);
    tg = std::move(tgn);
    gnorm = std::sqrt(dot(tg, tg));
  }

  rep.u0 = u;
  rep.f_value = fg.value;
  rep.tangential_grad = gnorm;
  rep.iterations = it;
  rep.converged = gnorm <= opt.tol;
  rep.restarts = 1;
  rep.converged_restarts = rep.converged ? 1 : 0;
  rep.best_restart = 0;
  const Residuals r = evaluate_residuals(u, p);
  rep.lambda = r.lambda;
  rep.lagrange_residual = r.lagrange;
  rep.pohozaev1_residual = r.pohozaev1;
  rep.pohozaev2_residual = r.pohozaev2;
  rep.pohozaev2_scale = r.pohozaev2_scale;
  return rep;
}

namespace {

template <class F>
void run_indexed(std::size_t count, unsigned workers, F&& body) {
  const unsigned w = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (w == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(w);
  for (unsigned t = 0; t < w; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < count; i += w) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t id) {
  return seed + 0x9E3779B97F4A7C15ULL * (id + 1);
}

}  // namespace

ExtremizerReport minimize_sphere(const SphereProblem& p, const MinimizeOptions& opt) {
  if (opt.restarts < 1) throw InvalidArgument("restarts must be >= 1");
  std::vector<ExtremizerReport> runs(static_cast<std::size_t>(opt.restarts));
  run_indexed(runs.size(), opt.workers, [&](std::size_t r) {
    std::mt19937_64 rng(stream_seed(opt.seed, r));
    runs[r] = minimize_from(random_point(p, rng, 1.0), p, opt);
  });

  int converged = 0;
  int best = -1;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (!runs[r].converged) continue;
    ++converged;
    if (best < 0 || runs[r].f_value < runs[static_cast<std::size_t>(best)].f_value)
      best = static_cast<int>(r);
  }
  ExtremizerReport out;
  if (best < 0) {
    // Nothing converged: report the lowest point found anyway.
    best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r)
      if (runs[r].f_value < runs[static_cast<std::size_t>(best)].f_value) best = static_cast<int>(r);
  }
  out = runs[static_cast<std::size_t>(best)];
  out.restarts = opt.restarts;
  out.converged_restarts = converged;
  out.best_restart = best;
  out.converged = converged > 0;
  return out;
}

Residuals lagrange_pohozaev_residuals(const ExtremizerReport& rep, const SphereProblem& p) {
  if (!rep.converged) throw InvalidArgument("extremizer report did not converge");
  return evaluate_residuals(rep.u0, p);
}

FalsifierResult random_falsifier(const SphereProblem& p, std::size_t samples, std::uint64_t seed,
                                 const MinimizeOptions& polish) {
  if (samples < 1) throw InvalidArgument("samples must be >= 1");
  std::vector<double> values(samples);
  const unsigned w = std::max(1u, polish.workers);
  // Sample i uses its own stream, so the set of points does not depend on w.
  run_indexed(samples, w, [&](std::size_t i) {
    std::mt19937_64 rng(stream_seed(seed, i));
    values[i] = eval_f(random_point(p, rng, p.alpha), p);
  });
  std::vector<std::size_t> order(samples);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t keep = std::min<std::size_t>(10, samples);
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(keep), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return values[a] < values[b] || (values[a] == values[b] && a < b);
                    });
  FalsifierResult out;
  out.samples = samples;
  out.min_sampled = values[order[0]];
  std::vector<double> polished(keep);
  MinimizeOptions local = polish;
  local.workers = 1;
  run_indexed(keep, w, [&](std::size_t j) {
    std::mt19937_64 rng(stream_seed(seed, order[j]));
    polished[j] = minimize_from(random_point(p, rng, p.alpha), p, local).f_value;
  });
  out.min_polished = *std::min_element(polished.begin(), polished.end());
  out.f_min = std::min(out.min_sampled, out.min_polished);
  return out;
}

double embedding_ratio_of(const SpectralField& u, const SphereProblem& p) {
  require_feasible(u, p);
  const auto us = u.samples();
  double acc = 0.0;
  for (double v : us) acc += std::pow(v, p.k + 2);
  const double num = p.grid->spacing() * acc;
  const double hi = sobolev_norm(u, p.alpha + 0.5, true);
  const double lo = sobolev_norm(u, p.alpha, true);
  return num / (hi * hi * std::pow(lo, p.k));
}

double embedding_ratio(const std::vector<SpectralField>& ensemble, const SphereProblem& p) {
  if (ensemble.empty()) throw InvalidArgument("ensemble is empty");
  double best = 0.0;
  bool any = false;
  for (const auto& u : ensemble) {
    if (hdot_alpha(u, p) == 0.0) continue;
    best = std::max(best, embedding_ratio_of(u, p));
    any = true;
  }
  if (!any) throw InvalidArgument("ensemble has no nonzero vectors");
  return best;
}

}  // namespace gbo
