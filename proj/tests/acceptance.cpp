// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "gbo/checkpoint.hpp"
#include "gbo/config.hpp"
#include "gbo/diagnostics.hpp"
#include "gbo/littlewood_paley.hpp"
#include "gbo/monotonicity_local.hpp"
#include "gbo/positivity.hpp"
#include "gbo/runner.hpp"
#include "gbo/solver.hpp"
#include "gbo/spectral.hpp"
#include "gbo/weights.hpp"
#include "oracles.hpp"

using namespace gbo;
namespace fs = std::filesystem;
using oracle::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[" << what << "] ";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double l2(const SpectralField& f) { return std::sqrt(integrate_product(f, f)); }

double rel_l2(const SpectralField& a, const SpectralField& b) { return l2(a - b) / l2(b); }

SpectralField from_spectrum(GridPtr g, const oracle::Spectrum& s) {
  SpectralField f(g);
  const long n = static_cast<long>(g->size());
  for (auto [m, c] : s) f[static_cast<std::size_t>((m + n) % n)] = c;
  return f;
}

oracle::Spectrum random_modes(const std::vector<long>& modes, std::mt19937_64& rng, double amp) {
  std::normal_distribution<double> n;
  oracle::Spectrum s;
  for (long m : modes) {
    const cplx c(amp * n(rng), amp * n(rng));
    s[m] = c;
    s[-m] = std::conj(c);
  }
  return s;
}

int band_of(long m) { return std::ilogb(static_cast<double>(std::labs(m))); }

SpectralField trig(GridPtr g, double (*f)(double), double m) {
  return SpectralField::from_function(g, [&](double x) { return f(m * x); });
}

double sin_(double x) { return std::sin(x); }
double cos_(double x) { return std::cos(x); }

void report(int id, const std::string& name, const Outcome& o, double secs) {
  std::printf("%s %2d %-28s %s(%.1fs)\n", o.pass ? "PASS" : "FAIL", id, name.c_str(),
              o.detail.str().c_str(), secs);
  std::fflush(stdout);
}

Outcome operator_identities() {
  Outcome o;
  auto g = make_grid(1024, 2 * pi, 4);
  auto c1 = trig(g, cos_, 1.0), s1 = trig(g, sin_, 1.0), c4 = trig(g, cos_, 4.0);
  const double e1 = rel_l2(hilbert(c1), s1);

  std::mt19937_64 rng(11);
  SpectralField f = random_field(g, 400, 0.5, rng, true);
  SpectralField centered = f;
  centered[0] = 0.0;
  const double e2 = rel_l2(hilbert(hilbert(f)), -1.0 * centered);
  const double e3 = rel_l2(frac_deriv(c4, 0.5), 2.0 * c4);
  double e4 = 0.0;
  for (double s : {-0.5, 0.0, 1.0 / 3.0, 1.0})
    for (double t : {-3.0, 0.7, 25.0}) {
      const double a = sobolev_norm(f, s, true), b = sobolev_norm(linear_propagate(f, t), s, true);
      e4 = std::max(e4, std::abs(a - b) / a);
    }
  o.detail << "H(cos) " << e1 << ", H^2 " << e2 << ", D^1/2 " << e3 << ", isometry " << e4 << " ";
  o.require(e1 <= 1e-12 && e2 <= 1e-12 && e3 <= 1e-12 && e4 <= 1e-12, "tolerance 1e-12");
  return o;
}

SimConfig default_run() { return SimConfig{}; }

Outcome conservation() {
  Outcome o;
  const auto t0 = Clock::now();
  const Trajectory t = simulate(default_run());
  const double secs = seconds_since(t0);
  auto drift = [](const Trajectory& tr) {
    const auto& a = tr.records.front();
    const auto& b = tr.records.back();
    return std::pair{std::abs(b.mass - a.mass) / a.mass, std::abs(b.energy - a.energy) / std::abs(a.energy)};
  };
  const auto [dM, dE] = drift(t);
  o.detail << "dM/M " << dM << ", dE/E " << dE << " in " << secs << "s; ";
  o.require(dM <= 1e-8 && dE <= 1e-8, "drift 1e-8");
  o.require(secs < 120.0, "runtime 2 min");

  std::vector<double> de;
  for (double dt : {0.2, 0.1, 0.05}) {
    SimConfig c = default_run();
    c.dt = dt;
    c.snapshot_dt = 0.2;
    de.push_back(drift(simulate(c)).second);
  }
  const double p1 = std::log2(de[0] / de[1]), p2 = std::log2(de[1] / de[2]);
  o.detail << "energy drift order " << p1 << ", " << p2 << " ";
  o.require(p1 >= 3.5 && p1 <= 4.5 && p2 >= 3.5 && p2 <= 4.5, "order in [3.5, 4.5]");
  return o;
}

// Five nonlinear k=6 runs for the center-gap check.
std::vector<SimConfig> sample_runs() {
  std::vector<SimConfig> out;
  const double amps[] = {0.5, 0.8, 1.0, 0.7, 0.9};
  const double widths[] = {3.0, 4.0, 2.5, 5.0, 3.5};
  for (int i = 0; i < 5; ++i) {
    SimConfig c;
    c.N = 2048;
    c.L = 400.0;
    c.t_end = 4.0;
    c.data.amp = amps[i];
    c.data.width = widths[i];
    if (i >= 3) {
      c.data.family = "modulated";
      c.data.carrier = i == 3 ? 1.0 : -2.0;
    }
    out.push_back(c);
  }
  return out;
}

Outcome monotonicity() {
  Outcome o;
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> amp(0.1, 1.0);
  auto g = make_grid(256, 64.0, 4);
  double worst = std::numeric_limits<double>::infinity();
  for (int k : {4, 6})
    for (int i = 0; i < 1000; ++i) {
      SpectralField u = random_field(g, 24, 1.0, rng);
      u *= amp(rng) / sobolev_norm(u, 1.0, false);
      worst = std::min(worst, monotonicity_gap(u, k) / monotonicity_scale(u, k));
    }
  o.detail << "min gap/scale " << worst << "; ";
  o.require(worst >= -1e-10, "gap >= -1e-10 scale");

  double min_inc = std::numeric_limits<double>::infinity();
  for (const SimConfig& c : sample_runs()) {
    const Trajectory t = simulate(c);
    for (std::size_t i = 1; i < t.records.size(); ++i)
      min_inc = std::min(min_inc, (t.records[i].xE - t.records[i].xM) -
                                      (t.records[i - 1].xE - t.records[i - 1].xM));
  }
  o.detail << "min increment of xE-xM " << min_inc << " ";
  o.require(min_inc >= -1e-9, "xE-xM nondecreasing within 1e-9");
  return o;
}

// Odd profile with the given peak; zero mean keeps the periodic correction to
// the current identities below the difference-quotient error.
SpectralField odd_bump(GridPtr g, double x0, double w, double sup) {
  const double a = sup * std::sqrt(2.0 * std::numbers::e);
  return SpectralField::from_function(g, [=](double x) {
    const double r = (x - x0) / w;
    return a * r * std::exp(-r * r);
  });
}

Trajectory evolve(const SpectralField& u0, int k, double dt, double h, double T) {
  Stepper st(u0.grid_ptr(), k, dt, Integrator::EtdRk4);
  const long every = std::lround(h / dt), n = std::lround(T / h);
  std::vector<SpectralField> snaps{u0};
  SpectralField u = u0;
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < every; ++j) u = st.step(u);
    snaps.push_back(u);
  }
  return make_trajectory(std::move(snaps), 0.0, h, k);
}

Outcome center_currents() {
  Outcome o;
  auto g = make_grid(1024, 200.0, 4);
  const double sups[] = {0.8, 1.0, 0.9};
  const double widths[] = {4.0, 5.0, 4.5};
  for (int r = 0; r < 3; ++r) {
    const SpectralField u0 = odd_bump(g, 100.0, widths[r], sups[r]);
    std::vector<double> em, ee;
    for (double h : {0.1, 0.05, 0.025}) {
      const CenterResidual res = center_current_residual(evolve(u0, 6, 0.0025, h, 2.0));
      double m = 0.0, e = 0.0;
      for (double v : res.mass) m = std::max(m, std::abs(v));
      for (double v : res.energy) e = std::max(e, std::abs(v));
      em.push_back(m);
      ee.push_back(e);
    }
    for (const auto* s : {&em, &ee}) {
      const double p1 = std::log2((*s)[0] / (*s)[1]), p2 = std::log2((*s)[1] / (*s)[2]);
      o.detail << (s == &em ? "mass " : "energy ") << p1 << "," << p2 << "; ";
      o.require(p1 >= 1.5 && p1 <= 2.5 && p2 >= 1.5 && p2 <= 2.5, "order in [1.5, 2.5]");
    }
  }
  return o;
}

Outcome group_velocity() {
  Outcome o;
  for (double xi0 : {4.0, 8.0, 16.0}) {
    SimConfig c;
    c.N = 8192;
    c.L = 800.0;
    c.linear_only = true;
    c.dt = 0.05;
    c.t_end = 8.0;
    c.snapshot_dt = 0.5;
    c.data.family = "modulated";
    c.data.amp = 0.1;
    c.data.width = 10.0;
    c.data.carrier = xi0;
    c.data.x0 = 100.0;
    const double v = packet_velocity(simulate(c));
    o.detail << "xi0=" << xi0 << " v=" << v << "; ";
    o.require(std::abs(v - 2 * xi0) <= 0.05 * 2 * xi0, "speed 2 xi0 within 5%");
  }
  return o;
}

Outcome localized_functional() {
  Outcome o;
  SimConfig c;
  c.N = 2048;
  c.L = 1024.0;
  c.dt = 0.01;
  c.t_end = 4.0;
  c.snapshot_dt = 0.1;
  const Trajectory t = simulate(c);
  // t = 1: at t = 0 the symmetric data makes M vanish.
  const SpectralField& u0 = t.snapshots.at(10);
  std::vector<double> sup_ratio, neg;
  std::vector<std::array<double, 7>> terms;
  double worst_fft = 0.0;
  for (double R : {32.0, 64.0, 128.0}) {
    const WeightFamily w = build_weights(R, std::pow(R, 0.9), u0.grid_ptr());
    const double mf = interaction_M(u0, w, c.k), md = interaction_M_direct(u0, w, c.k);
    worst_fft = std::max(worst_fft, std::abs(mf - md) / std::abs(md));
    const DMReport rep = dM_report(t, w, c.k);
    sup_ratio.push_back(rep.sup_abs_M / R);
    neg.push_back(rep.negative_part);
    const ErrorBudget b = error_budget(u0, w, c.k);
    terms.push_back({b.E1, b.E2, b.E3, b.T1, b.T2, b.T3, b.T4});
  }
  o.detail << "(a) " << worst_fft << "; (b) sup|M|/R";
  for (double s : sup_ratio) o.detail << " " << s;
  o.detail << "; (c) |E1..T4| per R:";
  for (const auto& row : terms) {
    o.detail << " [";
    for (std::size_t j = 0; j < row.size(); ++j) o.detail << (j ? " " : "") << std::abs(row[j]);
    o.detail << "]";
  }
  o.detail << "; (d) negative part";
  for (double s : neg) o.detail << " " << s;
  o.detail << "; ";
  o.require(worst_fft <= 1e-10, "a: FFT vs direct");
  o.require(sup_ratio[1] <= 1.1 * sup_ratio[0] && sup_ratio[2] <= 1.1 * sup_ratio[0], "b: sup|M|/R bounded");
  const char* names[] = {"E1", "E2", "E3", "T1", "T2", "T3", "T4"};
  for (std::size_t i = 1; i < terms.size(); ++i)
    for (std::size_t j = 0; j < 7; ++j)
      o.require(std::abs(terms[i][j]) < std::abs(terms[i - 1][j]),
                std::string("c: ") + names[j] + " decreases");
  o.require(neg[1] <= neg[0] && neg[2] <= neg[1], "d: negative part shrinks");
  return o;
}

Outcome paraproduct() {
  Outcome o;
  auto g = make_grid(256, 64.0, 4);
  std::mt19937_64 rng(31);
  double worst = 0.0;
  for (int k : {4, 6}) {
    auto d = make_decomposition(g, 5, default_diagonal_width(k));
    for (int i = 0; i < 50; ++i) {
      SpectralField u = random_field(g, 100, 1.0, rng);
      u *= 0.8 / sobolev_norm(u, 0.5, false);
      const Paraproduct p = paraproduct_decompose(u, d, k);
      worst = std::max(worst, l2(p.F + p.pi_part - p.g_part) / l2(p.F));
    }
  }
  o.detail << "identity " << worst << "; ";
  o.require(worst <= 1e-10, "identity 1e-10");

  const std::size_t N = 2048;
  auto gf = make_grid(N, 2 * pi, 4);
  const int J = 5, k = 6;
  auto d = make_decomposition(gf, J, default_diagonal_width(k));
  double worst_oracle = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    oracle::Spectrum s = random_modes({600, 777, 1000}, rng, 0.2);
    for (auto [m, c] : random_modes({2, 3}, rng, 0.3)) s[m] = c;
    const Paraproduct p = paraproduct_decompose(from_spectrum(gf, s), d, k);
    oracle::Spectrum want;
    for (int j = d.j_min; j <= d.j_max; ++j) {
      oracle::Spectrum low, near;
      for (auto [m, c] : s) {
        if (m == 0 || band_of(m) < j - J) low[m] = c;
        if (m != 0 && std::abs(band_of(m) - j) <= J) near[m] = c;
      }
      if (low.empty() || near.empty()) continue;
      for (auto [m, c] : oracle::multiply(oracle::power(low, k), near))
        if (m != 0 && band_of(m) == j && std::labs(m) < static_cast<long>(N / 2))
          want[m] += cplx(0, static_cast<double>(m)) * c;
    }
    worst_oracle = std::max(worst_oracle, rel_l2(p.pi_part, from_spectrum(gf, want)));
  }
  o.detail << "two-band oracle " << worst_oracle << " ";
  o.require(worst_oracle <= 1e-8, "oracle 1e-8");
  return o;
}

// Gradient against central differences along every real basis direction.
double gradient_fd_error(const SphereProblem& p, const SpectralField& u) {
  const FGrad fg = eval_f_grad(u, p);
  const std::size_t P = p.grid->size();
  double num = 0.0, den = 0.0;
  for (std::size_t m = 1; m <= p.N_modes; ++m)
    for (int part = 0; part < 2; ++part) {
      SpectralField h(p.grid);
      h[m] = part == 0 ? cplx(0.5, 0.0) : cplx(0.0, -0.5);
      h[P - m] = std::conj(h[m]);
      h *= 1.0 / l2(h);
      const double fd = oracle::central_diff([&](double e) { return eval_f(u + e * h, p); }, 1e-3);
      const double an = integrate_product(fg.grad, h);
      num += (an - fd) * (an - fd);
      den += an * an;
    }
  return std::sqrt(num / den);
}

Outcome positivity() {
  Outcome o;
  double f_min = std::numeric_limits<double>::infinity();
  double poh1 = 0.0, poh2 = 0.0, grad = 0.0;
  bool all_converged = true;
  for (int k : {4, 6})
    for (std::size_t n : {4, 8, 16}) {
      const SphereProblem p = build_problem(n, k);
      MinimizeOptions mo;
      mo.seed = 41;
      const ExtremizerReport r = minimize_sphere(p, mo);
      all_converged = all_converged && r.converged;
      f_min = std::min(f_min, r.f_value);
      if (r.converged) {
        poh1 = std::max(poh1, r.pohozaev1_residual / std::abs(r.lambda));
        poh2 = std::max(poh2, r.pohozaev2_residual / r.pohozaev2_scale);
      }
      const FalsifierResult fr = random_falsifier(p, 20000, 43, mo);
      f_min = std::min(f_min, fr.f_min);
      std::mt19937_64 rng(47);
      for (int i = 0; i < 3; ++i) grad = std::max(grad, gradient_fd_error(p, random_point(p, rng, 1.0)));
      grad = std::max(grad, gradient_fd_error(p, r.u0));
    }
  o.detail << "min f " << f_min << ", pohozaev1 " << poh1 << ", pohozaev2 " << poh2
           << ", gradient FD " << grad << "; ";
  o.require(all_converged, "every case has a converged extremizer");
  o.require(f_min >= -1e-6, "minimum >= -1e-6");
  o.require(poh1 <= 1e-6 && poh2 <= 1e-6, "identities 1e-6");
  o.require(grad <= 1e-6, "gradient 1e-6");
  return o;
}

Outcome schur() {
  Outcome o;
  SampledKernel eq{8, 12, 0.5, std::vector<double>(96, 3.0)};
  std::vector<double> u1(8, 1.0), v1(12, 1.0);
  const SchurResult r0 = schur_check(eq, u1, v1, 3.0, 4.0, 6.0);
  o.detail << "equality " << r0.ratio << "; ";
  o.require(r0.admissible && r0.ratio == 1.0, "equality case exactly 1");

  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> width(1, 30);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 96;
    const std::size_t w = static_cast<std::size_t>(width(rng));
    const double h = 0.25, H = 1.5;
    SampledKernel K{n, n, h, std::vector<double>(n * n, 0.0)};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < std::min(n, i + w); ++j) K.values[i * n + j] = H * unit(rng);
    std::vector<double> u(n), v(n);
    for (auto& x : u) x = unit(rng);
    for (auto& x : v) x = unit(rng);
    const SchurResult r = schur_check(K, u, v, H, static_cast<double>(w) * h, static_cast<double>(w) * h);
    o.require(r.admissible, "kernel admissible");
    worst = std::max(worst, r.ratio);
  }
  o.detail << "random max " << worst << " ";
  o.require(worst <= 1.0 + 1e-10, "ratio <= 1 + 1e-10");
  return o;
}

Outcome scattering() {
  Outcome o;
  SimConfig c;
  c.N = 2048;
  c.L = 800.0;
  c.dt = 0.005;
  c.t_end = 40.0;
  c.snapshot_dt = 1.0;
  c.data.amp = 0.5;
  c.data.width = 3.0;
  const double s = 0.5 - 1.0 / c.k;
  auto halves = [&](const std::vector<double>& d) {
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) (i < d.size() / 2 ? a : b) += d[i];
    return std::pair{a, b};
  };
  const auto [early, late] = halves(scattering_cauchy(simulate(c), s));
  o.detail << "sum over [0,20] " << early << ", over [20,40] " << late << "; ";
  o.require(late <= 0.5 * early, "late differences at most half");

  c.linear_only = true;
  double lin = 0.0;
  for (double v : scattering_cauchy(simulate(c), s)) lin = std::max(lin, v);
  o.detail << "linear max " << lin << " ";
  o.require(lin <= 1e-12, "linear control 1e-12");
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "gbo_lab_acceptance";
  fs::remove_all(root);
  RunConfig rc = parse_config_text(
      R"({"k":6,"N":512,"L":100,"dt":0.005,"t_end":2,"snapshot_dt":0.1,"checkpoint_dt":0.5,
          "suites":["conservation","monotonicity","positivity","norms"],
          "monotonicity":{"samples":50},"positivity":{"N_modes":[4],"samples":2000},
          "norms":{"samples":4}})");
  rc.workers = 2;
  const RunResult a = run(rc, (root / "a").string());
  const RunResult b = run(rc, (root / "b").string());
  o.require(a.status == kPass && b.status == kPass, "runs pass");
  std::size_t files = 0, same = 0;
  for (const auto& e : fs::recursive_directory_iterator(root / "a")) {
    if (!e.is_regular_file()) continue;
    ++files;
    const fs::path other = root / "b" / fs::relative(e.path(), root / "a");
    if (fs::exists(other) && slurp(e.path()) == slurp(other)) ++same;
  }
  o.detail << same << "/" << files << " artifacts identical; ";
  o.require(files > 0 && same == files, "byte-identical artifacts");

  std::mt19937_64 rng(61);
  auto g = make_grid(256, 31.4, 4);
  const SimState st{7.25, random_field(g, 127, 0.3, rng, true), 6, 1234};
  const std::string path = (root / "rt.gbo").string();
  write_checkpoint(st, path);
  const SimState back = read_checkpoint(path);
  bool exact = back.t == st.t && back.k == st.k && back.u.grid().length() == g->length() &&
               back.u.coeffs() == st.u.coeffs();
  write_checkpoint(back, (root / "rt2.gbo").string());
  exact = exact && slurp(path) == slurp(root / "rt2.gbo");
  o.detail << "checkpoint round trip " << (exact ? "bit-exact" : "differs") << " ";
  o.require(exact, "checkpoint bit-exact");
  fs::remove_all(root);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> fn;
  };
  const Criterion all[] = {
      {"operator-identities", operator_identities},
      {"conservation", conservation},
      {"monotonicity-inequality", monotonicity},
      {"center-current-relations", center_currents},
      {"group-velocity", group_velocity},
      {"localized-functional", localized_functional},
      {"paraproduct", paraproduct},
      {"positivity", positivity},
      {"schur-test", schur},
      {"scattering-diagnostic", scattering},
      {"determinism-and-io", determinism},
  };
  int failures = 0, id = 1;
  for (const auto& c : all) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what() << " ";
    }
    const double secs = seconds_since(t0);
    if (id == 1) o.require(secs < 1.0, "runtime 1 s");
    if (id == 8) o.require(secs < 300.0, "runtime 5 min");
    report(id++, c.name, o, secs);
    if (!o.pass) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(all)) - failures, std::size(all));
  return failures == 0 ? 0 : 1;
}
