#include "gbo/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gbo/checkpoint.hpp"
#include "gbo/diagnostics.hpp"
#include "gbo/error.hpp"
#include "gbo/littlewood_paley.hpp"
#include "gbo/monotonicity_local.hpp"
#include "gbo/positivity.hpp"
#include "gbo/solver.hpp"
#include "gbo/spectral.hpp"
#include "gbo/weights.hpp"

namespace gbo {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write '" + p.string() + "'");
  os << text;
}

void write_json(const fs::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

std::string kind_name(SimulationAbort::Kind k) {
  switch (k) {
    case SimulationAbort::Kind::BlowUp: return "blow_up";
    case SimulationAbort::Kind::Cfl: return "cfl";
    case SimulationAbort::Kind::Guard: return "guard";
  }
  return "unknown";
}

std::string checkpoint_name(std::size_t step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "ckpt_%09zu.gbo", step);
  return buf;
}

class Runner {
 public:
  Runner(const RunConfig& c, fs::path out) : c_(c), out_(std::move(out)) {}

  RunResult execute() {
    fs::create_directories(out_);
    write_text(out_ / "config.json", to_json(c_) + "\n");
    RunResult res;
    try {
      for (const auto& s : c_.suites) res.suites.push_back(run_suite(s));
      for (const auto& s : res.suites)
        if (!s.passed) res.status = kAssertionFailed;
    } catch (const SimulationAbort& e) {
      res.status = kAborted;
      res.abort_message = e.what();
      const SimState& last = e.last_valid();
      write_checkpoint(last, (out_ / "abort.gbo").string());
      write_json(out_ / "abort.json", {{"kind", kind_name(e.kind())},
                                       {"message", e.what()},
                                       {"t_last_valid", last.t},
                                       {"step_last_valid", last.step_count}});
    }
    json suites = json::array();
    for (const auto& s : res.suites)
      suites.push_back({{"name", s.name}, {"passed", s.passed}, {"message", s.message}});
    json summary = {{"status", res.status}, {"suites", suites}};
    if (res.status == kAborted) summary["abort"] = res.abort_message;
    write_json(out_ / "summary.json", summary);
    return res;
  }

 private:
  SuiteResult run_suite(const std::string& name) {
    if (name == "conservation") return conservation();
    if (name == "monotonicity") return monotonicity();
    if (name == "local") return local();
    if (name == "positivity") return positivity();
    if (name == "norms") return norms();
    throw InvalidArgument("unknown suite '" + name + "'");
  }

  // The simulation is shared by every suite of one run.
  const Trajectory& trajectory() {
    if (traj_) return *traj_;
    fs::path ck = out_ / "checkpoints";
    if (c_.sim.checkpoint_dt > 0.0) fs::create_directories(ck);
    Trajectory t = simulate(c_.sim, [&](const SimState& s) {
      write_checkpoint(s, (ck / checkpoint_name(s.step_count)).string());
    });
    std::ostringstream csv;
    write_csv(csv, t.records);
    write_text(out_ / "series.csv", csv.str());
    write_checkpoint(SimState{t.times.back(), t.snapshots.back(), c_.sim.k, c_.sim.steps()},
                     (out_ / "final.gbo").string());
    traj_ = std::move(t);
    return *traj_;
  }

  SuiteResult conservation() {
    const Trajectory& t = trajectory();
    const Observables& a = t.records.front();
    const Observables& b = t.records.back();
    const double dM = std::abs(b.mass - a.mass) / std::abs(a.mass);
    const double dE = std::abs(b.energy - a.energy) / std::abs(a.energy);
    double res_m = 0.0, res_e = 0.0;
    if (t.records.size() >= 3) {
      const CenterResidual r = center_current_residual(t);
      for (double v : r.mass) res_m = std::max(res_m, std::abs(v));
      for (double v : r.energy) res_e = std::max(res_e, std::abs(v));
    }
    const bool ok = dM <= c_.conservation.tol && dE <= c_.conservation.tol;
    write_json(out_ / "conservation.json",
               {{"mass_initial", a.mass},
                {"mass_final", b.mass},
                {"mass_rel_drift", dM},
                {"energy_initial", a.energy},
                {"energy_final", b.energy},
                {"energy_rel_drift", dE},
                {"mean_drift", std::abs(b.mean - a.mean)},
                {"center_residual_mass_max", res_m},
                {"center_residual_energy_max", res_e},
                {"records", t.records.size()},
                {"tol", c_.conservation.tol},
                {"passed", ok}});
    std::ostringstream msg;
    msg << "rel drift mass " << dM << " energy " << dE;
    return {"conservation", ok, msg.str()};
  }

  SuiteResult monotonicity() {
    const auto& m = c_.monotonicity;
    const int k = c_.sim.k;
    GridPtr g = make_grid(m.N, m.L, c_.sim.pad);
    std::mt19937_64 rng(c_.seed);
    std::uniform_real_distribution<double> amp(0.1, 1.0);
    double worst = std::numeric_limits<double>::infinity();
    std::size_t violations = 0;
    for (std::size_t i = 0; i < m.samples; ++i) {
      SpectralField u = random_field(g, m.max_mode, 1.0, rng);
      u *= amp(rng) / sobolev_norm(u, 1.0, false);
      const double rel = monotonicity_gap(u, k) / monotonicity_scale(u, k);
      worst = std::min(worst, rel);
      if (rel < -m.gap_tol) ++violations;
    }

    const Trajectory& t = trajectory();
    double min_step = std::numeric_limits<double>::infinity();
    double traj_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.records.size(); ++i) {
      traj_gap = std::min(traj_gap, monotonicity_gap(t.snapshots[i], k) /
                                        monotonicity_scale(t.snapshots[i], k));
      if (i > 0) {
        const double d = (t.records[i].xE - t.records[i].xM) -
                         (t.records[i - 1].xE - t.records[i - 1].xM);
        min_step = std::min(min_step, d);
      }
    }
    if (t.records.size() < 2) min_step = 0.0;
    const bool ok = violations == 0 && traj_gap >= -m.gap_tol && min_step >= -m.drift_tol;
    write_json(out_ / "monotonicity.json", {{"k", k},
                                            {"samples", m.samples},
                                            {"min_relative_gap", worst},
                                            {"violations", violations},
                                            {"trajectory_min_relative_gap", traj_gap},
                                            {"center_gap_min_increment", min_step},
                                            {"gap_tol", m.gap_tol},
                                            {"drift_tol", m.drift_tol},
                                            {"passed", ok}});
    std::ostringstream msg;
    msg << "min gap/scale " << worst << ", min increment of xE-xM " << min_step;
    return {"monotonicity", ok, msg.str()};
  }

  SuiteResult local() {
    const Trajectory& t = trajectory();
    const int k = c_.sim.k;
    std::vector<double> radii = c_.local.radii;
    std::sort(radii.begin(), radii.end());
    GridPtr grid = t.snapshots.front().grid_ptr();
    // Fixed field for the radius ladder: a quarter of the way through the run,
    // since symmetric data has M = 0 at t = 0.
    const std::size_t fixed = t.snapshots.size() / 4;
    const SpectralField& u0 = t.snapshots[fixed];

    bool ok = true;
    std::ostringstream msg;
    json rows = json::array();
    std::vector<double> sup_ratio, neg;
    std::vector<ErrorBudget> budgets;
    for (double R : radii) {
      const double R1 = std::pow(R, 0.9);
      const WeightFamily w = build_weights(R, R1, grid);
      const double mf = interaction_M(u0, w, k);
      const double md = interaction_M_direct(u0, w, k);
      const double rel = std::abs(mf - md) / std::max(std::abs(md), 1e-300);
      const DMReport rep = dM_report(t, w, k);
      json row = {{"R", R},
                  {"R1", R1},
                  {"M_fft", mf},
                  {"M_direct", md},
                  {"M_rel_diff", rel},
                  {"sup_abs_M", rep.sup_abs_M},
                  {"sup_abs_M_over_R", rep.sup_abs_M / R},
                  {"min_residual", rep.min_residual},
                  {"negative_part", rep.negative_part},
                  {"sup_d3phi", w.sup_d3phi}};
      json entries = json::array();
      for (const auto& e : rep.entries)
        entries.push_back({{"t", e.t},
                           {"M", e.M},
                           {"dM_fd", e.dM_fd},
                           {"main_term", e.main_term},
                           {"residual", e.residual}});
      row["entries"] = entries;
      if (rel > c_.local.fft_tol) {
        ok = false;
        msg << "FFT/direct mismatch at R=" << R << "; ";
      }
      if (c_.local.budget) {
        const ErrorBudget b = error_budget(u0, w, k);
        row["error_budget"] = {{"E1", b.E1}, {"E2", b.E2}, {"E3", b.E3}, {"T1", b.T1},
                         {"T2", b.T2}, {"T3", b.T3}, {"T4", b.T4},
                         {"E2_quad_err", b.E2_quad_err}, {"T1_quad_err", b.T1_quad_err},
                         {"T2_quad_err", b.T2_quad_err}, {"T1_spectral", b.T1_spectral},
                         {"T2_spectral", b.T2_spectral}};
        budgets.push_back(b);
      }
      sup_ratio.push_back(rep.sup_abs_M / R);
      neg.push_back(rep.negative_part);
      rows.push_back(row);
    }
    for (std::size_t i = 1; i < radii.size(); ++i) {
      if (sup_ratio[i] > c_.local.sup_slack * sup_ratio[0]) {
        ok = false;
        msg << "sup|M|/R grows at R=" << radii[i] << "; ";
      }
      if (neg[i] > neg[i - 1]) {
        ok = false;
        msg << "residual negative part grows at R=" << radii[i] << "; ";
      }
      if (!budgets.empty()) {
        const ErrorBudget& a = budgets[i - 1];
        const ErrorBudget& b = budgets[i];
        const double pa[] = {a.E1, a.E2, a.E3, a.T1, a.T2, a.T3, a.T4};
        const double pb[] = {b.E1, b.E2, b.E3, b.T1, b.T2, b.T3, b.T4};
        const char* names[] = {"E1", "E2", "E3", "T1", "T2", "T3", "T4"};
        for (int j = 0; j < 7; ++j)
          if (!(std::abs(pb[j]) < std::abs(pa[j]))) {
            ok = false;
            msg << names[j] << " does not decrease at R=" << radii[i] << "; ";
          }
      }
    }
    write_json(out_ / "local.json",
               {{"k", k}, {"field_t", t.times[fixed]}, {"radii", rows}, {"passed", ok}});
    return {"local", ok, ok ? "all radius checks hold" : msg.str()};
  }

  SuiteResult positivity() {
    const auto& o = c_.positivity;
    const int k = c_.sim.k;
    const ChiSpec chi{o.chi_beta, o.chi_n};
    MinimizeOptions mo;
    mo.restarts = o.restarts;
    mo.tol = o.tol;
    mo.max_iter = o.max_iter;
    mo.seed = c_.seed;
    mo.precondition = o.precondition;
    mo.workers = c_.workers;

    bool ok = true;
    std::ostringstream msg;
    double f_min = std::numeric_limits<double>::infinity();
    json ext = json::array();
    json best = nullptr;
    double best_f = std::numeric_limits<double>::infinity();
    for (std::size_t n : o.N_modes) {
      const SphereProblem p = build_problem(n, k, chi);
      const ExtremizerReport r = minimize_sphere(p, mo);
      f_min = std::min(f_min, r.f_value);
      json row = {{"N_modes", n},
                  {"f_min", r.f_value},
                  {"lambda", r.lambda},
                  {"converged", r.converged},
                  {"converged_restarts", r.converged_restarts},
                  {"best_restart", r.best_restart},
                  {"iterations", r.iterations},
                  {"residuals",
                   {{"lagrange", r.lagrange_residual},
                    {"pohozaev1", r.pohozaev1_residual},
                    {"pohozaev2", r.pohozaev2_residual},
                    {"pohozaev2_scale", r.pohozaev2_scale}}}};
      ext.push_back(row);
      if (r.converged && r.f_value < best_f) {
        best_f = r.f_value;
        best = row;
      }
      if (!r.converged) {
        ok = false;
        msg << "no restart converged at N_modes=" << n << "; ";
        continue;
      }
      if (r.pohozaev1_residual > o.identity_tol * std::abs(r.lambda) ||
          r.pohozaev2_residual > o.identity_tol * r.pohozaev2_scale) {
        ok = false;
        msg << "identity residual too large at N_modes=" << n << "; ";
      }
    }
    const SphereProblem pf = build_problem(o.falsifier_N, k, chi);
    const FalsifierResult fr = random_falsifier(pf, o.samples, c_.seed, mo);
    f_min = std::min(f_min, fr.f_min);
    if (f_min < o.f_floor) {
      ok = false;
      msg << "minimum " << f_min << " below " << o.f_floor << "; ";
    }
    write_json(out_ / "positivity.json",
               {{"k", k},
                {"alpha", 0.5 - 2.0 / (k + 2)},
                {"N_modes", o.N_modes},
                {"chi_spec", chi.describe()},
                {"restarts", o.restarts},
                {"samples", o.samples},
                {"f_min", f_min},
                {"lambda", best.is_null() ? json(nullptr) : best["lambda"]},
                {"residuals", best.is_null() ? json(nullptr) : best["residuals"]},
                {"extremizers", ext},
                {"falsifier",
                 {{"N_modes", o.falsifier_N},
                  {"min_sampled", fr.min_sampled},
                  {"min_polished", fr.min_polished},
                  {"f_min", fr.f_min}}},
                {"passed", ok}});
    if (ok) msg << "minimum " << f_min;
    return {"positivity", ok, msg.str()};
  }

  SuiteResult norms() {
    const auto& o = c_.norms;
    const int k = c_.sim.k;
    GridPtr g = make_grid(o.N, o.L, c_.sim.pad);
    const DyadicDecomposition d =
        make_decomposition(g, o.J, o.C_k > 0 ? o.C_k : default_diagonal_width(k));
    std::mt19937_64 rng(c_.seed);
    double worst_exact = 0.0, worst_grouped = 0.0;
    std::vector<SpaceTimeArray> ensemble;
    bool window_ok = true;
    for (std::size_t i = 0; i < o.samples; ++i) {
      SpectralField u = random_field(g, o.max_mode, 1.0, rng);
      u *= 0.5 / sobolev_norm(u, 0.5, false);
      const Paraproduct pp = paraproduct_decompose(u, d, k);
      const double fn = std::sqrt(integrate_product(pp.F, pp.F));
      const SpectralField e1 = pp.F + pp.pi_part - pp.g_part;
      const SpectralField e2 = pp.F + pp.pi_part - pp.g_grouped;
      worst_exact = std::max(worst_exact, std::sqrt(integrate_product(e1, e1)) / fn);
      worst_grouped = std::max(worst_grouped, std::sqrt(integrate_product(e2, e2)) / fn);

      SpaceTimeArray a;
      a.t0 = 0.0;
      a.dt_out = 0.25;
      for (int s = 0; s < 8; ++s) a.snapshots.push_back(linear_propagate(u, a.dt_out * s));
      const double full = x_norm(a, d, 0.5 - 1.0 / k, o.eps);
      const double part = x_norm(a.window(0, 4), d, 0.5 - 1.0 / k, o.eps);
      if (part > full * (1.0 + 1e-12)) window_ok = false;
      ensemble.push_back(std::move(a));
    }
    const EstimateReport er = nonlinear_estimate_ratios(ensemble, d, k, o.eps);
    const bool ok = worst_exact <= o.identity_tol && worst_grouped <= o.identity_tol && window_ok;
    write_json(out_ / "norms.json", {{"k", k},
                                     {"samples", o.samples},
                                     {"J", d.J},
                                     {"C_k", d.C_k},
                                     {"eps", o.eps},
                                     {"identity_rel_residual", worst_exact},
                                     {"grouped_rel_residual", worst_grouped},
                                     {"window_monotone", window_ok},
                                     {"pi_ratio_max", er.pi_max},
                                     {"pi_ratio_median", er.pi_median},
                                     {"g_ratio_max", er.g_max},
                                     {"g_ratio_median", er.g_median},
                                     {"skipped", er.skipped},
                                     {"passed", ok}});
    std::ostringstream msg;
    msg << "identity " << worst_exact << ", grouped " << worst_grouped;
    return {"norms", ok, msg.str()};
  }

  const RunConfig& c_;
  fs::path out_;
  std::optional<Trajectory> traj_;
};

}  // namespace

RunResult run(const RunConfig& c, const std::string& out_dir) {
  return Runner(c, out_dir).execute();
}

int run_sweep(const RunConfig& c, const std::string& out_dir, unsigned workers) {
  if (c.sweep.empty()) throw InvalidArgument("field 'sweep': no override objects given");
  const std::size_t n = c.sweep.size();
  std::vector<RunConfig> cfgs;
  for (const auto& o : c.sweep) {
    RunConfig r = apply_override(c, o);
    r.suites = c.suites;
    r.workers = 1;
    cfgs.push_back(std::move(r));
  }
  std::vector<int> status(n, kPass);
  std::vector<std::string> errors(n);
  auto name = [](std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "run_%03zu", i);
    return std::string(buf);
  };
  const unsigned w = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < w; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += w) {
        try {
          status[i] = run(cfgs[i], (fs::path(out_dir) / name(i)).string()).status;
        } catch (const std::exception& e) {
          status[i] = kAborted;
          errors[i] = e.what();
        }
      }
    });
  for (auto& th : pool) th.join();

  json runs = json::array();
  int worst = kPass;
  for (std::size_t i = 0; i < n; ++i) {
    json r = {{"run", name(i)}, {"override", json::parse(c.sweep[i])}, {"status", status[i]}};
    if (!errors[i].empty()) r["error"] = errors[i];
    runs.push_back(r);
    worst = std::max(worst, status[i]);
  }
  fs::create_directories(out_dir);
  write_json(fs::path(out_dir) / "sweep.json", {{"status", worst}, {"runs", runs}});
  return worst;
}

std::string suite_for_command(const std::string& command) {
  if (command == "simulate") return "conservation";
  if (command == "verify-monotonicity") return "monotonicity";
  if (command == "verify-local") return "local";
  if (command == "verify-positivity") return "positivity";
  if (command == "verify-norms") return "norms";
  throw InvalidArgument("unknown command '" + command + "'");
}

}  // namespace gbo
