#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gbo/field.hpp"

namespace gbo {

/// chi^2(x) = 1 - beta (1 - cos(n x)) / 2 on [0, 2 pi).  beta = 0 is chi = 1.
struct ChiSpec {
  double beta = 0.0;
  int n = 1;
  std::string describe() const;
};

/// Sphere-constrained problem on H_N = {mean zero, modes 1 <= |m| <= N_modes}
/// with constraint ||u||_{dot H^alpha} = 1, alpha = 1/2 - 2/(k+2).
struct SphereProblem {
  std::size_t N_modes = 0;
  int k = 6;
  double alpha = 0.0;
  ChiSpec chi;
  GridPtr grid;                ///< P points on [0, 2 pi), P > (k+2) N_modes + n
  std::vector<double> chi2;    ///< chi^2 at the grid points
  std::vector<double> d2chi2;  ///< (chi^2)''
};

SphereProblem build_problem(std::size_t N_modes, int k, const ChiSpec& chi = {});

/// Throws InvalidArgument unless u is real, mean zero, band-limited and nonzero.
void require_feasible(const SpectralField& u, const SphereProblem& p);

/// f(u) = int chi^2 u^{k+1} D u.
double eval_f(const SpectralField& u, const SphereProblem& p);

struct FGrad {
  double value = 0.0;
  SpectralField grad;  ///< Q_{<=N}[(k+1) chi^2 u^k Du + D(chi^2 u^{k+1})]
};
FGrad eval_f_grad(const SpectralField& u, const SphereProblem& p);

double hdot_alpha(const SpectralField& u, const SphereProblem& p);
/// u / ||u||_{dot H^alpha}
SpectralField retract(const SpectralField& u, const SphereProblem& p);

/// Random feasible point with coefficients ~ normal / |m|^decay, on the sphere.
SpectralField random_point(const SphereProblem& p, std::mt19937_64& rng, double decay);

struct Residuals {
  double lambda = 0.0;
  double lagrange = 0.0;     ///< ||grad f - lambda D^{2 alpha} u||_{L^2}
  double pohozaev1 = 0.0;    ///< |lambda - (k+2) f|
  double pohozaev2 = 0.0;    ///< second identity, absolute
  double pohozaev2_scale = 0.0;
};

/// Residuals at an arbitrary feasible point; lambda by least squares.
Residuals evaluate_residuals(const SpectralField& u, const SphereProblem& p);

struct ExtremizerReport {
  SpectralField u0;
  double f_value = 0.0;
  double lambda = 0.0;
  double lagrange_residual = 0.0;
  double pohozaev1_residual = 0.0;
  double pohozaev2_residual = 0.0;
  double pohozaev2_scale = 0.0;
  double tangential_grad = 0.0;
  int restarts = 0;
  int converged_restarts = 0;
  int best_restart = -1;
  int iterations = 0;
  bool converged = false;
};

struct MinimizeOptions {
  int restarts = 32;
  double tol = 1e-8;
  int max_iter = 20000;
  std::uint64_t seed = 1;
  bool precondition = false;  ///< steepest descent in the dot H^alpha metric
  unsigned workers = 1;
};

/// Projected gradient descent from one point: tangential projection against
/// D^{2 alpha} u, Barzilai-Borwein trial step, Armijo backtracking by 0.5,
/// retraction by normalization.
ExtremizerReport minimize_from(const SpectralField& start, const SphereProblem& p,
                               const MinimizeOptions& opt);

/// Best result over restarts from |xi|^{-1}-colored random points.  Ties go to
/// the lowest restart id.
ExtremizerReport minimize_sphere(const SphereProblem& p, const MinimizeOptions& opt = {});

/// Residuals of a converged report; throws if it did not converge.
Residuals lagrange_pohozaev_residuals(const ExtremizerReport& rep, const SphereProblem& p);

struct FalsifierResult {
  std::size_t samples = 0;
  double min_sampled = 0.0;
  double min_polished = 0.0;
  double f_min = 0.0;
};

/// Minimum of f over points uniform on the dot H^alpha sphere, followed by
/// local descent from the 10 lowest.
FalsifierResult random_falsifier(const SphereProblem& p, std::size_t samples, std::uint64_t seed,
                                 const MinimizeOptions& polish = {});

/// ||u||_{L^{k+2}}^{k+2} / (||u||^2_{dot H^{alpha+1/2}} ||u||^k_{dot H^alpha})
double embedding_ratio_of(const SpectralField& u, const SphereProblem& p);
/// Max over the ensemble; zero vectors are skipped.
double embedding_ratio(const std::vector<SpectralField>& ensemble, const SphereProblem& p);

}  // namespace gbo
