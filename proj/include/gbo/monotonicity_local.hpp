#pragma once

#include <span>
#include <string>
#include <vector>

#include "gbo/diagnostics.hpp"
#include "gbo/field.hpp"
#include "gbo/weights.hpp"

namespace gbo {

/// M = sum_{x,y} Phi(y - x) rho(x) e(y) dx dy on the collocation grid,
/// evaluated as a circular convolution.
double interaction_M(const SpectralField& u, const WeightFamily& w, int k);
/// Same sum evaluated pair by pair, O(N^2).
double interaction_M_direct(const SpectralField& u, const WeightFamily& w, int k);

/// k^2/(2(k+2)^2) int_s (int (chi_s u)^2)^2 (int (chi_s u)^{k+2})^2 ds/R.
double dM_main_term(const SpectralField& u, const WeightFamily& w, int k);

struct DMEntry {
  double t = 0.0;
  double M = 0.0;
  double dM_fd = 0.0;
  double main_term = 0.0;
  double residual = 0.0;
};

struct DMReport {
  double R = 0.0, R1 = 0.0;
  double sup_abs_M = 0.0;
  std::vector<DMEntry> entries;  ///< interior records only
  double min_residual = 0.0;
  double negative_part = 0.0;    ///< max(0, -min_residual)
};

DMReport dM_report(const Trajectory& traj, const WeightFamily& w, int k);

struct BudgetOptions {
  int r_nodes = 64;          ///< midpoint nodes for int_0^1 dr
  int stride = 4;            ///< quadrature stride of the commutator kernels
  double support_tol = 1e-13;  ///< |u| below this fraction of sup|u| is treated as zero
};

/// Energy-side terms E1..E3 are int_x rho(x) int_y E_i(x, y); mass-side
/// terms are T_i = || int_y E~_i(s, y) ||_{L^2(ds/R)}.
struct ErrorBudget {
  double R = 0.0, R1 = 0.0;
  double E1 = 0.0, E2 = 0.0, E3 = 0.0;
  double T1 = 0.0, T2 = 0.0, T3 = 0.0, T4 = 0.0;
  int stride = 0;
  /// |value(stride) - value(2 stride)| for the kernel-quadrature terms.
  double E2_quad_err = 0.0, T1_quad_err = 0.0, T2_quad_err = 0.0;
  /// T1, T2 recomputed through -int Q (v H u + u H v) with the periodic
  /// Hilbert transform at full resolution.
  double T1_spectral = 0.0, T2_spectral = 0.0;
};

ErrorBudget error_budget(const SpectralField& u, const WeightFamily& w, int k,
                         const BudgetOptions& opt = {});

/// E1 by direct double sum, O(N^2).
double error_E1_direct(const SpectralField& u, const WeightFamily& w);

/// (|int g f H f_x| + |int g f^{k+2}|) / (H (||f||^2_{H^{1/2}} + ||f||^{k+2}_{H^{1/2}}))
/// with g sampled on the grid and H its W^{1,inf} norm.
double localization_ratio(const SpectralField& f, std::span<const double> g, double H, int k);

/// Kernel K(y_i, z_j) on a uniform product grid of spacing h, row-major in y.
struct SampledKernel {
  std::size_t ny = 0, nz = 0;
  double h = 1.0;
  std::vector<double> values;
  double at(std::size_t i, std::size_t j) const { return values[i * nz + j]; }
};

struct SchurResult {
  double ratio = 0.0;
  bool admissible = true;
  std::string violation;  ///< which declared bound failed
};

/// |sum K u v h^2| / (H sqrt(R1 R2) ||u|| ||v||), after checking the height
/// and support bounds of K.
SchurResult schur_check(const SampledKernel& K, std::span<const double> u,
                        std::span<const double> v, double H, double R1, double R2);

}  // namespace gbo
