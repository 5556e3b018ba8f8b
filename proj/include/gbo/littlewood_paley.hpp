#pragma once

#include <limits>
#include <vector>

#include "gbo/field.hpp"

namespace gbo {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Sharp dyadic bands {2^j <= |xi| < 2^(j+1)} on a grid.  The mean mode
/// belongs to no band but counts as "below" every band.
struct DyadicDecomposition {
  GridPtr grid;
  int J = 5;           ///< low-high separation: u_{<<j} = Q_{<j-J} u
  int C_k = 4;         ///< diagonal width used by the grouped remainder
  int j_min = 0;
  int j_max = 0;
  std::vector<int> band;  ///< band index per DFT index (unused at index 0)

  int count() const { return j_max - j_min + 1; }
};

/// C_k default: ceil(log2(k + 2)) + 1.
int default_diagonal_width(int k);
DyadicDecomposition make_decomposition(GridPtr grid, int J = 5, int C_k = 4);

enum class BandMode { At, Below, WellBelow, Near };

/// Q_j, Q_{<j}, Q_{<j-J} or sum_{|r-j|<=J} Q_r applied to f.  Bands outside
/// the grid range give an empty (zero) field.
SpectralField dyadic_project(const SpectralField& f, const DyadicDecomposition& d, int j,
                             BandMode mode);

/// Uniformly sampled space-time function u(t_i, x), t_i = t0 + i * dt_out.
struct SpaceTimeArray {
  std::vector<SpectralField> snapshots;
  double t0 = 0.0;
  double dt_out = 1.0;

  /// Sub-array of snapshots [first, last).
  SpaceTimeArray window(std::size_t first, std::size_t last) const;
};

/// Validates a space-time array (nonempty, shared grid, dt_out > 0).
void check_array(const SpaceTimeArray& a);

/// ||G||_{L^p_x L^q_t} for grid samples G[i][x]; L^q_t uses weight dt_out per
/// sample, L^inf is the max over samples.
double mixed_norm(const std::vector<std::vector<double>>& samples, double dx, double dt, double p,
                  double q);

/// ( sum_j [2^{js} ||Q_j a||_{L^p_x L^q_t}]^r )^{1/r}
double besov_spacetime_norm(const SpaceTimeArray& a, const DyadicDecomposition& d, double s,
                            double p, double q, double r);

/// S^{s,theta} = B^{s + (3 theta - 1)/4, 2}_{4/(1-theta)}(L^{2/theta}).
double strichartz_norm(const SpaceTimeArray& a, const DyadicDecomposition& d, double s,
                       double theta);
/// N^s = B^{s - 1/2, 2}_1(L^2).
double dual_norm(const SpaceTimeArray& a, const DyadicDecomposition& d, double s);
/// X^s = S^{s,eps} + S^{s,1} (intersection norm realized as a sum).
double x_norm(const SpaceTimeArray& a, const DyadicDecomposition& d, double s, double eps);
/// ||a||_{L^k_x L^inf_t}.
double lk_linf(const SpaceTimeArray& a, double k);

struct Paraproduct {
  SpectralField F;           ///< -d_x(u^{k+1})
  SpectralField pi_part;     ///< sum_j d_x Q_j(u_{<<j}^k u_{~j})
  SpectralField g_part;      ///< F + pi_part
  SpectralField g_grouped;   ///< sum_j [pi_j - d_x Q_j sum_{r >= j - C_k} u_r P_r]
  bool truncated = false;
};

/// pi_j(psi, phi) = d_x Q_j(psi_{<<j}^k phi_{~j}) summed over all bands.
SpectralField paraproduct_pi(const SpectralField& psi, const SpectralField& phi,
                             const DyadicDecomposition& d, int k);
Paraproduct paraproduct_decompose(const SpectralField& u, const DyadicDecomposition& d, int k);

struct EstimateSample {
  double pi_ratio = 0.0;  ///< ||pi(u,u)||_{N^{s_k}} / (||u||^k_{L^k L^inf} ||u||_{X^{s_k}})
  double g_ratio = 0.0;   ///< ||g(u)||_{N^{s_k}} / (||u||^{k-1}_{L^k L^inf} ||u||^2_{X^{s_k}})
};

struct EstimateReport {
  int k = 0;
  double eps = 0.1;
  std::vector<EstimateSample> samples;
  std::size_t skipped = 0;
  double pi_max = 0.0, pi_median = 0.0;
  double g_max = 0.0, g_median = 0.0;
};

EstimateReport nonlinear_estimate_ratios(const std::vector<SpaceTimeArray>& ensemble,
                                         const DyadicDecomposition& d, int k, double eps = 0.1);

}  // namespace gbo
