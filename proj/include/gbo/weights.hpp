#pragma once

#include <vector>

#include "gbo/grid.hpp"

namespace gbo {

/// d-th derivative (d = 0..3) of the even cutoff: 1 on |x| <= R, 0 on
/// |x| >= R + R1, with a C-infinity smoothstep made from exp(-1/(1-v^2)) in
/// between.
double cutoff(double x, double R, double R1, int d = 0);

/// Cutoff chi_R and the odd weight Phi(x) = int_0^x (chi^2 * chi^2)(s) ds / R,
/// sampled at the signed grid offsets of DFT index order (index m carries
/// offset m dx for m < N/2 and (m - N) dx otherwise).
struct WeightFamily {
  GridPtr grid;
  double R = 0.0;
  double R1 = 0.0;
  std::vector<double> chi, dchi, d2chi, d3chi;
  std::vector<double> phi, dphi, d2phi, d3phi;
  /// Sup norms below are maxima over the grid samples.
  double sup_dchi = 0.0, sup_d2chi = 0.0, sup_d3chi = 0.0;
  double sup_d2chi2 = 0.0;  ///< ||(chi^2)''||_inf
  double sup_d3phi = 0.0;

  double offset(std::size_t m) const;
};

/// Requires R1 < R and R + R1 < L/4.
WeightFamily build_weights(double R, double R1, GridPtr grid);

/// Circular convolution (g * f)(s) = sum_y g(s - y) f(y) dx, with g sampled at
/// signed offsets and f at grid points.
std::vector<double> convolve(const TorusGrid& g, const std::vector<double>& kernel,
                             const std::vector<double>& f);

}  // namespace gbo
