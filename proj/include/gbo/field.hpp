#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "gbo/grid.hpp"

namespace gbo {

using cplx = std::complex<double>;

/// A real field on a TorusGrid, stored by its Fourier coefficients
/// coeff(xi) = (1/L) * integral f(x) exp(-i xi x) dx  (DFT index order).
class SpectralField {
 public:
  SpectralField() = default;
  /// Zero field.
  explicit SpectralField(GridPtr grid);
  SpectralField(GridPtr grid, std::vector<cplx> coeffs);

  /// Samples f(x_m), m = 0..N-1.
  static SpectralField from_samples(GridPtr grid, std::span<const double> samples);
  static SpectralField from_function(GridPtr grid, const std::function<double(double)>& f);

  const TorusGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return coeffs_.size(); }

  const std::vector<cplx>& coeffs() const { return coeffs_; }
  std::vector<cplx>& coeffs() { return coeffs_; }
  cplx operator[](std::size_t m) const { return coeffs_[m]; }
  cplx& operator[](std::size_t m) { return coeffs_[m]; }

  cplx mean() const { return coeffs_.empty() ? cplx{} : coeffs_[0]; }

  /// Values on the collocation grid.
  std::vector<double> samples() const;
  /// Values of the trigonometric interpolant on a uniform grid of m >= N
  /// points.  The Nyquist coefficient is split symmetrically.
  std::vector<double> fine_samples(std::size_t m) const;
  /// Inverse of fine_samples: truncates the spectrum of m fine samples to the
  /// grid band, folding the +/- N/2 pair into the Nyquist slot.
  static SpectralField from_fine_samples(GridPtr grid, std::span<const double> fine);

  /// Largest deviation from Hermitian symmetry (0 for an exactly real field).
  double hermitian_defect() const;
  /// Projects onto real fields: symmetrizes coefficients, Nyquist made real.
  void enforce_real();
  bool all_finite() const;

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double a);

 private:
  GridPtr grid_;
  std::vector<cplx> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double a, SpectralField f);

/// Throws InvalidArgument when grids differ.
void require_same_grid(const SpectralField& a, const SpectralField& b);

/// Discrete L2 norm of the coefficient difference scaled to physical units:
/// sqrt(L * sum |a_m - b_m|^2) = ||a - b||_{L2}.
double l2_distance(const SpectralField& a, const SpectralField& b);

}  // namespace gbo
