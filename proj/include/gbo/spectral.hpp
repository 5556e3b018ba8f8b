#pragma once

#include <complex>
#include <vector>

#include "gbo/field.hpp"

namespace gbo {

enum class Parity { Even, Odd, None };

/// A Fourier multiplier: one complex symbol value per grid frequency.
/// Odd symbols are forced to vanish at the Nyquist index.
struct Multiplier {
  std::vector<cplx> symbol;
  Parity parity = Parity::None;
};

Multiplier hilbert_symbol(const TorusGrid& g);
/// |xi|^s with value 0 at xi = 0.
Multiplier frac_deriv_symbol(const TorusGrid& g, double s);
/// i xi
Multiplier derivative_symbol(const TorusGrid& g);
/// Discrete H d/dx: |xi| away from Nyquist, 0 at Nyquist.
Multiplier hilbert_derivative_symbol(const TorusGrid& g);
/// exp(-i xi |xi| t).  The Nyquist mode has H d_xx = 0 on the grid, so it is
/// left untouched.
Multiplier propagator_symbol(const TorusGrid& g, double t);

SpectralField apply(const Multiplier& m, const SpectralField& f);

SpectralField hilbert(const SpectralField& f);
SpectralField frac_deriv(const SpectralField& f, double s);
SpectralField derivative(const SpectralField& f);
/// H f_x
SpectralField hilbert_derivative(const SpectralField& f);
SpectralField linear_propagate(const SpectralField& f, double t);

struct PowerResult {
  SpectralField field;
  /// True when pad_factor * N < ceil((p + 1) / 2) * N, i.e. aliasing may
  /// contaminate the retained band.
  bool truncated = false;
};

/// Grid-band Fourier coefficients of f^p, computed on the padded grid.
PowerResult dealiased_power(const SpectralField& f, int p);
/// Minimum pad factor for an alias-free p-th power.
std::size_t required_pad(int p);

/// Integral over the torus of the band-limited interpolant: L * coeff(0).
double integrate(const SpectralField& f);

/// ||<D>^s f||_{L2} or, if homogeneous, ||D^s f||_{L2} (mean excluded).
double sobolev_norm(const SpectralField& f, double s, bool homogeneous);

/// Pointwise product integral of several fields, evaluated on the padded grid.
double integrate_product(const SpectralField& a, const SpectralField& b);

/// Random real field with modes 1 <= |m| <= max_mode (Nyquist excluded),
/// Gaussian coefficients with amplitude ~ |m|^(-decay).
template <class Rng>
SpectralField random_field(GridPtr grid, std::size_t max_mode, double decay, Rng& rng,
                           bool with_mean = false);

}  // namespace gbo

#include "gbo/detail/random_field.ipp"
