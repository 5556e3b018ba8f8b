#pragma once

#include <cmath>
#include <random>

namespace gbo {

template <class Rng>
SpectralField random_field(GridPtr grid, std::size_t max_mode, double decay, Rng& rng,
                           bool with_mean) {
  SpectralField f(grid);
  const std::size_t n = grid->size();
  const std::size_t top = std::min(max_mode, n / 2 - 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  if (with_mean) f[0] = normal(rng);
  for (std::size_t m = 1; m <= top; ++m) {
    const double amp = std::pow(static_cast<double>(m), -decay);
    const double re = normal(rng) * amp;
    const double im = normal(rng) * amp;
    f[m] = cplx(re, im);
    f[n - m] = cplx(re, -im);
  }
  return f;
}

}  // namespace gbo
