#include "gbo/spectral.hpp"

#include <cmath>

#include "gbo/error.hpp"

namespace gbo {
namespace {

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

Multiplier build(const TorusGrid& g, Parity parity, auto&& fn) {
  Multiplier m;
  m.parity = parity;
  m.symbol.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) m.symbol[i] = fn(g.xi(i));
  if (parity == Parity::Odd) m.symbol[g.nyquist()] = 0.0;
  return m;
}

}  // namespace

Multiplier hilbert_symbol(const TorusGrid& g) {
  return build(g, Parity::Odd, [](double xi) { return cplx(0.0, -sgn(xi)); });
}

Multiplier frac_deriv_symbol(const TorusGrid& g, double s) {
  return build(g, Parity::Even, [s](double xi) {
    return xi == 0.0 ? cplx{} : cplx(std::pow(std::abs(xi), s), 0.0);
  });
}

Multiplier derivative_symbol(const TorusGrid& g) {
  return build(g, Parity::Odd, [](double xi) { return cplx(0.0, xi); });
}

Multiplier hilbert_derivative_symbol(const TorusGrid& g) {
  Multiplier m = build(g, Parity::Even, [](double xi) { return cplx(std::abs(xi), 0.0); });
  m.symbol[g.nyquist()] = 0.0;
  return m;
}

Multiplier propagator_symbol(const TorusGrid& g, double t) {
  Multiplier m = build(g, Parity::None, [t](double xi) {
    const double phase = -xi * std::abs(xi) * t;
    return cplx(std::cos(phase), std::sin(phase));
  });
  m.symbol[g.nyquist()] = 1.0;
  return m;
}

SpectralField apply(const Multiplier& m, const SpectralField& f) {
  if (m.symbol.size() != f.size()) throw InvalidArgument("multiplier size does not match field");
  SpectralField out = f;
  for (std::size_t i = 0; i < f.size(); ++i) out[i] *= m.symbol[i];
  return out;
}

SpectralField hilbert(const SpectralField& f) { return apply(hilbert_symbol(f.grid()), f); }

SpectralField frac_deriv(const SpectralField& f, double s) {
  if (s < -0.5) throw InvalidArgument("fractional derivative order must be >= -1/2");
  return apply(frac_deriv_symbol(f.grid(), s), f);
}

SpectralField derivative(const SpectralField& f) { return apply(derivative_symbol(f.grid()), f); }

SpectralField hilbert_derivative(const SpectralField& f) {
  return apply(hilbert_derivative_symbol(f.grid()), f);
}

SpectralField linear_propagate(const SpectralField& f, double t) {
  return apply(propagator_symbol(f.grid(), t), f);
}

std::size_t required_pad(int p) { return static_cast<std::size_t>((p + 2) / 2); }

PowerResult dealiased_power(const SpectralField& f, int p) {
  if (p < 1) throw InvalidArgument("power must be >= 1");
  if (p == 1) return {f, false};
  const TorusGrid& g = f.grid();
  const std::size_t pad = g.pad_factor();
  const std::size_t m = pad * g.size();
  std::vector<double> v = f.fine_samples(m);
  for (double& x : v) {
    const double base = x;
    double acc = base;
    for (int i = 1; i < p; ++i) acc *= base;
    x = acc;
  }
  return {SpectralField::from_fine_samples(f.grid_ptr(), v), pad < required_pad(p)};
}

double integrate(const SpectralField& f) { return f.grid().length() * f.mean().real(); }

double sobolev_norm(const SpectralField& f, double s, bool homogeneous) {
  const TorusGrid& g = f.grid();
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double xi = g.xi(i);
    double w;
    if (homogeneous) {
      if (i == 0) continue;
      w = std::pow(std::abs(xi), 2.0 * s);
    } else {
      w = std::pow(1.0 + xi * xi, s);
    }
    // The real interpolant carries the Nyquist coefficient as c*cos, whose
    // square integrates to half the weight of a complex mode.
    if (i == g.nyquist()) w *= 0.5;
    acc += w * std::norm(f[i]);
  }
  return std::sqrt(g.length() * acc);
}

double integrate_product(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a, b);
  // Parseval: integral of a*b = L * sum a_m conj(b_m) for real fields.
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double w = i == a.grid().nyquist() ? 0.5 : 1.0;
    acc += w * (a[i] * std::conj(b[i])).real();
  }
  return a.grid().length() * acc;
}

}  // namespace gbo
