#include "gbo/weights.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>

#include "gbo/error.hpp"
#include "gbo/fft.hpp"

namespace gbo {
namespace {

using cplx = std::complex<double>;

// Bump on [0, 1] and its first two derivatives.
double bump(double tau, int d) {
  if (tau <= 0.0 || tau >= 1.0) return 0.0;
  const double v = 2.0 * tau - 1.0;
  const double w = 1.0 - v * v;
  const double b = std::exp(-1.0 / w);
  if (d == 0) return b;
  const double g1 = -4.0 * v / (w * w);
  if (d == 1) return b * g1;
  const double g2 = 2.0 * (-4.0 / (w * w) - 16.0 * v * v / (w * w * w));
  return b * (g1 * g1 + g2);
}

double bump_integral(double t) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate([](double s) { return bump(s, 0); }, 0.0, t, 8,
                                              1e-15);
}

const double kBumpMass = bump_integral(1.0);

double sup_abs(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

}  // namespace

double cutoff(double x, double R, double R1, int d) {
  const double a = std::abs(x);
  if (a >= R + R1) return 0.0;
  if (a <= R) return d == 0 ? 1.0 : 0.0;
  const double tau = (a - R) / R1;
  const double sgn = x < 0.0 ? -1.0 : 1.0;
  switch (d) {
    case 0: return 1.0 - bump_integral(tau) / kBumpMass;
    case 1: return -sgn * bump(tau, 0) / (kBumpMass * R1);
    case 2: return -bump(tau, 1) / (kBumpMass * R1 * R1);
    case 3: return -sgn * bump(tau, 2) / (kBumpMass * R1 * R1 * R1);
    default: throw InvalidArgument("cutoff derivative order must be 0..3");
  }
}

double WeightFamily::offset(std::size_t m) const {
  const std::size_t n = grid->size();
  const double dx = grid->spacing();
  return m < n / 2 ? dx * static_cast<double>(m)
                   : dx * (static_cast<double>(m) - static_cast<double>(n));
}

std::vector<double> convolve(const TorusGrid& g, const std::vector<double>& kernel,
                             const std::vector<double>& f) {
  const std::size_t n = g.size();
  if (kernel.size() != n || f.size() != n) throw InvalidArgument("convolution size mismatch");
  std::vector<cplx> a(kernel.begin(), kernel.end()), b(f.begin(), f.end()), ha(n), hb(n);
  fft::forward(a, ha);
  fft::forward(b, hb);
  for (std::size_t m = 0; m < n; ++m) ha[m] *= hb[m];
  fft::inverse(ha, a);
  std::vector<double> out(n);
  for (std::size_t m = 0; m < n; ++m) out[m] = g.length() * a[m].real();
  return out;
}

WeightFamily build_weights(double R, double R1, GridPtr grid) {
  if (!(R > 0.0) || !(R1 > 0.0) || !(R1 < R)) throw InvalidArgument("weights need 0 < R1 < R");
  if (!(R + R1 < 0.25 * grid->length()))
    throw InvalidArgument("weights too large for domain: need R + R1 < L/4");
  WeightFamily w;
  w.grid = grid;
  w.R = R;
  w.R1 = R1;
  const std::size_t n = grid->size();
  w.chi.resize(n);
  w.dchi.resize(n);
  w.d2chi.resize(n);
  w.d3chi.resize(n);
  std::vector<double> chi2(n), dchi2(n), d2chi2(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double x = w.offset(m);
    w.chi[m] = cutoff(x, R, R1, 0);
    w.dchi[m] = cutoff(x, R, R1, 1);
    w.d2chi[m] = cutoff(x, R, R1, 2);
    w.d3chi[m] = cutoff(x, R, R1, 3);
    chi2[m] = w.chi[m] * w.chi[m];
    dchi2[m] = 2.0 * w.chi[m] * w.dchi[m];
    d2chi2[m] = 2.0 * (w.dchi[m] * w.dchi[m] + w.chi[m] * w.d2chi[m]);
  }
  const TorusGrid& g = *grid;
  w.dphi = convolve(g, chi2, chi2);
  w.d2phi = convolve(g, dchi2, chi2);
  w.d3phi = convolve(g, dchi2, dchi2);
  for (std::size_t m = 0; m < n; ++m) {
    w.dphi[m] /= R;
    w.d2phi[m] /= R;
    w.d3phi[m] /= R;
  }

  // Phi = slope * x + periodic antiderivative of the mean-free part.
  std::vector<cplx> in(w.dphi.begin(), w.dphi.end()), hat(n);
  fft::forward(in, hat);
  const double slope = hat[0].real();
  hat[0] = 0.0;
  hat[n / 2] = 0.0;
  for (std::size_t m = 1; m < n; ++m)
    if (m != n / 2) hat[m] /= cplx(0.0, g.xi(m));
  fft::inverse(hat, in);
  w.phi.resize(n);
  for (std::size_t m = 0; m < n; ++m) w.phi[m] = slope * w.offset(m) + in[m].real() - in[0].real();
  // Exact oddness on the symmetric grid; the far offset -L/2 is its own mirror.
  w.phi[0] = 0.0;
  w.phi[n / 2] = 0.0;
  for (std::size_t m = 1; m < n / 2; ++m) {
    const double odd = 0.5 * (w.phi[m] - w.phi[n - m]);
    w.phi[m] = odd;
    w.phi[n - m] = -odd;
  }

  w.sup_dchi = sup_abs(w.dchi);
  w.sup_d2chi = sup_abs(w.d2chi);
  w.sup_d3chi = sup_abs(w.d3chi);
  w.sup_d2chi2 = sup_abs(d2chi2);
  w.sup_d3phi = sup_abs(w.d3phi);
  return w;
}

}  // namespace gbo
