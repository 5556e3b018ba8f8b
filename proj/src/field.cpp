#include "gbo/field.hpp"

#include <algorithm>
#include <cmath>

#include "gbo/error.hpp"
#include "gbo/fft.hpp"

namespace gbo {

SpectralField::SpectralField(GridPtr grid) : grid_(std::move(grid)) {
  coeffs_.assign(grid_->size(), cplx{});
}

SpectralField::SpectralField(GridPtr grid, std::vector<cplx> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_->size())
    throw InvalidArgument("coefficient count does not match grid size");
}

SpectralField SpectralField::from_samples(GridPtr grid, std::span<const double> samples) {
  if (samples.size() != grid->size()) throw InvalidArgument("sample count does not match grid");
  std::vector<cplx> in(samples.begin(), samples.end());
  std::vector<cplx> out(in.size());
  fft::forward(in, out);
  SpectralField f(std::move(grid), std::move(out));
  f.enforce_real();
  return f;
}

SpectralField SpectralField::from_function(GridPtr grid, const std::function<double(double)>& fn) {
  std::vector<double> s(grid->size());
  for (std::size_t m = 0; m < s.size(); ++m) s[m] = fn(grid->x(m));
  return from_samples(std::move(grid), s);
}

std::vector<double> SpectralField::samples() const {
  std::vector<cplx> out(coeffs_.size());
  fft::inverse(coeffs_, out);
  std::vector<double> r(out.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = out[i].real();
  return r;
}

std::vector<double> SpectralField::fine_samples(std::size_t m) const {
  const std::size_t n = coeffs_.size();
  if (m < n) throw InvalidArgument("fine grid must not be coarser than the field grid");
  if (m == n) return samples();
  std::vector<cplx> padded(m, cplx{});
  for (std::size_t i = 0; i < n / 2; ++i) padded[i] = coeffs_[i];
  for (std::size_t i = n / 2 + 1; i < n; ++i) padded[m - n + i] = coeffs_[i];
  const cplx nyq = coeffs_[n / 2];
  padded[n / 2] = 0.5 * nyq;
  padded[m - n / 2] = 0.5 * nyq;
  std::vector<cplx> out(m);
  fft::inverse(padded, out);
  std::vector<double> r(m);
  for (std::size_t i = 0; i < m; ++i) r[i] = out[i].real();
  return r;
}

SpectralField SpectralField::from_fine_samples(GridPtr grid, std::span<const double> fine) {
  const std::size_t n = grid->size();
  const std::size_t m = fine.size();
  if (m < n) throw InvalidArgument("fine sample count smaller than grid size");
  std::vector<cplx> in(fine.begin(), fine.end());
  std::vector<cplx> out(m);
  fft::forward(in, out);
  std::vector<cplx> c(n, cplx{});
  if (m == n) {
    c = std::move(out);
  } else {
    for (std::size_t i = 0; i < n / 2; ++i) c[i] = out[i];
    for (std::size_t i = n / 2 + 1; i < n; ++i) c[i] = out[m - n + i];
    c[n / 2] = out[n / 2] + out[m - n / 2];
  }
  SpectralField f(std::move(grid), std::move(c));
  f.enforce_real();
  return f;
}

double SpectralField::hermitian_defect() const {
  const std::size_t n = coeffs_.size();
  double d = std::abs(coeffs_[0].imag());
  d = std::max(d, std::abs(coeffs_[n / 2].imag()));
  for (std::size_t m = 1; m < n / 2; ++m)
    d = std::max(d, std::abs(coeffs_[m] - std::conj(coeffs_[n - m])));
  return d;
}

void SpectralField::enforce_real() {
  const std::size_t n = coeffs_.size();
  coeffs_[0] = cplx(coeffs_[0].real(), 0.0);
  coeffs_[n / 2] = cplx(coeffs_[n / 2].real(), 0.0);
  for (std::size_t m = 1; m < n / 2; ++m) {
    const cplx avg = 0.5 * (coeffs_[m] + std::conj(coeffs_[n - m]));
    coeffs_[m] = avg;
    coeffs_[n - m] = std::conj(avg);
  }
}

bool SpectralField::all_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const cplx& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double a) {
  for (auto& c : coeffs_) c *= a;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double a, SpectralField f) { return f *= a; }

void require_same_grid(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid() == b.grid())) throw InvalidArgument("fields live on different grids");
}

double l2_distance(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(a.grid().length() * s);
}

}  // namespace gbo
