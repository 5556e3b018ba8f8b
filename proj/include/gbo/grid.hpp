#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace gbo {

/// Periodic discretization of [0, L) with N collocation points.
///
/// Frequencies follow DFT index order: index m < N/2 carries xi = 2 pi m / L,
/// index m >= N/2 carries xi = 2 pi (m - N) / L.  Index N/2 is the Nyquist
/// mode (xi = -pi N / L).
class TorusGrid {
 public:
  TorusGrid(std::size_t n, double length, std::size_t pad_factor);

  std::size_t size() const { return n_; }
  double length() const { return length_; }
  std::size_t pad_factor() const { return pad_; }
  double spacing() const { return length_ / static_cast<double>(n_); }
  /// 2 pi / L
  double dxi() const { return dxi_; }

  double x(std::size_t m) const { return spacing() * static_cast<double>(m); }
  /// Signed integer wavenumber of DFT index m.
  long wavenumber(std::size_t m) const {
    return m < n_ / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(n_);
  }
  double xi(std::size_t m) const { return dxi_ * static_cast<double>(wavenumber(m)); }
  std::size_t nyquist() const { return n_ / 2; }

  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& freqs() const { return freqs_; }

  bool operator==(const TorusGrid& o) const {
    return n_ == o.n_ && length_ == o.length_ && pad_ == o.pad_;
  }

 private:
  std::size_t n_;
  double length_;
  std::size_t pad_;
  double dxi_;
  std::vector<double> xs_;
  std::vector<double> freqs_;
};

using GridPtr = std::shared_ptr<const TorusGrid>;

/// Validates N (power of two, >= 16), L > 0 and pad_factor >= 1.
GridPtr make_grid(std::size_t n, double length, std::size_t pad_factor = 4);

bool is_power_of_two(std::size_t n);

}  // namespace gbo
