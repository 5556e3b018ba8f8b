#include "gbo/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gbo/error.hpp"

namespace gbo {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

TorusGrid::TorusGrid(std::size_t n, double length, std::size_t pad_factor)
    : n_(n), length_(length), pad_(pad_factor), dxi_(2.0 * std::numbers::pi / length) {
  xs_.resize(n_);
  freqs_.resize(n_);
  for (std::size_t m = 0; m < n_; ++m) {
    xs_[m] = x(m);
    freqs_[m] = xi(m);
  }
}

GridPtr make_grid(std::size_t n, double length, std::size_t pad_factor) {
  if (!is_power_of_two(n) || n < 16)
    throw InvalidArgument("grid size N must be a power of two >= 16, got " + std::to_string(n));
  if (!(length > 0.0) || !std::isfinite(length))
    throw InvalidArgument("domain length L must be positive");
  if (pad_factor < 1) throw InvalidArgument("pad_factor must be >= 1");
  return std::make_shared<const TorusGrid>(n, length, pad_factor);
}

}  // namespace gbo
