#pragma once

#include <string>

#include "gbo/solver.hpp"

namespace gbo {

// Binary layout: "GBO1", then little-endian u32 N, f64 L, f64 t, u32 k,
// u32 pad_factor, and N coefficients as (f64 re, f64 im) in DFT order.

void write_checkpoint(const SimState& s, const std::string& path);

/// Throws FormatError on a wrong magic, a short file or an invalid header.
SimState read_checkpoint(const std::string& path);

}  // namespace gbo
