#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace gbo::fft {

using cplx = std::complex<double>;

// Thin wrapper over FFTW complex transforms.  Plans are created once per size
// (under a lock) and executed on caller-owned buffers, so concurrent calls are
// safe.  FFTW_ESTIMATE keeps the chosen algorithm, and hence the rounding,
// identical from run to run.

/// out[m] = (1/n) * sum_j in[j] exp(-2 pi i m j / n)
void forward(std::span<const cplx> in, std::span<cplx> out);

/// out[j] = sum_m in[m] exp(+2 pi i m j / n)
void inverse(std::span<const cplx> in, std::span<cplx> out);

}  // namespace gbo::fft
