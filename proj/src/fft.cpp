#include "gbo/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace gbo::fft {
namespace {

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

const PlanPair& plans_for(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cplx> a(n), b(n);
  auto* ia = reinterpret_cast<fftw_complex*>(a.data());
  auto* ib = reinterpret_cast<fftw_complex*>(b.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p;
  p.fwd = fftw_plan_dft_1d(static_cast<int>(n), ia, ib, FFTW_FORWARD, flags);
  p.bwd = fftw_plan_dft_1d(static_cast<int>(n), ia, ib, FFTW_BACKWARD, flags);
  if (!p.fwd || !p.bwd) throw std::runtime_error("fftw planning failed");
  return cache.emplace(n, p).first->second;
}

}  // namespace

void forward(std::span<const cplx> in, std::span<cplx> out) {
  const std::size_t n = in.size();
  const PlanPair& p = plans_for(n);
  // FFTW does not write to the input of an out-of-place c2c transform.
  fftw_execute_dft(p.fwd, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& c : out) c *= scale;
}

void inverse(std::span<const cplx> in, std::span<cplx> out) {
  const PlanPair& p = plans_for(in.size());
  fftw_execute_dft(p.bwd, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace gbo::fft
