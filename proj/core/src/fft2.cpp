#include "fft2.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace beamtrack::detail {

namespace {

std::mutex plan_mutex;
std::map<std::pair<int, int>, fftw_plan>& plan_cache() {
  static std::map<std::pair<int, int>, fftw_plan> cache;
  return cache;
}

fftw_plan plan_for(int rows, int cols, fftw_complex* in, fftw_complex* out) {
  // Planning is not thread safe; execution through fftw_execute_dft is.
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto& cache = plan_cache();
  const auto key = std::make_pair(rows, cols);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  // FFTW_UNALIGNED so the plan works with any caller-owned buffers.
  fftw_plan p = fftw_plan_dft_2d(rows, cols, in, out, FFTW_FORWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(key, p);
  return p;
}

}  // namespace

void fft2_forward(int rows, int cols, const std::complex<double>* in,
                  std::complex<double>* out) {
  auto* fin = reinterpret_cast<fftw_complex*>(
      const_cast<std::complex<double>*>(in));
  auto* fout = reinterpret_cast<fftw_complex*>(out);
  fftw_execute_dft(plan_for(rows, cols, fin, fout), fin, fout);
}

}  // namespace beamtrack::detail
