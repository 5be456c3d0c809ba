#pragma once

#include <complex>

namespace beamtrack::detail {

// Forward 2-D DFT of a row-major rows x cols array, out of place. Plans are
// cached per size; safe to call from several threads.
void fft2_forward(int rows, int cols, const std::complex<double>* in,
                  std::complex<double>* out);

}  // namespace beamtrack::detail
