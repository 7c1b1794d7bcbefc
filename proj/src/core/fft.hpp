#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace spk::fft {

using cplx = std::complex<double>;

/// In-place unnormalized 2-D DFT of a row-major rows x cols array.
void forward(std::span<cplx> data, std::size_t rows, std::size_t cols);
/// In-place inverse 2-D DFT including the 1/(rows*cols) normalization.
void inverse(std::span<cplx> data, std::size_t rows, std::size_t cols);

/// Signed frequency index of DFT bin k on an n-point axis: k for k < (n+1)/2,
/// k - n otherwise.
inline long signed_bin(std::size_t k, std::size_t n) noexcept {
  return k < (n + 1) / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

}  // namespace spk::fft
