#pragma once

#include <span>
#include <vector>

#include "core/fft.hpp"
#include "spk/retrieval.hpp"

namespace spk::detail {

/// Reusable buffers for repeated Fourier-modulus projections on one grid.
class Projector {
 public:
  explicit Projector(const MagnitudeConstraint& c);

  /// Writes the projection of `in` to `out`; returns the Fourier residual of `in`.
  double project(std::span<const double> in, std::span<double> out);
  /// Fourier residual of `in` alone.
  double residual(std::span<const double> in);

  bool allowed(std::size_t i) const noexcept { return support_.empty() || support_[i] != 0; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::span<const double> magnitude_;
  std::span<const unsigned char> support_;
  double magnitude_norm_;
  std::vector<fft::cplx> buf_;
};

}  // namespace spk::detail
