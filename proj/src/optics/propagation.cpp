#include <cmath>
#include <numbers>

#include "core/fft.hpp"
#include "spk/error.hpp"
#include "spk/optics.hpp"

namespace spk {

ComplexField angular_spectrum_propagate(const ComplexField& field, double distance, double wavelength) {
  if (!(wavelength > 0.0) || !std::isfinite(wavelength)) throw Error(ErrorCode::Range, "wavelength must be > 0");
  if (!std::isfinite(distance)) throw Error(ErrorCode::Range, "propagation distance must be finite");
  ComplexField out = field;
  if (distance == 0.0) return out;

  const std::size_t rows = field.height();
  const std::size_t cols = field.width();
  const double inv_lambda2 = 1.0 / (wavelength * wavelength);
  const double dfy = 1.0 / (static_cast<double>(rows) * field.pitch());
  const double dfx = 1.0 / (static_cast<double>(cols) * field.pitch());
  const double two_pi_z = 2.0 * std::numbers::pi * distance;

  auto data = out.samples();
  fft::forward(data, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const double fy = static_cast<double>(fft::signed_bin(r, rows)) * dfy;
    for (std::size_t c = 0; c < cols; ++c) {
      const double fx = static_cast<double>(fft::signed_bin(c, cols)) * dfx;
      const double arg = inv_lambda2 - fx * fx - fy * fy;
      auto& v = data[r * cols + c];
      if (arg <= 0.0) {
        v = 0.0;
      } else {
        v *= std::polar(1.0, two_pi_z * std::sqrt(arg));
      }
    }
  }
  fft::inverse(data, rows, cols);
  return out;
}

}  // namespace spk
