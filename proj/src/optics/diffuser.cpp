#include <cmath>
#include <numbers>
#include <string>

#include "core/fft.hpp"
#include "spk/error.hpp"
#include "spk/optics.hpp"
#include "spk/seed.hpp"

namespace spk {

void OpticsConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::Range, std::string("optics.") + name + " must be > 0");
  };
  positive(object_distance, "object_distance");
  positive(camera_distance, "camera_distance");
  positive(iris_diameter, "iris_diameter");
  positive(pixel_pitch, "pixel_pitch");
  positive(refractive_index_minus_one, "refractive_index_minus_one");
  if (grid_size < 64 || grid_size % 2 != 0) {
    throw Error(ErrorCode::Range, "optics.grid_size must be even and >= 64");
  }
  if (iris_diameter > static_cast<double>(grid_size) * pixel_pitch) {
    throw Error(ErrorCode::Range, "optics.iris_diameter exceeds the simulated plane");
  }
}

DiffuserScreen make_diffuser(const OpticsConfig& cfg, double rms_height, double correlation_length,
                             std::uint64_t seed) {
  cfg.validate();
  if (!(rms_height >= 0.0) || !std::isfinite(rms_height)) {
    throw Error(ErrorCode::Range, "diffuser.rms_height must be >= 0");
  }
  const double pitch = cfg.pixel_pitch;
  // Relative slack so a length given as exactly one pitch is accepted.
  if (!(correlation_length >= pitch * (1.0 - 1e-12))) {
    throw Error(ErrorCode::Resolution, "diffuser.correlation_length is below the pixel pitch");
  }
  const std::size_t n = cfg.grid_size;
  ImageGrid heights(n, n, pitch);
  if (rms_height == 0.0) return {std::move(heights), correlation_length};

  Rng rng(seed);
  std::vector<fft::cplx> field(n * n);
  for (auto& v : field) v = rng.normal();

  // White noise smoothed by a Gaussian kernel of std s pixels has a Gaussian
  // autocorrelation of std s*sqrt(2). s is chosen so that the 1/e length of
  // the height correlation is the requested one, less the pixel's own extent.
  const double ratio = correlation_length / pitch;
  const double s = std::sqrt(std::max(0.0, ratio * ratio - 1.0)) / 2.0;
  if (s > 0.0) {
    fft::forward(field, n, n);
    double gain = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double fy = static_cast<double>(fft::signed_bin(r, n)) / static_cast<double>(n);
      for (std::size_t c = 0; c < n; ++c) {
        const double fx = static_cast<double>(fft::signed_bin(c, n)) / static_cast<double>(n);
        const double g = std::exp(-2.0 * std::numbers::pi * std::numbers::pi * s * s * (fx * fx + fy * fy));
        field[r * n + c] *= g;
        gain += g * g;
      }
    }
    fft::inverse(field, n, n);
    // Variance of the filtered unit-variance white noise.
    const double scale = rms_height / std::sqrt(gain / static_cast<double>(n * n));
    for (std::size_t i = 0; i < n * n; ++i) heights.samples()[i] = field[i].real() * scale;
  } else {
    for (std::size_t i = 0; i < n * n; ++i) heights.samples()[i] = field[i].real() * rms_height;
  }
  return {std::move(heights), correlation_length};
}

}  // namespace spk
