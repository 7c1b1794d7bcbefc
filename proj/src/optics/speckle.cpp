#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "core/fft.hpp"
#include "core/parallel.hpp"
#include "spk/error.hpp"
#include "spk/optics.hpp"

namespace spk {

namespace {

constexpr double kMinWavelength = 400e-9;
constexpr double kMaxWavelength = 1000e-9;

}  // namespace

ImageGrid psf_at_wavelength(const OpticsConfig& cfg, const DiffuserScreen& screen, double wavelength) {
  cfg.validate();
  if (!(wavelength >= kMinWavelength && wavelength <= kMaxWavelength)) {
    throw Error(ErrorCode::Range, "wavelength outside the 400-1000 nm band");
  }
  const std::size_t n = cfg.grid_size;
  if (screen.heights.width() != n || screen.heights.height() != n) {
    throw Error(ErrorCode::Dimension, "diffuser screen does not match optics.grid_size");
  }

  // Spherical wave of the on-axis source at the diffuser plane (the exact
  // free-space field of a point source), times the diffuser phase, inside
  // the iris. The constant k*u is dropped; r - u is evaluated in a
  // cancellation-free form.
  const double k = 2.0 * std::numbers::pi / wavelength;
  const double phase_per_height = k * cfg.refractive_index_minus_one;
  const double u = cfg.object_distance;
  const double radius2 = 0.25 * cfg.iris_diameter * cfg.iris_diameter;
  const double p = cfg.pixel_pitch;
  const auto half = static_cast<double>(n / 2);

  ComplexField field(n, n, p);
  for (std::size_t r = 0; r < n; ++r) {
    const double y = (static_cast<double>(r) - half) * p;
    for (std::size_t c = 0; c < n; ++c) {
      const double x = (static_cast<double>(c) - half) * p;
      const double rho2 = x * x + y * y;
      if (rho2 > radius2) continue;
      const double dist = std::sqrt(rho2 + u * u);
      const double path = rho2 / (dist + u);
      field(r, c) = std::polar(1.0 / dist, k * path + phase_per_height * screen.heights(r, c));
    }
  }

  ImageGrid psf = angular_spectrum_propagate(field, cfg.camera_distance, wavelength).intensity();
  const double total = psf.sum();
  if (!(total > 0.0)) throw Error(ErrorCode::Degenerate, "point-spread function carries no energy");
  for (double& v : psf.samples()) v /= total;
  return psf;
}

ImageGrid monochromatic_speckle(const ImageGrid& object, const ImageGrid& psf) {
  if (!object.same_shape(psf)) {
    throw Error(ErrorCode::Dimension, "object and PSF must share the grid size");
  }
  object.require_intensity("object");
  psf.require_intensity("psf");
  const std::size_t rows = object.height();
  const std::size_t cols = object.width();

  std::vector<fft::cplx> a(object.samples().begin(), object.samples().end());
  // PSF origin moved from (H/2, W/2) to (0, 0).
  std::vector<fft::cplx> b(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t sr = (r + rows / 2) % rows;
    for (std::size_t c = 0; c < cols; ++c) b[r * cols + c] = psf(sr, (c + cols / 2) % cols);
  }
  fft::forward(a, rows, cols);
  fft::forward(b, rows, cols);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  fft::inverse(a, rows, cols);

  ImageGrid out(cols, rows, object.pitch());
  for (std::size_t i = 0; i < a.size(); ++i) out.samples()[i] = std::max(0.0, a[i].real());
  return out;
}

ImageGrid broadband_psf(const OpticsConfig& cfg, const DiffuserScreen& screen, const SpectralWeights& weights,
                        unsigned workers) {
  weights.validate();
  const std::size_t n = cfg.grid_size;
  ImageGrid total(n, n, cfg.pixel_pitch);
  const std::size_t count = weights.wavelengths.size();
  const std::size_t batch = std::max<std::size_t>(1, workers);

  // Batches of `workers` PSFs are computed concurrently and accumulated in
  // wavelength order, bounding memory and fixing the summation order.
  std::vector<ImageGrid> slots(batch, ImageGrid(1, 1, cfg.pixel_pitch));
  for (std::size_t start = 0; start < count; start += batch) {
    const std::size_t stop = std::min(count, start + batch);
    parallel_for(stop - start, workers, [&](std::size_t i) {
      slots[i] = psf_at_wavelength(cfg, screen, weights.wavelengths[start + i]);
    });
    for (std::size_t i = 0; i < stop - start; ++i) {
      const double alpha = weights.weights[start + i];
      auto dst = total.samples();
      auto src = slots[i].samples();
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += alpha * src[j];
    }
  }
  return total;
}

ImageGrid broadband_speckle(const ImageGrid& object, const OpticsConfig& cfg, const DiffuserScreen& screen,
                            const SpectralWeights& weights, unsigned workers) {
  if (object.width() != cfg.grid_size || object.height() != cfg.grid_size) {
    throw Error(ErrorCode::Dimension, "object does not match optics.grid_size");
  }
  // Convolution is linear, so sum_l a_l (O * PSF_l) = O * (sum_l a_l PSF_l).
  return monochromatic_speckle(object, broadband_psf(cfg, screen, weights, workers));
}

}  // namespace spk
