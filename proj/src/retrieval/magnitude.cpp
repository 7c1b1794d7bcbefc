#include <cmath>
#include <numbers>

#include "core/fft.hpp"
#include "spk/correlation.hpp"
#include "spk/error.hpp"
#include "spk/retrieval.hpp"

namespace spk {

namespace {

std::vector<double> raised_cosine_profile(std::size_t n, double fraction) {
  std::vector<double> w(n, 1.0);
  const auto width = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
  if (width == 0) return w;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t d = std::min(i, n - 1 - i);
    if (d < width) {
      const double t = (static_cast<double>(d) + 0.5) / static_cast<double>(width);
      w[i] = 0.5 * (1.0 - std::cos(std::numbers::pi * t));
    }
  }
  return w;
}

}  // namespace

MagnitudeConstraint fourier_magnitude_from_ac(const ImageGrid& ac, const MagnitudeOptions& options) {
  if (!(options.taper_fraction >= 0.0 && options.taper_fraction <= 0.5)) {
    throw Error(ErrorCode::Range, "taper fraction must lie in [0, 0.5]");
  }
  const std::size_t rows = ac.height();
  const std::size_t cols = ac.width();
  const double background = median(annulus_values(ac, options.feature_radius));

  bool any_signal = false;
  for (double v : ac.samples()) any_signal = any_signal || v > background;
  if (!any_signal) throw Error(ErrorCode::Degenerate, "pattern never rises above its background");

  const auto wr = raised_cosine_profile(rows, options.taper_fraction);
  const auto wc = raised_cosine_profile(cols, options.taper_fraction);

  // Center pixel moved to the origin so that the transform is real.
  std::vector<fft::cplx> buf(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t sr = (r + rows / 2) % rows;
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t sc = (c + cols / 2) % cols;
      buf[r * cols + c] = (ac(sr, sc) - background) * wr[sr] * wc[sc];
    }
  }
  fft::forward(buf, rows, cols);

  MagnitudeConstraint out{ImageGrid(cols, rows, ac.pitch()), options.interpolate_dc, {}};
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t nr = (rows - r) % rows;
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t nc = (cols - c) % cols;
      const double power = 0.5 * (buf[r * cols + c].real() + buf[nr * cols + nc].real());
      out.magnitude(r, c) = std::sqrt(std::max(0.0, power));
    }
  }
  if (options.interpolate_dc) {
    const auto& m = out.magnitude;
    out.magnitude(0, 0) = 0.25 * (m(0, 1 % cols) + m(0, cols - 1) + m(1 % rows, 0) + m(rows - 1, 0));
  }
  return out;
}

void set_square_support(MagnitudeConstraint& c, std::size_t side) {
  const std::size_t rows = c.magnitude.height();
  const std::size_t cols = c.magnitude.width();
  if (side < 1 || side > rows || side > cols) throw Error(ErrorCode::Dimension, "support larger than the field");
  c.support.assign(rows * cols, 0);
  const std::size_t r0 = rows / 2 - side / 2;
  const std::size_t c0 = cols / 2 - side / 2;
  for (std::size_t r = r0; r < r0 + side; ++r) {
    for (std::size_t col = c0; col < c0 + side; ++col) c.support[r * cols + col] = 1;
  }
}

}  // namespace spk
