#include "spk/metrics.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "core/fft.hpp"
#include "spk/error.hpp"

namespace spk {

double speckle_contrast(const ImageGrid& img) {
  if (img.size() < 2) throw Error(ErrorCode::Input, "speckle contrast needs at least two pixels");
  const double mean = img.mean();
  if (!(mean > 0.0)) throw Error(ErrorCode::Degenerate, "speckle contrast of an image with non-positive mean");
  double var = 0.0;
  for (double v : img.samples()) var += (v - mean) * (v - mean);
  var /= static_cast<double>(img.size());
  return std::sqrt(var) / mean;
}

namespace {

std::vector<fft::cplx> centered_spectrum(const ImageGrid& img, double& energy) {
  const double mean = img.mean();
  std::vector<fft::cplx> buf(img.size());
  energy = 0.0;
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const double v = img.samples()[i] - mean;
    buf[i] = v;
    energy += v * v;
  }
  if (!(energy > 0.0)) throw Error(ErrorCode::Degenerate, "normalized cross-correlation of a zero-variance image");
  fft::forward(buf, img.height(), img.width());
  return buf;
}

double max_circular_correlation(const std::vector<fft::cplx>& fa, std::vector<fft::cplx> fb, std::size_t rows,
                                std::size_t cols) {
  for (std::size_t i = 0; i < fb.size(); ++i) fb[i] = fa[i] * std::conj(fb[i]);
  fft::inverse(fb, rows, cols);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : fb) best = std::max(best, v.real());
  return best;
}

}  // namespace

double aligned_ncc(const ImageGrid& a, const ImageGrid& b) {
  if (!a.same_shape(b)) throw Error(ErrorCode::Dimension, "aligned_ncc inputs differ in size");
  double ea = 0.0;
  double eb = 0.0;
  double er = 0.0;
  const auto fa = centered_spectrum(a, ea);
  const auto fb = centered_spectrum(b, eb);
  const auto fr = centered_spectrum(rotate180(b), er);
  const double direct = max_circular_correlation(fa, fb, a.height(), a.width());
  const double flipped = max_circular_correlation(fa, fr, a.height(), a.width());
  return std::clamp(std::max(direct, flipped) / std::sqrt(ea * eb), -1.0, 1.0);
}

std::vector<double> line_profile(const ImageGrid& img, std::size_t column) {
  if (column >= img.width()) {
    throw Error(ErrorCode::Dimension, "column " + std::to_string(column) + " outside a " +
                                          std::to_string(img.width()) + "-wide image");
  }
  std::vector<double> out(img.height());
  for (std::size_t r = 0; r < img.height(); ++r) out[r] = img(r, column);
  return out;
}

std::string format_metric(const MetricReport& report) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), report.value);
  return report.name + "=" + std::string(buf.data(), ptr);
}

}  // namespace spk
