#include "spk/image.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "spk/error.hpp"

namespace spk {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Format: return "format";
    case ErrorCode::Truncated: return "truncated";
    case ErrorCode::Dimension: return "dimension";
    case ErrorCode::Range: return "range";
    case ErrorCode::Input: return "input";
    case ErrorCode::Selection: return "selection";
    case ErrorCode::Numerical: return "numerical";
    case ErrorCode::Config: return "config";
    case ErrorCode::Io: return "io";
    case ErrorCode::Degenerate: return "degenerate";
    case ErrorCode::Resolution: return "resolution";
  }
  return "unknown";
}

namespace {

void check_shape(std::size_t width, std::size_t height, double pitch, std::size_t samples) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::Dimension, "image dimensions must be >= 1, got " + std::to_string(width) + "x" +
                                          std::to_string(height));
  }
  if (!(pitch > 0.0) || !std::isfinite(pitch)) {
    throw Error(ErrorCode::Range, "pitch must be a positive finite length");
  }
  if (samples != width * height) {
    throw Error(ErrorCode::Dimension, "sample count " + std::to_string(samples) + " does not match " +
                                          std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

ImageGrid::ImageGrid(std::size_t width, std::size_t height, double pitch)
    : ImageGrid(width, height, pitch, std::vector<double>(width * height, 0.0)) {}

ImageGrid::ImageGrid(std::size_t width, std::size_t height, double pitch, std::vector<double> samples)
    : width_(width), height_(height), pitch_(pitch), samples_(std::move(samples)) {
  check_shape(width_, height_, pitch_, samples_.size());
}

double ImageGrid::sum() const noexcept { return std::accumulate(samples_.begin(), samples_.end(), 0.0); }

bool ImageGrid::is_intensity() const noexcept {
  for (double v : samples_) {
    if (!std::isfinite(v) || v < 0.0) return false;
  }
  return true;
}

void ImageGrid::require_intensity(const char* what) const {
  if (!is_intensity()) {
    throw Error(ErrorCode::Range, std::string(what) + " must contain only finite, non-negative samples");
  }
}

ComplexField::ComplexField(std::size_t width, std::size_t height, double pitch)
    : ComplexField(width, height, pitch, std::vector<value_type>(width * height)) {}

ComplexField::ComplexField(std::size_t width, std::size_t height, double pitch, std::vector<value_type> samples)
    : width_(width), height_(height), pitch_(pitch), samples_(std::move(samples)) {
  check_shape(width_, height_, pitch_, samples_.size());
}

double ComplexField::energy() const noexcept {
  double e = 0.0;
  for (const auto& v : samples_) e += std::norm(v);
  return e;
}

ImageGrid ComplexField::intensity() const {
  std::vector<double> out(samples_.size());
  for (std::size_t i = 0; i < samples_.size(); ++i) out[i] = std::norm(samples_[i]);
  return ImageGrid(width_, height_, pitch_, std::move(out));
}

ImageGrid crop_center(const ImageGrid& img, std::size_t size) {
  if (size < 1 || size > img.width() || size > img.height()) {
    throw Error(ErrorCode::Dimension, "crop size " + std::to_string(size) + " does not fit a " +
                                          std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                                          " image");
  }
  // Floor division drops the odd leftover row/column from the high side.
  const std::size_t r0 = (img.height() - size) / 2;
  const std::size_t c0 = (img.width() - size) / 2;
  ImageGrid out(size, size, img.pitch());
  for (std::size_t r = 0; r < size; ++r) {
    for (std::size_t c = 0; c < size; ++c) out(r, c) = img(r0 + r, c0 + c);
  }
  return out;
}

ImageGrid crop_circular(const ImageGrid& img, std::size_t row, std::size_t col, std::size_t size) {
  if (size < 1 || size > img.width() || size > img.height()) {
    throw Error(ErrorCode::Dimension, "window size " + std::to_string(size) + " exceeds image");
  }
  const std::size_t h = img.height();
  const std::size_t w = img.width();
  const std::size_t half = size / 2;
  ImageGrid out(size, size, img.pitch());
  for (std::size_t r = 0; r < size; ++r) {
    const std::size_t sr = (row + h - half % h + r) % h;
    for (std::size_t c = 0; c < size; ++c) {
      const std::size_t sc = (col + w - half % w + c) % w;
      out(r, c) = img(sr, sc);
    }
  }
  return out;
}

ImageGrid rotate180(const ImageGrid& img) {
  ImageGrid out(img.width(), img.height(), img.pitch());
  const std::size_t h = img.height();
  const std::size_t w = img.width();
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) out(r, c) = img(h - 1 - r, w - 1 - c);
  }
  return out;
}

ImageGrid circular_shift(const ImageGrid& img, long dr, long dc) {
  const long h = static_cast<long>(img.height());
  const long w = static_cast<long>(img.width());
  ImageGrid out(img.width(), img.height(), img.pitch());
  for (long r = 0; r < h; ++r) {
    const long tr = ((r + dr) % h + h) % h;
    for (long c = 0; c < w; ++c) {
      const long tc = ((c + dc) % w + w) % w;
      out(static_cast<std::size_t>(tr), static_cast<std::size_t>(tc)) =
          img(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    }
  }
  return out;
}

}  // namespace spk
