#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace spk {

/// Row-major 2-D real-valued map (intensity frame, PSF, correlation pattern)
/// carrying the physical pixel pitch in meters.
class ImageGrid {
 public:
  ImageGrid(std::size_t width, std::size_t height, double pitch);
  ImageGrid(std::size_t width, std::size_t height, double pitch, std::vector<double> samples);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double pitch() const noexcept { return pitch_; }

  double operator()(std::size_t row, std::size_t col) const noexcept { return samples_[row * width_ + col]; }
  double& operator()(std::size_t row, std::size_t col) noexcept { return samples_[row * width_ + col]; }

  std::span<const double> samples() const noexcept { return samples_; }
  std::span<double> samples() noexcept { return samples_; }

  double sum() const noexcept;
  double mean() const noexcept { return sum() / static_cast<double>(size()); }

  /// True when every sample is finite and >= 0.
  bool is_intensity() const noexcept;
  /// Throws Error(Range) naming `what` unless is_intensity().
  void require_intensity(const char* what) const;

  bool same_shape(const ImageGrid& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const ImageGrid&, const ImageGrid&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  double pitch_;
  std::vector<double> samples_;
};

/// Complex optical field sampled on the same kind of grid.
class ComplexField {
 public:
  using value_type = std::complex<double>;

  ComplexField(std::size_t width, std::size_t height, double pitch);
  ComplexField(std::size_t width, std::size_t height, double pitch, std::vector<value_type> samples);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double pitch() const noexcept { return pitch_; }

  value_type operator()(std::size_t row, std::size_t col) const noexcept { return samples_[row * width_ + col]; }
  value_type& operator()(std::size_t row, std::size_t col) noexcept { return samples_[row * width_ + col]; }

  std::span<const value_type> samples() const noexcept { return samples_; }
  std::span<value_type> samples() noexcept { return samples_; }

  /// Sum of |sample|^2.
  double energy() const noexcept;
  ImageGrid intensity() const;

 private:
  std::size_t width_;
  std::size_t height_;
  double pitch_;
  std::vector<value_type> samples_;
};

/// Centered size x size crop. For odd differences the extra row/column is
/// dropped from the high-index side.
ImageGrid crop_center(const ImageGrid& img, std::size_t size);

/// size x size window whose center pixel (size/2, size/2) is (row, col),
/// with circular wrap-around.
ImageGrid crop_circular(const ImageGrid& img, std::size_t row, std::size_t col, std::size_t size);

/// 180-degree rotation about the grid center: out(r, c) = img(H-1-r, W-1-c).
ImageGrid rotate180(const ImageGrid& img);

/// Circular shift so that out((r + dr) mod H, (c + dc) mod W) = img(r, c).
ImageGrid circular_shift(const ImageGrid& img, long dr, long dc);

}  // namespace spk
