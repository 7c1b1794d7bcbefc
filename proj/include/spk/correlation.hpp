#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spk/image.hpp"

namespace spk {

/// Ensemble autocorrelation: per frame the mean is removed, the circular
/// autocorrelation is formed as IFFT(|FFT|^2) and normalized by its zero-lag
/// value; frames are averaged and an out_size window is cut with zero lag at
/// its center pixel (out_size/2, out_size/2).
ImageGrid true_autocorrelation(std::span<const ImageGrid> frames, std::size_t out_size, unsigned workers = 1);

/// Random sub-region parameters. window_size is rounded up to odd.
struct SubRegionSpec {
  std::size_t window_size = 80;
  std::size_t windows_per_frame = 100000;
  std::uint64_t seed = 0;
  std::size_t max_redraws = 1000;

  std::size_t effective_window() const noexcept { return window_size % 2 == 1 ? window_size : window_size + 1; }
  /// Throws Error(Range) for an unusable spec, Error(Dimension) if the
  /// window cannot be recentered inside a frame of the given size.
  void validate(std::size_t frame_width, std::size_t frame_height) const;
};

struct WindowCenter {
  std::size_t row;
  std::size_t col;
  std::size_t frame_index;

  friend bool operator==(const WindowCenter&, const WindowCenter&) = default;
};

struct SubRegionSelection {
  std::vector<WindowCenter> centers;
  std::size_t redraws = 0;  // rejected draws whose recentered window left the frame
};

/// Draws windows_per_frame initial windows uniformly inside the frame,
/// moves each onto its brightest pixel (lowest row-major index on ties) once,
/// and redraws when the moved window would cross the border. The random
/// stream is derive_seed(spec.seed, "window", frame_index).
SubRegionSelection select_subregions(const ImageGrid& frame, const SubRegionSpec& spec, std::size_t frame_index = 0);

struct RAutocorrelation {
  ImageGrid pattern;
  std::size_t windows = 0;
  std::size_t redraws = 0;
};

/// Shift-and-add over random brightest-point-centered sub-regions: the
/// pixel-wise mean of every selected window over every frame.
RAutocorrelation r_autocorrelation_detailed(std::span<const ImageGrid> frames, const SubRegionSpec& spec,
                                            unsigned workers = 1);
ImageGrid r_autocorrelation(std::span<const ImageGrid> frames, const SubRegionSpec& spec, unsigned workers = 1);

/// Sum of the window_size x window_size windows centered on `centers` (all
/// from `frame`), in the given order.
void accumulate_windows(const ImageGrid& frame, std::span<const WindowCenter> centers, std::size_t window,
                        std::span<double> sum);

struct PeakRatio {
  enum class Kind { Finite, Unbounded, Flat };
  double value = 0.0;
  Kind kind = Kind::Finite;
};

/// Pixels of a centered pattern farther than feature_radius from the center
/// pixel.
std::vector<double> annulus_values(const ImageGrid& ac, double feature_radius);

/// (center - median(annulus)) / (max(annulus) - median(annulus)). A constant
/// annulus yields Unbounded (+inf) or, if the center equals it too, Flat (0).
PeakRatio peak_background_ratio(const ImageGrid& ac, double feature_radius);

double median(std::vector<double> values);

}  // namespace spk
