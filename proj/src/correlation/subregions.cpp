#include <algorithm>
#include <string>

#include "core/parallel.hpp"
#include "spk/correlation.hpp"
#include "spk/error.hpp"
#include "spk/seed.hpp"

namespace spk {

void SubRegionSpec::validate(std::size_t frame_width, std::size_t frame_height) const {
  if (window_size < 3) throw Error(ErrorCode::Range, "subregions.window_size must be >= 3");
  if (windows_per_frame < 1) throw Error(ErrorCode::Range, "subregions.windows_per_frame must be >= 1");
  const std::size_t limit = std::min(frame_width, frame_height);
  if (limit < 2 || effective_window() > limit - 2) {
    throw Error(ErrorCode::Dimension, "window of " + std::to_string(effective_window()) +
                                          " pixels does not fit a " + std::to_string(frame_width) + "x" +
                                          std::to_string(frame_height) + " frame with room to recenter");
  }
}

SubRegionSelection select_subregions(const ImageGrid& frame, const SubRegionSpec& spec, std::size_t frame_index) {
  spec.validate(frame.width(), frame.height());
  const std::size_t window = spec.effective_window();
  const std::size_t half = window / 2;
  const std::size_t rows = frame.height();
  const std::size_t cols = frame.width();
  // Valid centers: [half, dim - 1 - half].
  const std::size_t row_span = rows - window + 1;
  const std::size_t col_span = cols - window + 1;

  Rng rng(derive_seed(spec.seed, "window", frame_index));
  SubRegionSelection out;
  out.centers.reserve(spec.windows_per_frame);

  for (std::size_t n = 0; n < spec.windows_per_frame; ++n) {
    std::size_t attempts = 0;
    for (;;) {
      const std::size_t r0 = rng.index(row_span);  // top-left corner
      const std::size_t c0 = rng.index(col_span);
      std::size_t best_r = r0;
      std::size_t best_c = c0;
      double best = frame(r0, c0);
      for (std::size_t r = r0; r < r0 + window; ++r) {
        for (std::size_t c = c0; c < c0 + window; ++c) {
          // Strict comparison keeps the lowest row-major index on ties.
          if (frame(r, c) > best) {
            best = frame(r, c);
            best_r = r;
            best_c = c;
          }
        }
      }
      if (best_r >= half && best_r + half < rows && best_c >= half && best_c + half < cols) {
        out.centers.push_back({best_r, best_c, frame_index});
        break;
      }
      ++out.redraws;
      if (++attempts > spec.max_redraws) {
        throw Error(ErrorCode::Selection, "sub-region selection exhausted " + std::to_string(spec.max_redraws) +
                                              " redraws in frame " + std::to_string(frame_index) + " after " +
                                              std::to_string(n) + " of " +
                                              std::to_string(spec.windows_per_frame) + " windows");
      }
    }
  }
  return out;
}

void accumulate_windows(const ImageGrid& frame, std::span<const WindowCenter> centers, std::size_t window,
                        std::span<double> sum) {
  const std::size_t half = window / 2;
  for (const auto& center : centers) {
    const std::size_t r0 = center.row - half;
    const std::size_t c0 = center.col - half;
    for (std::size_t r = 0; r < window; ++r) {
      const double* src = &frame.samples()[(r0 + r) * frame.width() + c0];
      double* dst = &sum[r * window];
      for (std::size_t c = 0; c < window; ++c) dst[c] += src[c];
    }
  }
}

RAutocorrelation r_autocorrelation_detailed(std::span<const ImageGrid> frames, const SubRegionSpec& spec,
                                            unsigned workers) {
  if (frames.empty()) throw Error(ErrorCode::Input, "R-autocorrelation needs at least one frame");
  for (const auto& f : frames) {
    if (!f.same_shape(frames[0])) throw Error(ErrorCode::Dimension, "frames differ in size");
  }
  const std::size_t window = spec.effective_window();

  struct FrameSum {
    std::vector<double> sum;
    std::size_t windows = 0;
    std::size_t redraws = 0;
  };
  std::vector<FrameSum> partial(frames.size());
  parallel_for(frames.size(), workers, [&](std::size_t m) {
    const SubRegionSelection sel = select_subregions(frames[m], spec, m);
    FrameSum fs;
    fs.sum.assign(window * window, 0.0);
    accumulate_windows(frames[m], sel.centers, window, fs.sum);
    fs.windows = sel.centers.size();
    fs.redraws = sel.redraws;
    partial[m] = std::move(fs);
  });

  RAutocorrelation out{ImageGrid(window, window, frames[0].pitch()), 0, 0};
  auto acc = out.pattern.samples();
  for (const auto& fs : partial) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += fs.sum[i];
    out.windows += fs.windows;
    out.redraws += fs.redraws;
  }
  for (double& v : acc) v /= static_cast<double>(out.windows);
  return out;
}

ImageGrid r_autocorrelation(std::span<const ImageGrid> frames, const SubRegionSpec& spec, unsigned workers) {
  return r_autocorrelation_detailed(frames, spec, workers).pattern;
}

}  // namespace spk
