#include <cmath>
#include <string>

#include "core/fft.hpp"
#include "core/parallel.hpp"
#include "spk/correlation.hpp"
#include "spk/error.hpp"

namespace spk {

ImageGrid true_autocorrelation(std::span<const ImageGrid> frames, std::size_t out_size, unsigned workers) {
  if (frames.empty()) throw Error(ErrorCode::Input, "autocorrelation needs at least one frame");
  const std::size_t rows = frames[0].height();
  const std::size_t cols = frames[0].width();
  for (const auto& f : frames) {
    if (f.width() != cols || f.height() != rows) throw Error(ErrorCode::Dimension, "frames differ in size");
  }
  if (out_size < 1 || out_size > rows || out_size > cols) {
    throw Error(ErrorCode::Dimension, "autocorrelation output size " + std::to_string(out_size) +
                                          " exceeds the frame size");
  }

  std::vector<std::vector<double>> per_frame(frames.size());
  parallel_for(frames.size(), workers, [&](std::size_t m) {
    const ImageGrid& frame = frames[m];
    const double mean = frame.mean();
    std::vector<fft::cplx> buf(frame.size());
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = frame.samples()[i] - mean;
    fft::forward(buf, rows, cols);
    for (auto& v : buf) v = std::norm(v);
    fft::inverse(buf, rows, cols);
    const double zero_lag = buf[0].real();
    if (!(zero_lag > 0.0)) {
      throw Error(ErrorCode::Degenerate, "frame " + std::to_string(m) + " has zero variance");
    }
    std::vector<double> ac(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) ac[i] = buf[i].real() / zero_lag;
    per_frame[m] = std::move(ac);
  });

  ImageGrid sum(cols, rows, frames[0].pitch());
  for (const auto& ac : per_frame) {
    for (std::size_t i = 0; i < ac.size(); ++i) sum.samples()[i] += ac[i];
  }
  for (double& v : sum.samples()) v /= static_cast<double>(frames.size());
  return crop_circular(sum, 0, 0, out_size);
}

}  // namespace spk
