#include <cmath>
#include <string>

#include "spk/error.hpp"
#include "spk/optics.hpp"

namespace spk {

void SpectralWeights::validate() const {
  if (wavelengths.empty() || wavelengths.size() != weights.size()) {
    throw Error(ErrorCode::Range, "spectrum: wavelength and weight lists must be non-empty and equally long");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < wavelengths.size(); ++i) {
    if (!(wavelengths[i] > 0.0)) throw Error(ErrorCode::Range, "spectrum: wavelengths must be > 0");
    if (i > 0 && !(wavelengths[i] > wavelengths[i - 1])) {
      throw Error(ErrorCode::Range, "spectrum: wavelengths must be strictly increasing");
    }
    if (!(weights[i] >= 0.0)) throw Error(ErrorCode::Range, "spectrum: weights must be >= 0");
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorCode::Range, "spectrum: weights must sum to 1");
}

SpectralWeights gaussian_weights(double center, double fwhm, double lo, double hi, double step) {
  if (!(fwhm > 0.0)) throw Error(ErrorCode::Range, "spectrum.fwhm must be > 0");
  if (!(step > 0.0)) throw Error(ErrorCode::Range, "spectrum.step must be > 0");
  if (!(lo <= hi)) throw Error(ErrorCode::Range, "spectrum: empty wavelength range (lo > hi)");

  // Count from the rounded ratio so that e.g. (764-500)/0.5 gives exactly 528
  // intervals despite binary rounding of the step.
  const double intervals = (hi - lo) / step;
  const auto count = static_cast<std::size_t>(std::floor(intervals + 1e-9)) + 1;

  SpectralWeights out;
  out.wavelengths.reserve(count);
  out.weights.reserve(count);
  const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  double total = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double lambda = lo + static_cast<double>(i) * step;
    const double d = (lambda - center) / sigma;
    const double w = std::exp(-0.5 * d * d);
    out.wavelengths.push_back(lambda);
    out.weights.push_back(w);
    total += w;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::Range, "spectrum: all weights underflow to zero");
  for (double& w : out.weights) w /= total;
  return out;
}

}  // namespace spk
