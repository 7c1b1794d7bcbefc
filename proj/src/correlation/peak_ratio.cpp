#include <algorithm>
#include <limits>

#include "spk/correlation.hpp"
#include "spk/error.hpp"

namespace spk {

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::Input, "median of an empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<long>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<long>(mid));
  return 0.5 * (lower + upper);
}

std::vector<double> annulus_values(const ImageGrid& ac, double feature_radius) {
  const double cr = static_cast<double>(ac.height() / 2);
  const double cc = static_cast<double>(ac.width() / 2);
  const double r2 = feature_radius * feature_radius;
  std::vector<double> out;
  for (std::size_t r = 0; r < ac.height(); ++r) {
    for (std::size_t c = 0; c < ac.width(); ++c) {
      const double dr = static_cast<double>(r) - cr;
      const double dc = static_cast<double>(c) - cc;
      if (dr * dr + dc * dc > r2) out.push_back(ac(r, c));
    }
  }
  if (out.empty()) throw Error(ErrorCode::Range, "feature radius leaves no background annulus");
  return out;
}

PeakRatio peak_background_ratio(const ImageGrid& ac, double feature_radius) {
  if (!(feature_radius >= 0.0) ||
      feature_radius >= 0.5 * static_cast<double>(std::min(ac.width(), ac.height()))) {
    throw Error(ErrorCode::Range, "feature radius must be below half the pattern size");
  }
  std::vector<double> ring = annulus_values(ac, feature_radius);
  const double top = *std::max_element(ring.begin(), ring.end());
  const double background = median(std::move(ring));
  const double peak = ac(ac.height() / 2, ac.width() / 2) - background;
  const double spread = top - background;
  if (spread > 0.0) return {peak / spread, PeakRatio::Kind::Finite};
  if (peak == 0.0) return {0.0, PeakRatio::Kind::Flat};
  return {std::numeric_limits<double>::infinity(), PeakRatio::Kind::Unbounded};
}

}  // namespace spk
