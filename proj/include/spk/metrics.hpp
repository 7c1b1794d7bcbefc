#pragma once

#include <string>
#include <utility>
#include <vector>

#include "spk/image.hpp"

namespace spk {

/// Population standard deviation over mean.
double speckle_contrast(const ImageGrid& img);

/// Maximum zero-normalized cross-correlation between `a` and every circular
/// translation of `b` and of its 180-degree rotation.
double aligned_ncc(const ImageGrid& a, const ImageGrid& b);

/// Samples of one column, top to bottom.
std::vector<double> line_profile(const ImageGrid& img, std::size_t column);

struct MetricReport {
  std::string name;
  double value = 0.0;
  std::vector<std::pair<std::string, std::string>> context;
};

/// "name=value"
std::string format_metric(const MetricReport& report);

}  // namespace spk
