#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spk/correlation.hpp"
#include "spk/image.hpp"
#include "spk/metrics.hpp"
#include "spk/optics.hpp"
#include "spk/retrieval.hpp"

namespace spk::pipeline {

inline constexpr const char* kToolkitVersion = "0.1.0";

struct SpectrumParams {
  double center = 632.8e-9;
  double fwhm = 1e-9;
  double lo = 630.8e-9;
  double hi = 634.8e-9;
  double step = 0.5e-9;

  SpectralWeights weights() const { return gaussian_weights(center, fwhm, lo, hi, step); }
};

struct DiffuserParams {
  double rms_height = 5e-6;
  double correlation_length = 40 * 7.7e-6;
};

struct ObjectParams {
  std::string kind = "letter";  // two_point | letter | pgm
  std::string letter = "A";
  std::size_t height = 24;       // letter height in pixels
  std::size_t separation = 12;   // two_point spacing in pixels
  std::string path;              // pgm source
};

/// Everything a run needs. Built from a flat "key = value" file with dotted
/// section prefixes; see configs/example.cfg for the full key list.
struct PipelineConfig {
  OpticsConfig optics;
  DiffuserParams diffuser;
  SpectrumParams spectrum;
  ObjectParams object;
  std::size_t frames = 10;
  SubRegionSpec subregions{80, 10000, 0, 1000};
  HioSchedule schedule{2.0, 0.0, 0.04, 100, 100, 50, Selector::Oracle};
  MagnitudeOptions magnitude;
  bool support = false;
  double feature_radius = 30.0;  // background annulus for ratios and magnitude extraction
  double noise_sigma = 0.0;      // additive Gaussian noise, relative to the frame mean
  std::uint64_t seed = 1;
  std::size_t crop = 400;        // 0 keeps full frames
  std::string output_dir = "run";

  /// Applies one "key = value" assignment; throws Error(Config) naming the key.
  void set(const std::string& key, const std::string& value);
  /// Canonical key/value echo, in key order.
  std::vector<std::pair<std::string, std::string>> echo() const;
  void validate() const;

  static PipelineConfig load(const std::filesystem::path& path);
  static PipelineConfig parse(const std::string& text);
};

/// Ordered "key = value" record of a run.
class Manifest {
 public:
  void add(std::string key, std::string value);
  void add(std::string key, double value);
  /// Records "hash.<relpath> = <fnv1a64 hex>" for root/relpath.
  void add_file(const std::filesystem::path& root, const std::filesystem::path& relpath);
  void append(const Manifest& other, const std::string& prefix);

  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }
  std::optional<std::string> get(const std::string& key) const;
  /// Entries whose key starts with "hash.".
  std::map<std::string, std::string> hashes() const;

  void write(const std::filesystem::path& path) const;
  static Manifest read(const std::filesystem::path& path);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string file_hash(const std::filesystem::path& path);
std::string format_number(double v);

/// 5x7 bitmap letter scaled (nearest neighbour) to rows x cols, values 0/1.
ImageGrid letter_glyph(char letter, std::size_t rows, std::size_t cols, double pitch);
/// Object raster at camera-pixel scale, centered on the grid.
ImageGrid make_object(const ObjectParams& params, std::size_t grid_size, double pitch);
/// size x size window of `truth` centered on the bounding box of its nonzero pixels.
ImageGrid fit_truth(const ImageGrid& truth, std::size_t size);
/// Reads a raw-float image, or a PGM when the extension is .pgm.
ImageGrid load_image_any(const std::filesystem::path& path, double pitch);

enum class Method { TrueAc, RAut };
Method parse_method(const std::string& name);
const char* method_name(Method m);

struct SimulateOutput {
  std::vector<std::filesystem::path> frames;
  std::filesystem::path object;
  Manifest manifest;
};
SimulateOutput cmd_simulate(const PipelineConfig& cfg, const std::filesystem::path& out, unsigned workers);

struct ExtractOutput {
  std::filesystem::path pattern;
  Manifest manifest;
};
ExtractOutput cmd_extract(const PipelineConfig& cfg, const std::vector<std::filesystem::path>& frames, Method method,
                          const std::filesystem::path& out, unsigned workers);

struct ReconstructOutput {
  std::filesystem::path image;
  std::optional<double> similarity;
  double residual = 0.0;
  Manifest manifest;
};
ReconstructOutput cmd_reconstruct(const PipelineConfig& cfg, const std::filesystem::path& pattern,
                                  const std::optional<std::filesystem::path>& truth,
                                  const std::filesystem::path& out, unsigned workers);

/// Figures of merit for each image: speckle contrast, peak/background ratio
/// for odd square patterns, and aligned_ncc when a truth image is given.
std::vector<MetricReport> cmd_metrics(const PipelineConfig& cfg, const std::vector<std::filesystem::path>& images,
                                      const std::optional<std::filesystem::path>& truth);

struct PipelineOutput {
  Manifest manifest;
  std::map<std::string, double> metrics;  // e.g. "raut.aligned_ncc"
};
/// simulate -> extract (both methods) -> reconstruct (both) -> comparison.
PipelineOutput cmd_pipeline(const PipelineConfig& cfg, const std::filesystem::path& out, unsigned workers);

}  // namespace spk::pipeline
