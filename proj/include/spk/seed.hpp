#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace spk {

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::vector<std::string> stream_labels;
};

/// Pure mixing of (master seed, purpose label, task index). Stable across
/// runs, platforms and worker counts.
std::uint64_t derive_seed(const SeedSpec& spec, std::string_view label, std::uint64_t index) noexcept;
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view label, std::uint64_t index) noexcept;

/// Portable random stream. The engine is std::mt19937_64 (bit-specified by
/// the standard); the distributions are implemented here because the
/// standard library ones are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t index(std::uint64_t n);
  /// Standard normal (Box-Muller).
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace spk
