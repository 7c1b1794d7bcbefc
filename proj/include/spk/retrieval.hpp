#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "spk/image.hpp"

namespace spk {

/// Fourier-modulus constraint for phase retrieval. `magnitude` is laid out
/// like an unshifted DFT (DC at (0, 0)). `support`, when non-empty, marks the
/// image-domain pixels allowed to be nonzero.
struct MagnitudeConstraint {
  ImageGrid magnitude;
  bool dc_interpolated = false;
  std::vector<unsigned char> support;

  bool has_support() const noexcept { return !support.empty(); }
};

struct MagnitudeOptions {
  double feature_radius = 30.0;  // background annulus starts outside this radius
  double taper_fraction = 0.1;   // raised-cosine edge roll-off; 0 disables
  bool interpolate_dc = false;   // replace the DC bin by the mean of its 4 neighbours
};

/// Background-subtracts and tapers a centered autocorrelation-like pattern,
/// then returns sqrt(max(0, Re FFT(pattern))) with the pattern's center moved
/// to the origin. The result is symmetrized so that M(k) = M(-k) exactly.
MagnitudeConstraint fourier_magnitude_from_ac(const ImageGrid& ac, const MagnitudeOptions& options = {});

/// Adds a centered square support of the given side to the constraint.
void set_square_support(MagnitudeConstraint& c, std::size_t side);

/// Fourier-modulus projection: keeps the phase of FFT(estimate), replaces the
/// modulus by the constraint (zero phase where the estimate's spectrum
/// vanishes) and returns the real part of the inverse transform.
ImageGrid project_magnitude(const ImageGrid& estimate, const MagnitudeConstraint& c);

/// Error reduction: projection, then zero every pixel that is negative or
/// outside the support.
ImageGrid er_step(const ImageGrid& estimate, const MagnitudeConstraint& c);

/// Hybrid input-output: projection of `estimate`; pixels satisfying the
/// constraints take the projected value, violating pixels take
/// previous - beta * projected.
ImageGrid hio_step(const ImageGrid& estimate, const ImageGrid& previous, const MagnitudeConstraint& c, double beta);

/// || |FFT(image)| - magnitude ||_2 / || magnitude ||_2
double fourier_residual(const ImageGrid& image, const MagnitudeConstraint& c);

enum class Selector { Blind, Oracle };

/// HIO with beta stepping from beta_start down to beta_end inclusive,
/// iters_per_beta iterations per value, then er_iters ER iterations.
struct HioSchedule {
  double beta_start = 2.0;
  double beta_end = 0.0;
  double beta_step = 0.04;
  std::size_t iters_per_beta = 100;
  std::size_t er_iters = 100;
  std::size_t restarts = 50;
  Selector selector = Selector::Blind;

  void validate() const;
  std::size_t beta_count() const;
  double beta_at(std::size_t i) const;
  std::size_t total_hio_iterations() const { return beta_count() * iters_per_beta; }
};

struct ReconstructionResult {
  ImageGrid image;
  double fourier_residual = 0.0;
  std::size_t restart_index = 0;
  bool selected = false;
  std::size_t hio_iterations = 0;
  std::size_t er_iterations = 0;
  /// Residual after each ER iteration.
  std::vector<double> er_residuals;
};

/// One full HIO -> ER run from a uniform [0, 1) random start drawn from `seed`.
ReconstructionResult run_schedule(const MagnitudeConstraint& c, const HioSchedule& sched, std::uint64_t seed);

struct RestartSet {
  std::vector<ReconstructionResult> runs;
  std::vector<double> similarity;  // aligned_ncc to truth, oracle selector only
  std::size_t selected_index = 0;

  const ReconstructionResult& selected() const { return runs[selected_index]; }
};

/// `sched.restarts` independent runs seeded derive_seed(seed, "restart", i).
/// Blind selection takes the smallest Fourier residual; oracle selection the
/// largest aligned_ncc against `truth` (which must match the field size).
RestartSet best_of_restarts(const MagnitudeConstraint& c, const HioSchedule& sched,
                            const std::optional<ImageGrid>& truth, std::uint64_t seed, unsigned workers = 1);

}  // namespace spk
