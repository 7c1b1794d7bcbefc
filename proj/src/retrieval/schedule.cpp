#include <algorithm>
#include <cmath>
#include <string>

#include "core/parallel.hpp"
#include "retrieval/iterations.hpp"
#include "spk/error.hpp"
#include "spk/metrics.hpp"
#include "spk/retrieval.hpp"
#include "spk/seed.hpp"

namespace spk {

void HioSchedule::validate() const {
  if (!(beta_end >= 0.0) || !(beta_start > beta_end)) {
    throw Error(ErrorCode::Range, "schedule: need beta_start > beta_end >= 0");
  }
  if (!(beta_step > 0.0)) throw Error(ErrorCode::Range, "schedule.beta_step must be > 0");
  const double steps = (beta_start - beta_end) / beta_step;
  if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps)) {
    throw Error(ErrorCode::Range, "schedule: (beta_start - beta_end) / beta_step must be an integer");
  }
  if (restarts < 1) throw Error(ErrorCode::Range, "schedule.restarts must be >= 1");
}

std::size_t HioSchedule::beta_count() const {
  return static_cast<std::size_t>(std::llround((beta_start - beta_end) / beta_step)) + 1;
}

double HioSchedule::beta_at(std::size_t i) const {
  if (i + 1 >= beta_count()) return beta_end;
  return beta_start - static_cast<double>(i) * beta_step;
}

ReconstructionResult run_schedule(const MagnitudeConstraint& c, const HioSchedule& sched, std::uint64_t seed) {
  sched.validate();
  const ImageGrid& m = c.magnitude;
  detail::Projector proj(c);
  const std::size_t n = m.size();

  ImageGrid current(m.width(), m.height(), m.pitch());
  Rng rng(seed);
  for (double& v : current.samples()) v = rng.uniform();

  std::vector<double> projected(n);
  auto g = current.samples();
  std::size_t iteration = 0;

  auto check_finite = [&](double residual) {
    double total = residual;
    for (double v : g) total += v;
    if (!std::isfinite(total)) {
      throw Error(ErrorCode::Numerical, "phase retrieval diverged at iteration " + std::to_string(iteration));
    }
  };

  ReconstructionResult result{ImageGrid(m.width(), m.height(), m.pitch()), 0.0, 0, false, 0, 0, {}};
  for (std::size_t b = 0; b < sched.beta_count(); ++b) {
    const double beta = sched.beta_at(b);
    for (std::size_t k = 0; k < sched.iters_per_beta; ++k, ++iteration) {
      const double res = proj.project(g, projected);
      for (std::size_t i = 0; i < n; ++i) {
        const double p = projected[i];
        g[i] = (p >= 0.0 && proj.allowed(i)) ? p : g[i] - beta * p;
      }
      check_finite(res);
      ++result.hio_iterations;
    }
  }

  result.er_residuals.reserve(sched.er_iters);
  for (std::size_t k = 0; k < sched.er_iters; ++k, ++iteration) {
    const double res = proj.project(g, projected);
    if (k > 0) result.er_residuals.push_back(res);
    for (std::size_t i = 0; i < n; ++i) {
      const double p = projected[i];
      g[i] = (p >= 0.0 && proj.allowed(i)) ? p : 0.0;
    }
    check_finite(res);
    ++result.er_iterations;
  }
  result.fourier_residual = proj.residual(g);
  if (sched.er_iters > 0) result.er_residuals.push_back(result.fourier_residual);
  if (!std::isfinite(result.fourier_residual)) {
    throw Error(ErrorCode::Numerical, "phase retrieval diverged at iteration " + std::to_string(iteration));
  }
  result.image = std::move(current);
  return result;
}

RestartSet best_of_restarts(const MagnitudeConstraint& c, const HioSchedule& sched,
                            const std::optional<ImageGrid>& truth, std::uint64_t seed, unsigned workers) {
  sched.validate();
  if (sched.selector == Selector::Oracle) {
    if (!truth) throw Error(ErrorCode::Config, "oracle selector requires a ground-truth image");
    if (!truth->same_shape(c.magnitude)) {
      throw Error(ErrorCode::Dimension, "ground truth does not match the reconstruction grid");
    }
  }

  RestartSet set;
  set.runs.assign(sched.restarts, ReconstructionResult{ImageGrid(1, 1, 1.0), 0.0, 0, false, 0, 0, {}});
  parallel_for(sched.restarts, workers, [&](std::size_t i) {
    set.runs[i] = run_schedule(c, sched, derive_seed(seed, "restart", i));
    set.runs[i].restart_index = i;
  });

  if (sched.selector == Selector::Oracle) {
    set.similarity.resize(set.runs.size());
    for (std::size_t i = 0; i < set.runs.size(); ++i) {
      // An all-constant reconstruction cannot be normalized; rank it last.
      const auto px = set.runs[i].image.samples();
      const bool flat = std::all_of(px.begin(), px.end(), [&](double v) { return v == px[0]; });
      set.similarity[i] = flat ? -1.0 : aligned_ncc(set.runs[i].image, *truth);
    }
    for (std::size_t i = 1; i < set.runs.size(); ++i) {
      if (set.similarity[i] > set.similarity[set.selected_index]) set.selected_index = i;
    }
  } else {
    for (std::size_t i = 1; i < set.runs.size(); ++i) {
      if (set.runs[i].fourier_residual < set.runs[set.selected_index].fourier_residual) set.selected_index = i;
    }
  }
  set.runs[set.selected_index].selected = true;
  return set;
}

}  // namespace spk
