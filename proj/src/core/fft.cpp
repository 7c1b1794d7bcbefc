#include "core/fft.hpp"

#include <fftw3.h>

#include <map>
#include <tuple>
#include <mutex>
#include <utility>
#include <vector>

namespace spk::fft {

namespace {

// FFTW planning is not thread-safe, execution of an existing plan on new
// arrays is. FFTW_ESTIMATE keeps the chosen algorithm (and therefore the
// rounding) identical from run to run; FFTW_UNALIGNED lets one plan serve
// any buffer.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t rows, std::size_t cols, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(rows, cols, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<cplx> scratch(rows * cols);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), buf, buf, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void run(std::span<cplx> data, std::size_t rows, std::size_t cols, int sign) {
  fftw_plan plan = cache().get(rows, cols, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace

void forward(std::span<cplx> data, std::size_t rows, std::size_t cols) { run(data, rows, cols, FFTW_FORWARD); }

void inverse(std::span<cplx> data, std::size_t rows, std::size_t cols) {
  run(data, rows, cols, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(rows * cols);
  for (auto& v : data) v *= scale;
}

}  // namespace spk::fft
