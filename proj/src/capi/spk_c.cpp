#include "spk/spk.h"

#include <new>
#include <string>
#include <vector>

#include "spk/correlation.hpp"
#include "spk/error.hpp"
#include "spk/image_io.hpp"
#include "spk/metrics.hpp"
#include "spk/pipeline.hpp"
#include "spk/seed.hpp"

struct spk_image {
  spk::ImageGrid grid;
};

struct spk_config {
  spk::pipeline::PipelineConfig cfg;
};

namespace {

thread_local std::string g_last_error;

template <class Fn>
spk_status guard(Fn&& fn) noexcept {
  g_last_error.clear();
  try {
    fn();
    return SPK_OK;
  } catch (const spk::Error& e) {
    g_last_error = e.what();
    return static_cast<spk_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return SPK_ERR_INTERNAL;
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw spk::Error(spk::ErrorCode::Input, std::string(what) + " is NULL");
}

std::vector<spk::ImageGrid> gather(const spk_image* const* frames, size_t count) {
  require(frames, "frames");
  std::vector<spk::ImageGrid> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    require(frames[i], "frame");
    out.push_back(frames[i]->grid);
  }
  return out;
}

std::vector<std::filesystem::path> paths(const char* const* items, size_t count) {
  require(items, "path list");
  std::vector<std::filesystem::path> out;
  for (size_t i = 0; i < count; ++i) {
    require(items[i], "path");
    out.emplace_back(items[i]);
  }
  return out;
}

spk_image* wrap(spk::ImageGrid grid) { return new spk_image{std::move(grid)}; }

}  // namespace

extern "C" {

const char* spk_version(void) { return spk::pipeline::kToolkitVersion; }

const char* spk_last_error(void) { return g_last_error.c_str(); }

const char* spk_status_name(spk_status status) {
  if (status == SPK_OK) return "ok";
  if (status == SPK_ERR_INTERNAL) return "internal";
  return spk::error_code_name(static_cast<spk::ErrorCode>(status));
}

spk_status spk_image_create(size_t width, size_t height, double pitch, const double* samples, spk_image** out) {
  return guard([&] {
    require(out, "out");
    std::vector<double> data(width * height, 0.0);
    if (samples != nullptr) data.assign(samples, samples + width * height);
    *out = wrap(spk::ImageGrid(width, height, pitch, std::move(data)));
  });
}

void spk_image_destroy(spk_image* img) { delete img; }
size_t spk_image_width(const spk_image* img) { return img ? img->grid.width() : 0; }
size_t spk_image_height(const spk_image* img) { return img ? img->grid.height() : 0; }
double spk_image_pitch(const spk_image* img) { return img ? img->grid.pitch() : 0.0; }
const double* spk_image_data(const spk_image* img) { return img ? img->grid.samples().data() : nullptr; }

spk_status spk_image_read(const char* path, spk_image** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = wrap(spk::read_image(path));
  });
}

spk_status spk_image_write(const spk_image* img, const char* path) {
  return guard([&] {
    require(img, "image");
    require(path, "path");
    spk::write_image(img->grid, path);
  });
}

spk_status spk_image_write_pgm(const spk_image* img, const char* path) {
  return guard([&] {
    require(img, "image");
    require(path, "path");
    spk::write_pgm(img->grid, path);
  });
}

spk_status spk_image_read_pgm(const char* path, double pitch, spk_image** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = wrap(spk::read_pgm(path, pitch));
  });
}

spk_status spk_image_crop_center(const spk_image* img, size_t size, spk_image** out) {
  return guard([&] {
    require(img, "image");
    require(out, "out");
    *out = wrap(spk::crop_center(img->grid, size));
  });
}

uint64_t spk_derive_seed(uint64_t master_seed, const char* label, uint64_t index) {
  return spk::derive_seed(master_seed, label ? label : "", index);
}

spk_status spk_true_autocorrelation(const spk_image* const* frames, size_t count, size_t out_size, unsigned workers,
                                    spk_image** out) {
  return guard([&] {
    require(out, "out");
    const auto grids = gather(frames, count);
    *out = wrap(spk::true_autocorrelation(grids, out_size, workers));
  });
}

spk_status spk_r_autocorrelation(const spk_image* const* frames, size_t count, size_t window_size,
                                 size_t windows_per_frame, uint64_t seed, size_t max_redraws, unsigned workers,
                                 spk_image** out) {
  return guard([&] {
    require(out, "out");
    const auto grids = gather(frames, count);
    const spk::SubRegionSpec spec{window_size, windows_per_frame, seed, max_redraws};
    *out = wrap(spk::r_autocorrelation(grids, spec, workers));
  });
}

spk_status spk_peak_background_ratio(const spk_image* ac, double feature_radius, double* ratio, int* kind) {
  return guard([&] {
    require(ac, "pattern");
    require(ratio, "ratio");
    const spk::PeakRatio r = spk::peak_background_ratio(ac->grid, feature_radius);
    *ratio = r.value;
    if (kind) *kind = static_cast<int>(r.kind);
  });
}

spk_status spk_speckle_contrast(const spk_image* img, double* out) {
  return guard([&] {
    require(img, "image");
    require(out, "out");
    *out = spk::speckle_contrast(img->grid);
  });
}

spk_status spk_aligned_ncc(const spk_image* a, const spk_image* b, double* out) {
  return guard([&] {
    require(a, "a");
    require(b, "b");
    require(out, "out");
    *out = spk::aligned_ncc(a->grid, b->grid);
  });
}

spk_status spk_reconstruct(const spk_config* cfg, const spk_image* pattern, const spk_image* truth, unsigned workers,
                           spk_image** out, double* residual) {
  return guard([&] {
    require(cfg, "config");
    require(pattern, "pattern");
    require(out, "out");
    auto constraint = spk::fourier_magnitude_from_ac(pattern->grid, cfg->cfg.magnitude);
    if (cfg->cfg.support) {
      spk::set_square_support(constraint, (std::min(pattern->grid.width(), pattern->grid.height()) + 1) / 2);
    }
    std::optional<spk::ImageGrid> t;
    if (truth) t = spk::pipeline::fit_truth(truth->grid, pattern->grid.width());
    const auto set = spk::best_of_restarts(constraint, cfg->cfg.schedule, t, cfg->cfg.seed, workers);
    if (residual) *residual = set.selected().fourier_residual;
    *out = wrap(set.selected().image);
  });
}

spk_status spk_config_create(spk_config** out) {
  return guard([&] {
    require(out, "out");
    *out = new spk_config{};
  });
}

spk_status spk_config_load(const char* path, spk_config** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new spk_config{spk::pipeline::PipelineConfig::load(path)};
  });
}

spk_status spk_config_set(spk_config* cfg, const char* key, const char* value) {
  return guard([&] {
    require(cfg, "config");
    require(key, "key");
    require(value, "value");
    cfg->cfg.set(key, value);
  });
}

void spk_config_destroy(spk_config* cfg) { delete cfg; }

spk_status spk_cmd_simulate(const spk_config* cfg, const char* out_dir, unsigned workers) {
  return guard([&] {
    require(cfg, "config");
    require(out_dir, "out_dir");
    spk::pipeline::cmd_simulate(cfg->cfg, out_dir, workers);
  });
}

spk_status spk_cmd_extract(const spk_config* cfg, const char* const* frames, size_t count, const char* method,
                           const char* out_dir, unsigned workers) {
  return guard([&] {
    require(cfg, "config");
    require(method, "method");
    require(out_dir, "out_dir");
    spk::pipeline::cmd_extract(cfg->cfg, paths(frames, count), spk::pipeline::parse_method(method), out_dir,
                               workers);
  });
}

spk_status spk_cmd_reconstruct(const spk_config* cfg, const char* pattern, const char* truth, const char* out_dir,
                               unsigned workers) {
  return guard([&] {
    require(cfg, "config");
    require(pattern, "pattern");
    require(out_dir, "out_dir");
    std::optional<std::filesystem::path> t;
    if (truth) t = truth;
    spk::pipeline::cmd_reconstruct(cfg->cfg, pattern, t, out_dir, workers);
  });
}

spk_status spk_cmd_metrics(const spk_config* cfg, const char* const* images, size_t count, const char* truth,
                           spk_line_callback emit, void* user) {
  return guard([&] {
    require(cfg, "config");
    std::optional<std::filesystem::path> t;
    if (truth) t = truth;
    for (const auto& r : spk::pipeline::cmd_metrics(cfg->cfg, paths(images, count), t)) {
      if (emit) emit(spk::format_metric(r).c_str(), user);
    }
  });
}

spk_status spk_cmd_pipeline(const spk_config* cfg, const char* out_dir, unsigned workers, spk_line_callback emit,
                            void* user) {
  return guard([&] {
    require(cfg, "config");
    const std::filesystem::path dir = out_dir ? std::filesystem::path(out_dir) : std::filesystem::path(cfg->cfg.output_dir);
    const auto result = spk::pipeline::cmd_pipeline(cfg->cfg, dir, workers);
    for (const auto& [k, v] : result.metrics) {
      if (emit) emit(spk::format_metric({k, v, {}}).c_str(), user);
    }
  });
}

}  // extern "C"
