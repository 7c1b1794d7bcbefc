#include <chrono>
#include <cstdio>
#include <fstream>

#include "core/parallel.hpp"
#include "spk/error.hpp"
#include "spk/image_io.hpp"
#include "spk/pipeline.hpp"
#include "spk/seed.hpp"

namespace spk::pipeline {

namespace fs = std::filesystem;

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create directory '" + dir.string() + "': " + ec.message());
}

void echo_config(Manifest& m, const PipelineConfig& cfg) {
  for (const auto& [k, v] : cfg.echo()) m.add("config." + k, v);
}

std::string indexed(const char* stem, std::size_t i, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%03zu%s", stem, i, ext);
  return buf;
}

std::string ratio_text(const PeakRatio& r) {
  switch (r.kind) {
    case PeakRatio::Kind::Unbounded: return "inf";
    case PeakRatio::Kind::Flat: return "0";
    case PeakRatio::Kind::Finite: break;
  }
  return format_number(r.value);
}

template <class Fn>
auto run_stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), std::string("stage '") + name + "': " + e.what());
  }
}

}  // namespace

Method parse_method(const std::string& name) {
  if (name == "trueac") return Method::TrueAc;
  if (name == "raut") return Method::RAut;
  throw Error(ErrorCode::Config, "unknown extraction method '" + name + "' (expected trueac or raut)");
}

const char* method_name(Method m) { return m == Method::TrueAc ? "trueac" : "raut"; }

SimulateOutput cmd_simulate(const PipelineConfig& cfg, const fs::path& out, unsigned workers) {
  cfg.validate();
  Stopwatch clock;
  make_dir(out / "frames");

  SimulateOutput result;
  Manifest& m = result.manifest;
  m.add("toolkit.version", kToolkitVersion);
  m.add("stage", "simulate");
  echo_config(m, cfg);
  m.add("workers", std::to_string(workers));

  const ImageGrid object = make_object(cfg.object, cfg.optics.grid_size, cfg.optics.pixel_pitch);
  write_image(object, out / "object.spk");
  write_pgm(object, out / "object.pgm");
  result.object = out / "object.spk";

  const SpectralWeights weights = cfg.spectrum.weights();
  m.add("spectrum.samples", std::to_string(weights.wavelengths.size()));

  for (std::size_t f = 0; f < cfg.frames; ++f) {
    // A fresh screen per frame stands in for moving the diffuser.
    const DiffuserScreen screen = make_diffuser(cfg.optics, cfg.diffuser.rms_height, cfg.diffuser.correlation_length,
                                                derive_seed(cfg.seed, "diffuser", f));
    const ImageGrid psf = broadband_psf(cfg.optics, screen, weights, workers);
    ImageGrid frame = monochromatic_speckle(object, psf);
    if (cfg.noise_sigma > 0.0) {
      Rng rng(derive_seed(cfg.seed, "noise", f));
      const double sigma = cfg.noise_sigma * frame.mean();
      for (double& v : frame.samples()) v = std::max(0.0, v + sigma * rng.normal());
    }
    const std::string name = indexed("frame", f, ".spk");
    write_image(frame, out / "frames" / name);
    result.frames.push_back(out / "frames" / name);
    m.add("diag." + indexed("frame", f, "") + ".psf_sum", psf.sum());
    m.add("diag." + indexed("frame", f, "") + ".contrast", speckle_contrast(frame));
    if (f == 0) write_pgm(frame, out / "frames" / "frame_000.pgm");
  }

  m.add_file(out, "object.spk");
  m.add_file(out, "object.pgm");
  for (std::size_t f = 0; f < cfg.frames; ++f) m.add_file(out, fs::path("frames") / indexed("frame", f, ".spk"));
  m.add_file(out, fs::path("frames") / "frame_000.pgm");
  m.add("time.simulate", clock.seconds());
  m.write(out / "manifest.txt");
  return result;
}

ExtractOutput cmd_extract(const PipelineConfig& cfg, const std::vector<fs::path>& frame_paths, Method method,
                          const fs::path& out, unsigned workers) {
  cfg.validate();
  if (frame_paths.empty()) throw Error(ErrorCode::Input, "extract needs at least one frame file");
  Stopwatch clock;
  make_dir(out);

  std::vector<ImageGrid> frames;
  frames.reserve(frame_paths.size());
  std::size_t w0 = 0, h0 = 0;
  for (const auto& p : frame_paths) {
    ImageGrid frame = load_image_any(p, cfg.optics.pixel_pitch);
    if (frames.empty()) {
      w0 = frame.width();
      h0 = frame.height();
    } else if (frame.width() != w0 || frame.height() != h0) {
      throw Error(ErrorCode::Dimension, "frame '" + p.string() + "' differs in size from the first frame");
    }
    frames.push_back(cfg.crop > 0 ? crop_center(frame, cfg.crop) : std::move(frame));
  }

  ExtractOutput result;
  Manifest& m = result.manifest;
  m.add("toolkit.version", kToolkitVersion);
  m.add("stage", "extract");
  echo_config(m, cfg);
  m.add("workers", std::to_string(workers));
  m.add("method", method_name(method));
  m.add("frames", std::to_string(frames.size()));
  m.add("frame.width", std::to_string(frames[0].width()));
  m.add("frame.height", std::to_string(frames[0].height()));

  const std::size_t window = cfg.subregions.effective_window();
  m.add("window", std::to_string(window));
  SubRegionSpec spec = cfg.subregions;
  spec.seed = cfg.seed;

  ImageGrid pattern(1, 1, 1.0);
  if (method == Method::TrueAc) {
    pattern = true_autocorrelation(frames, window, workers);
  } else {
    RAutocorrelation rac = r_autocorrelation_detailed(frames, spec, workers);
    pattern = std::move(rac.pattern);
    m.add("windows_per_frame", std::to_string(spec.windows_per_frame));
    m.add("windows_total", std::to_string(rac.windows));
    m.add("redraws", std::to_string(rac.redraws));
    m.add("seed", std::to_string(spec.seed));
  }
  const PeakRatio ratio = peak_background_ratio(pattern, cfg.feature_radius);
  m.add("metric.peak_background_ratio", ratio_text(ratio));

  write_image(pattern, out / "pattern.spk");
  write_pgm(pattern, out / "pattern.pgm");
  m.add_file(out, "pattern.spk");
  m.add_file(out, "pattern.pgm");
  m.add("time.extract", clock.seconds());
  m.write(out / "manifest.txt");
  result.pattern = out / "pattern.spk";
  return result;
}

ReconstructOutput cmd_reconstruct(const PipelineConfig& cfg, const fs::path& pattern_path,
                                  const std::optional<fs::path>& truth_path, const fs::path& out, unsigned workers) {
  cfg.validate();
  Stopwatch clock;
  make_dir(out);
  const ImageGrid pattern = read_image(pattern_path);

  MagnitudeConstraint constraint = fourier_magnitude_from_ac(pattern, cfg.magnitude);
  if (cfg.support) {
    set_square_support(constraint, (std::min(pattern.width(), pattern.height()) + 1) / 2);
  }

  std::optional<ImageGrid> truth;
  if (truth_path) truth = fit_truth(load_image_any(*truth_path, pattern.pitch()), pattern.width());
  if (cfg.schedule.selector == Selector::Oracle && !truth) {
    throw Error(ErrorCode::Config, "schedule.selector = oracle requires --truth");
  }

  const RestartSet set = best_of_restarts(constraint, cfg.schedule, truth, cfg.seed, workers);
  const ReconstructionResult& best = set.selected();

  ReconstructOutput result;
  Manifest& m = result.manifest;
  m.add("toolkit.version", kToolkitVersion);
  m.add("stage", "reconstruct");
  echo_config(m, cfg);
  m.add("workers", std::to_string(workers));
  m.add("restarts", std::to_string(set.runs.size()));
  m.add("hio_iterations", std::to_string(best.hio_iterations));
  m.add("er_iterations", std::to_string(best.er_iterations));
  for (std::size_t i = 0; i < set.runs.size(); ++i) {
    m.add(indexed("restart", i, ".residual"), set.runs[i].fourier_residual);
  }
  m.add("selected_index", std::to_string(set.selected_index));
  m.add("selected_residual", best.fourier_residual);
  result.residual = best.fourier_residual;
  if (truth) {
    result.similarity = aligned_ncc(best.image, *truth);
    m.add("metric.aligned_ncc", *result.similarity);
  }

  write_image(best.image, out / "reconstruction.spk");
  write_pgm(best.image, out / "reconstruction.pgm");
  m.add_file(out, "reconstruction.spk");
  m.add_file(out, "reconstruction.pgm");
  m.add("time.reconstruct", clock.seconds());
  m.write(out / "manifest.txt");
  result.image = out / "reconstruction.spk";
  return result;
}

std::vector<MetricReport> cmd_metrics(const PipelineConfig& cfg, const std::vector<fs::path>& images,
                                      const std::optional<fs::path>& truth_path) {
  if (images.empty()) throw Error(ErrorCode::Input, "metrics needs at least one image");
  std::vector<MetricReport> out;
  for (const auto& path : images) {
    const ImageGrid img = load_image_any(path, cfg.optics.pixel_pitch);
    const std::string stem = path.filename().string();
    const std::vector<std::pair<std::string, std::string>> context = {{"file", path.string()}};
    if (img.mean() > 0.0) out.push_back({stem + ".speckle_contrast", speckle_contrast(img), context});
    if (img.width() == img.height() && img.width() % 2 == 1 &&
        cfg.feature_radius < 0.5 * static_cast<double>(img.width())) {
      const PeakRatio r = peak_background_ratio(img, cfg.feature_radius);
      out.push_back({stem + ".peak_background_ratio", r.value, context});
    }
    if (truth_path) {
      const ImageGrid truth = fit_truth(load_image_any(*truth_path, img.pitch()), img.width());
      out.push_back({stem + ".aligned_ncc", aligned_ncc(img, truth), context});
    }
  }
  return out;
}

PipelineOutput cmd_pipeline(const PipelineConfig& cfg, const fs::path& out, unsigned workers) {
  cfg.validate();
  Stopwatch clock;
  make_dir(out);
  PipelineOutput result;
  Manifest& m = result.manifest;
  m.add("toolkit.version", kToolkitVersion);
  m.add("stage", "pipeline");
  echo_config(m, cfg);
  m.add("workers", std::to_string(workers));

  const SimulateOutput sim = run_stage("simulate", [&] { return cmd_simulate(cfg, out / "simulate", workers); });
  m.append(sim.manifest, "simulate");

  struct Branch {
    Method method;
    ExtractOutput extract;
    ReconstructOutput recon;
  };
  std::vector<Branch> branches;
  for (Method method : {Method::RAut, Method::TrueAc}) {
    const std::string tag = method_name(method);
    Branch b{method, {}, {}};
    b.extract = run_stage("extract", [&] { return cmd_extract(cfg, sim.frames, method, out / ("extract_" + tag), workers); });
    m.append(b.extract.manifest, "extract_" + tag);
    b.recon = run_stage("reconstruct", [&] {
      return cmd_reconstruct(cfg, b.extract.pattern, sim.object, out / ("reconstruct_" + tag), workers);
    });
    m.append(b.recon.manifest, "reconstruct_" + tag);
    branches.push_back(std::move(b));
  }

  // Comparison table and centre-column profiles.
  std::ofstream table(out / "comparison.txt");
  std::vector<std::vector<double>> profiles;
  table << "method peak_background_ratio aligned_ncc fourier_residual\n";
  for (const auto& b : branches) {
    const std::string tag = method_name(b.method);
    const ImageGrid pattern = read_image(b.extract.pattern);
    const PeakRatio ratio = peak_background_ratio(pattern, cfg.feature_radius);
    const double ncc = b.recon.similarity.value_or(0.0);
    table << tag << ' ' << ratio_text(ratio) << ' ' << format_number(ncc) << ' ' << format_number(b.recon.residual)
          << '\n';
    result.metrics[tag + ".peak_background_ratio"] = ratio.value;
    result.metrics[tag + ".aligned_ncc"] = ncc;
    result.metrics[tag + ".fourier_residual"] = b.recon.residual;
    profiles.push_back(line_profile(pattern, pattern.width() / 2));
  }
  const ImageGrid frame0 = read_image(sim.frames.front());
  const ImageGrid central = cfg.crop > 0 ? crop_center(frame0, cfg.crop) : frame0;
  result.metrics["frame.speckle_contrast"] = speckle_contrast(central);
  table << '\n';
  for (const auto& [k, v] : result.metrics) {
    table << format_metric({k, v, {}}) << '\n';
    m.add("metric." + k, v);
  }
  table.close();
  if (!table) throw Error(ErrorCode::Io, "cannot write comparison table");

  std::ofstream csv(out / "profiles.csv");
  csv << "row,raut,trueac\n";
  for (std::size_t r = 0; r < profiles[0].size(); ++r) {
    csv << r << ',' << format_number(profiles[0][r]) << ',' << format_number(profiles[1][r]) << '\n';
  }
  csv.close();
  if (!csv) throw Error(ErrorCode::Io, "cannot write profiles");

  m.add_file(out, "comparison.txt");
  m.add_file(out, "profiles.csv");
  m.add("time.pipeline", clock.seconds());
  m.write(out / "manifest.txt");
  return result;
}

}  // namespace spk::pipeline
