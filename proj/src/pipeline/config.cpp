#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "spk/error.hpp"
#include "spk/pipeline.hpp"

namespace spk::pipeline {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
  throw Error(ErrorCode::Config, "config key '" + key + "': '" + value + "' is not " + expected);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v, "a number");
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v, "a non-negative integer");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v, "a boolean");
}

struct Field {
  const char* key;
  std::function<void(PipelineConfig&, const std::string& key, const std::string&)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

#define SPK_REAL(name, member)                                                                       \
  Field {                                                                                            \
    name, [](PipelineConfig& c, const std::string& k, const std::string& v) { c.member = to_double(k, v); }, \
        [](const PipelineConfig& c) { return format_number(c.member); }                             \
  }
#define SPK_COUNT(name, member)                                                                      \
  Field {                                                                                            \
    name,                                                                                            \
        [](PipelineConfig& c, const std::string& k, const std::string& v) {                          \
          c.member = static_cast<decltype(c.member)>(to_u64(k, v));                                  \
        },                                                                                           \
        [](const PipelineConfig& c) { return std::to_string(c.member); }                            \
  }
#define SPK_TEXT(name, member)                                                                       \
  Field {                                                                                            \
    name, [](PipelineConfig& c, const std::string&, const std::string& v) { c.member = v; },         \
        [](const PipelineConfig& c) { return c.member; }                                             \
  }
#define SPK_FLAG(name, member)                                                                       \
  Field {                                                                                            \
    name, [](PipelineConfig& c, const std::string& k, const std::string& v) { c.member = to_bool(k, v); }, \
        [](const PipelineConfig& c) { return std::string(c.member ? "true" : "false"); }            \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      SPK_COUNT("seed", seed),
      SPK_COUNT("frames", frames),
      SPK_COUNT("crop", crop),
      SPK_TEXT("output_dir", output_dir),
      SPK_REAL("optics.object_distance", optics.object_distance),
      SPK_REAL("optics.camera_distance", optics.camera_distance),
      SPK_REAL("optics.iris_diameter", optics.iris_diameter),
      SPK_REAL("optics.pixel_pitch", optics.pixel_pitch),
      SPK_COUNT("optics.grid_size", optics.grid_size),
      SPK_REAL("optics.refractive_index_minus_one", optics.refractive_index_minus_one),
      SPK_REAL("diffuser.rms_height", diffuser.rms_height),
      SPK_REAL("diffuser.correlation_length", diffuser.correlation_length),
      SPK_REAL("spectrum.center", spectrum.center),
      SPK_REAL("spectrum.fwhm", spectrum.fwhm),
      SPK_REAL("spectrum.lo", spectrum.lo),
      SPK_REAL("spectrum.hi", spectrum.hi),
      SPK_REAL("spectrum.step", spectrum.step),
      SPK_TEXT("object.kind", object.kind),
      SPK_TEXT("object.letter", object.letter),
      SPK_COUNT("object.height", object.height),
      SPK_COUNT("object.separation", object.separation),
      SPK_TEXT("object.path", object.path),
      SPK_REAL("noise.sigma", noise_sigma),
      SPK_COUNT("subregions.window_size", subregions.window_size),
      SPK_COUNT("subregions.windows_per_frame", subregions.windows_per_frame),
      SPK_COUNT("subregions.max_redraws", subregions.max_redraws),
      SPK_REAL("schedule.beta_start", schedule.beta_start),
      SPK_REAL("schedule.beta_end", schedule.beta_end),
      SPK_REAL("schedule.beta_step", schedule.beta_step),
      SPK_COUNT("schedule.iters_per_beta", schedule.iters_per_beta),
      SPK_COUNT("schedule.er_iters", schedule.er_iters),
      SPK_COUNT("schedule.restarts", schedule.restarts),
      Field{"schedule.selector",
            [](PipelineConfig& c, const std::string& k, const std::string& v) {
              if (v == "blind") {
                c.schedule.selector = Selector::Blind;
              } else if (v == "oracle") {
                c.schedule.selector = Selector::Oracle;
              } else {
                bad_value(k, v, "'blind' or 'oracle'");
              }
            },
            [](const PipelineConfig& c) {
              return std::string(c.schedule.selector == Selector::Oracle ? "oracle" : "blind");
            }},
      SPK_REAL("analysis.feature_radius", feature_radius),
      SPK_REAL("retrieval.taper_fraction", magnitude.taper_fraction),
      SPK_FLAG("retrieval.interpolate_dc", magnitude.interpolate_dc),
      SPK_FLAG("retrieval.support", support),
  };
  return table;
}

#undef SPK_REAL
#undef SPK_COUNT
#undef SPK_TEXT
#undef SPK_FLAG

}  // namespace

void PipelineConfig::set(const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (key == f.key) {
      f.set(*this, key, value);
      if (key == "analysis.feature_radius") magnitude.feature_radius = feature_radius;
      return;
    }
  }
  throw Error(ErrorCode::Config, "unknown config key '" + key + "'");
}

std::vector<std::pair<std::string, std::string>> PipelineConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : fields()) out.emplace_back(f.key, f.get(*this));
  return out;
}

void PipelineConfig::validate() const {
  auto wrap = [](const auto& fn) {
    try {
      fn();
    } catch (const Error& e) {
      throw Error(ErrorCode::Config, e.what());
    }
  };
  wrap([&] { optics.validate(); });
  wrap([&] { spectrum.weights().validate(); });
  wrap([&] { schedule.validate(); });
  if (frames < 1) throw Error(ErrorCode::Config, "config key 'frames' must be >= 1");
  if (!(diffuser.rms_height >= 0.0)) throw Error(ErrorCode::Config, "config key 'diffuser.rms_height' must be >= 0");
  if (!(diffuser.correlation_length >= optics.pixel_pitch * (1.0 - 1e-12))) {
    throw Error(ErrorCode::Config, "config key 'diffuser.correlation_length' is below optics.pixel_pitch");
  }
  if (crop > optics.grid_size) throw Error(ErrorCode::Config, "config key 'crop' exceeds optics.grid_size");
  if (subregions.window_size < 3) throw Error(ErrorCode::Config, "config key 'subregions.window_size' must be >= 3");
  if (subregions.windows_per_frame < 1) {
    throw Error(ErrorCode::Config, "config key 'subregions.windows_per_frame' must be >= 1");
  }
  if (!(feature_radius >= 0.0) ||
      feature_radius >= 0.5 * static_cast<double>(subregions.effective_window())) {
    throw Error(ErrorCode::Config, "config key 'analysis.feature_radius' must be below half the window size");
  }
  if (!(noise_sigma >= 0.0)) throw Error(ErrorCode::Config, "config key 'noise.sigma' must be >= 0");
  if (object.kind != "two_point" && object.kind != "letter" && object.kind != "pgm") {
    throw Error(ErrorCode::Config, "config key 'object.kind' must be two_point, letter or pgm");
  }
}

PipelineConfig PipelineConfig::parse(const std::string& text) {
  PipelineConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::Config, "config line " + std::to_string(number) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorCode::Config, "config line " + std::to_string(number) + ": empty key");
    cfg.set(key, trim(line.substr(eq + 1)));
  }
  return cfg;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

}  // namespace spk::pipeline
