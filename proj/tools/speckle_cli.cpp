// speckle: command-line front end over the libspk C API.
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spk/spk.h"

namespace {

struct ConfigHandle {
  spk_config* cfg = nullptr;
  ~ConfigHandle() { spk_config_destroy(cfg); }
};

int fail(spk_status st) {
  std::fprintf(stderr, "speckle: %s error: %s\n", spk_status_name(st), spk_last_error());
  return st == SPK_ERR_INTERNAL ? 99 : static_cast<int>(st) + 1;  // 1 is reserved for usage errors
}

void print_line(const char* line, void*) { std::printf("%s\n", line); }

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speckle-correlation imaging through thin scattering layers"};
  app.set_version_flag("--version", std::string(spk_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::string seed;
  std::string method = "raut";
  std::string truth;
  std::string out_dir;
  unsigned workers = 1;
  std::vector<std::string> files;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Configuration file (key = value)");
    sub->add_option("--seed", seed, "Master seed, overrides the config");
    sub->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* simulate = app.add_subcommand("simulate", "Simulate speckle frames of the configured object");
  common(simulate);
  simulate->add_option("--out", out_dir, "Output directory")->required();

  auto* extract = app.add_subcommand("extract", "Autocorrelation from speckle frames");
  common(extract);
  extract->add_option("--method", method, "trueac or raut")->check(CLI::IsMember({"trueac", "raut"}));
  extract->add_option("--out", out_dir, "Output directory")->required();
  extract->add_option("frames", files, "Frame files (.spk or .pgm)")->required();

  auto* reconstruct = app.add_subcommand("reconstruct", "Phase retrieval from an autocorrelation pattern");
  common(reconstruct);
  reconstruct->add_option("--truth", truth, "Ground-truth object for oracle selection and scoring");
  reconstruct->add_option("--out", out_dir, "Output directory")->required();
  reconstruct->add_option("pattern", files, "Pattern file")->required()->expected(1);

  auto* metrics = app.add_subcommand("metrics", "Print figures of merit for images");
  common(metrics);
  metrics->add_option("--truth", truth, "Reference image for aligned_ncc");
  metrics->add_option("images", files, "Image files")->required();

  auto* pipeline = app.add_subcommand("pipeline", "simulate, extract, reconstruct and compare");
  common(pipeline);
  pipeline->add_option("--out", out_dir, "Output directory (defaults to output_dir in the config)");

  CLI11_PARSE(app, argc, argv);

  ConfigHandle h;
  spk_status st = config_path.empty() ? spk_config_create(&h.cfg) : spk_config_load(config_path.c_str(), &h.cfg);
  if (st != SPK_OK) return fail(st);
  if (!seed.empty() && (st = spk_config_set(h.cfg, "seed", seed.c_str())) != SPK_OK) return fail(st);

  const char* truth_c = truth.empty() ? nullptr : truth.c_str();
  const auto paths = c_strings(files);

  if (*simulate) {
    st = spk_cmd_simulate(h.cfg, out_dir.c_str(), workers);
  } else if (*extract) {
    st = spk_cmd_extract(h.cfg, paths.data(), paths.size(), method.c_str(), out_dir.c_str(), workers);
  } else if (*reconstruct) {
    st = spk_cmd_reconstruct(h.cfg, paths[0], truth_c, out_dir.c_str(), workers);
  } else if (*metrics) {
    st = spk_cmd_metrics(h.cfg, paths.data(), paths.size(), truth_c, print_line, nullptr);
  } else {
    st = spk_cmd_pipeline(h.cfg, out_dir.empty() ? nullptr : out_dir.c_str(), workers, print_line, nullptr);
  }
  return st == SPK_OK ? 0 : fail(st);
}
