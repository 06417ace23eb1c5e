// bbt: command-line front end over the C API.
//
//   bbt track <sequence_dir> [--config f] [--seed n] [--out dir] [--set k=v]...
//   bbt eval <dataset_dir> ...
//   bbt synth-bias | synth-timing | synth-convergence ...
//
// Exit codes: 0 success, 1 internal error, 2 input error.

#include <cstdint>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bbt/bbt.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "bbt_out";
  std::vector<std::string> overrides;
  std::string input;
};

void add_common(CLI::App* cmd, Options& opts) {
  cmd->add_option("--config", opts.config_path, "key = value config file");
  cmd->add_option("--seed", opts.seed, "master seed (overrides the config)");
  cmd->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--set", opts.overrides, "override a config key, key=value (repeatable)");
}

int exit_code(bbt_status s) {
  switch (s) {
    case BBT_OK: return kExitOk;
    case BBT_ERR_INVALID_INPUT:
    case BBT_ERR_INGESTION:
    case BBT_ERR_NULL_ARGUMENT: return kExitInput;
    default: return kExitInternal;
  }
}

int report(bbt_status s, const std::string& what) {
  if (s != BBT_OK) std::cerr << "bbt: " << what << ": " << bbt_status_name(s) << ": " << bbt_last_error() << '\n';
  return exit_code(s);
}

struct ConfigDeleter {
  void operator()(bbt_config_t* c) const { bbt_config_destroy(c); }
};
using ConfigPtr = std::unique_ptr<bbt_config_t, ConfigDeleter>;

int build_config(const Options& opts, ConfigPtr& out) {
  bbt_config raw = nullptr;
  if (bbt_status s = bbt_config_create(&raw); s != BBT_OK) return report(s, "config");
  out.reset(raw);
  if (!opts.config_path.empty()) {
    if (bbt_status s = bbt_config_load_file(out.get(), opts.config_path.c_str()); s != BBT_OK)
      return report(s, "config " + opts.config_path);
  }
  for (const auto& kv : opts.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "bbt: --set expects key=value, got '" << kv << "'\n";
      return kExitInput;
    }
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    if (bbt_status s = bbt_config_set(out.get(), key.c_str(), value.c_str()); s != BBT_OK)
      return report(s, "--set " + kv);
  }
  if (opts.seed) {
    const std::string seed = std::to_string(*opts.seed);
    if (bbt_status s = bbt_config_set(out.get(), "seed", seed.c_str()); s != BBT_OK) return report(s, "--seed");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Best-buddies similarity and tracker"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(bbt_version()));

  Options opts;
  auto* track = app.add_subcommand("track", "track one OTB-style sequence");
  track->add_option("sequence_dir", opts.input, "directory with img/ and groundtruth_rect.txt")->required();
  add_common(track, opts);

  auto* eval = app.add_subcommand("eval", "one-pass evaluation over a directory of sequences");
  eval->add_option("dataset_dir", opts.input, "directory of sequence directories")->required();
  add_common(eval, opts);

  auto* bias = app.add_subcommand("synth-bias", "set-size bias sweep on synthetic GMM point sets");
  add_common(bias, opts);
  auto* timing = app.add_subcommand("synth-timing", "BBS timing sweep on synthetic GMM point sets");
  add_common(timing, opts);
  auto* convergence = app.add_subcommand("synth-convergence", "BBS of a fixed set against a growing one");
  add_common(convergence, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  ConfigPtr config;
  if (int rc = build_config(opts, config); rc != kExitOk) return rc;

  const char* out = opts.out_dir.c_str();
  if (track->parsed()) return report(bbt_run_track(config.get(), opts.input.c_str(), out), "track");
  if (eval->parsed()) return report(bbt_run_eval(config.get(), opts.input.c_str(), out), "eval");
  if (bias->parsed()) return report(bbt_run_synth(config.get(), BBT_SYNTH_BIAS, out), "synth-bias");
  if (timing->parsed()) return report(bbt_run_synth(config.get(), BBT_SYNTH_TIMING, out), "synth-timing");
  if (convergence->parsed())
    return report(bbt_run_synth(config.get(), BBT_SYNTH_CONVERGENCE, out), "synth-convergence");
  return kExitInternal;
}
