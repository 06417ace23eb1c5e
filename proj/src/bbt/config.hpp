#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bbt/tracker.hpp"

namespace bbt {

struct SynthConfig {
  std::size_t base_n = 200;
  std::vector<double> ratios{1, 2, 5, 10, 50};
  std::size_t trials = 100;
  std::size_t timing_trials = 5;
  std::size_t timing_repetitions = 5;
  std::size_t convergence_p = 20;
  std::vector<std::size_t> convergence_q_sizes{20, 1000, 100000};
  std::size_t convergence_trials = 20;
};

/// Everything a CLI run needs. Loaded from a flat `key = value` file
/// (`#` comments, `[a, b, c]` lists) and overridden per key.
///
/// Keys: patch_size, lambda, buffer_size, templates_per_frame, gamma1, f1,
/// gamma2, f2, particles, sample_points, pos_sigma_frac, fb_radius_frac,
/// fb_steps, scales, seed, synth_base_n, synth_ratios, synth_trials,
/// synth_timing_trials, synth_timing_repetitions, synth_convergence_p,
/// synth_convergence_q_sizes, synth_convergence_trials.
struct RunConfig {
  TrackerConfig tracker;
  std::vector<double> scales{0.0, 0.0, 0.01, 0.03};
  std::uint64_t seed = 0;
  SynthConfig synth;

  /// Sets one key from its textual value; throws InvalidInput for unknown
  /// keys or unparsable values.
  void set(std::string_view key, std::string_view value);
  /// Applies "key=value".
  void apply_override(std::string_view assignment);
  void load_text(std::string_view text);
  /// Throws IngestionError when the file cannot be read.
  void load_file(const std::filesystem::path& path);

  void validate() const;
  std::vector<TrackerConfig> ensemble() const;

  /// Config echo with a stable key order.
  nlohmann::ordered_json to_json() const;
};

}  // namespace bbt
