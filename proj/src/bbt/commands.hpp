#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bbt/config.hpp"
#include "bbt/evaluation.hpp"

namespace bbt {

enum class SynthKind { Bias, Timing, Convergence };

/// Tracks one OTB sequence; writes boxes_<name>.csv and results.json.
SequenceRun run_track_command(const std::filesystem::path& sequence_dir, const RunConfig& config,
                              const std::filesystem::path& out_dir);

/// Evaluates every sequence directory under dataset_dir; writes results.json,
/// curve.csv and one boxes_<name>.csv per sequence. Throws IngestionError
/// when no sequence could be evaluated.
OpeReport run_eval_command(const std::filesystem::path& dataset_dir, const RunConfig& config,
                           const std::filesystem::path& out_dir);

/// Runs a synthetic experiment; writes synth_<kind>.csv and synth_<kind>.json.
void run_synth_command(SynthKind kind, const RunConfig& config, const std::filesystem::path& out_dir);

std::string to_string(SynthKind kind);

/// Subdirectories of dataset_dir that look like sequences (contain img/),
/// sorted by name.
std::vector<std::filesystem::path> find_sequences(const std::filesystem::path& dataset_dir);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace bbt
