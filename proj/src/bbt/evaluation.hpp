#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bbt/ensemble.hpp"

namespace bbt {

/// OTB-style sequence: `img/` with zero-padded numbered frames plus
/// `groundtruth_rect.txt`. Boxes are stored 0-based.
struct Sequence {
  std::string name;
  std::vector<std::filesystem::path> frames;
  std::vector<BoundingBox> ground_truth;
};

/// Parses "x,y,w,h" lines (commas, tabs or spaces) in 1-based pixel
/// coordinates. Blank lines are skipped. Throws IngestionError naming the line.
std::vector<BoundingBox> parse_ground_truth(std::string_view text);
/// Inverse of parse_ground_truth.
std::string format_ground_truth(std::span<const BoundingBox> boxes);

Sequence load_sequence(const std::filesystem::path& dir);

/// Decodes a JPEG/PNG frame into [0,1] floats (grayscale stays 1 channel,
/// color becomes RGB, alpha is dropped).
ImageRegion load_frame(const std::filesystem::path& path);
/// Writes an 8-bit PNG/JPEG (format from the extension).
void save_frame(const std::filesystem::path& path, const ImageRegion& frame);

struct SuccessCurve {
  std::vector<double> thresholds;
  std::vector<double> rates;
};

/// 21 thresholds 0.00, 0.05, ..., 1.00.
std::vector<double> default_thresholds();

/// rate(t) = fraction of scored frames with IoU strictly greater than t.
/// Frame 0 is the given initialization and is not scored.
SuccessCurve success_curve(std::span<const BoundingBox> predicted,
                           std::span<const BoundingBox> ground_truth,
                           std::span<const double> thresholds);

/// Trapezoidal area under the curve.
double auc(const SuccessCurve& curve);

/// Pointwise mean of curves sharing one threshold grid.
SuccessCurve mean_curve(std::span<const SuccessCurve> curves);

/// Per-tracker boxes of one sequence, aligned with its ground truth.
struct TrajectorySet {
  std::vector<std::vector<BoundingBox>> trackers;
  std::vector<BoundingBox> ground_truth;
};

struct OracleBounds {
  /// Best tracker chosen per sequence (by AUC), averaged over sequences.
  double per_sequence_auc = 0.0;
  /// Best box chosen per frame (by IoU with ground truth).
  double per_frame_auc = 0.0;
  /// AUC of the mean curve of each fixed tracker, and the best of those.
  std::vector<double> single_tracker_auc;
  double best_single_auc = 0.0;
};

OracleBounds oracle_upper_bounds(std::span<const TrajectorySet> sequences,
                                 std::span<const double> thresholds);

struct SequenceRun {
  std::string name;
  std::vector<std::vector<TrackerOutput>> trackers;
  std::vector<BoundingBox> fused;
  std::vector<BoundingBox> ground_truth;
  SuccessCurve curve;
  double auc = 0.0;
};

struct SequenceFailure {
  std::string name;
  std::string message;
};

struct OpeReport {
  std::vector<SequenceRun> runs;
  std::vector<SequenceFailure> failures;
  SuccessCurve mean_curve;
  double overall_auc = 0.0;
  OracleBounds oracle;
};

/// Runs the ensemble once from the first ground-truth box and scores the
/// fused trajectory.
SequenceRun run_sequence(const Sequence& sequence, const std::vector<TrackerConfig>& configs,
                         std::uint64_t seed);

/// One-pass evaluation over sequences. Sequences that fail are reported and
/// left out of the mean. Every sequence is run with the same master seed.
OpeReport run_ope(std::span<const Sequence> sequences, const std::vector<TrackerConfig>& configs,
                  std::uint64_t seed);

}  // namespace bbt
