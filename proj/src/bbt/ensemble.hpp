#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bbt/tracker.hpp"

namespace bbt {

struct FusionCandidate {
  BoundingBox box;
  double confidence = 0.0;
};

/// Selects one candidate index given the previous fused box (absent before
/// the first fused frame).
using FusionFn = std::function<std::size_t(std::span<const FusionCandidate>,
                                           const std::optional<BoundingBox>&)>;

struct FusionWeights {
  double temporal = 1.0;    // alpha
  double confidence = 1.0;  // beta
};

/// Agreement + temporal smoothness + confidence selection:
///   score(c) = sum_{c' != c} iou(c, c') + alpha * iou(c, previous) + beta * conf(c)
/// Returns the argmax index, ties to the lowest index.
std::size_t fuse_frame_index(std::span<const FusionCandidate> candidates,
                             const std::optional<BoundingBox>& previous, FusionWeights weights = {});
BoundingBox fuse_frame(std::span<const FusionCandidate> candidates,
                       const std::optional<BoundingBox>& previous, FusionWeights weights = {});

struct TrackerOutput {
  std::int64_t frame = 0;
  BoundingBox box;
  double confidence = 0.0;
  bool ok = true;
};

/// Independent trackers advanced frame by frame; their outputs are fused into
/// one box per frame.
class Ensemble {
 public:
  /// Tracker i is seeded with master_seed + i.
  Ensemble(std::vector<TrackerConfig> configs, const ImageRegion& frame0, const BoundingBox& box0,
           std::uint64_t master_seed, FusionFn fusion = {});

  /// Advances every tracker and returns the fused box. A tracker that fails on
  /// this frame is left out of fusion for this frame only; when all fail the
  /// previous fused box is repeated.
  BoundingBox step(const ImageRegion& frame);

  std::size_t tracker_count() const { return trackers_.size(); }
  const Tracker& tracker(std::size_t i) const { return trackers_[i]; }
  /// Per-tracker outputs, frame 0 included (the given box, confidence 1).
  const std::vector<std::vector<TrackerOutput>>& history() const { return history_; }
  const std::vector<BoundingBox>& fused_history() const { return fused_; }

 private:
  std::vector<Tracker> trackers_;
  std::vector<std::vector<TrackerOutput>> history_;
  std::vector<BoundingBox> fused_;
  FusionFn fusion_;
  std::int64_t frame_ = 0;
};

/// One tracker per scale parameter, otherwise identical to base.
std::vector<TrackerConfig> ensemble_configs(const TrackerConfig& base,
                                          std::span<const double> scales);

}  // namespace bbt
