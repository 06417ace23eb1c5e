#include "bbt/ensemble.hpp"

#include "bbt/error.hpp"

namespace bbt {

std::size_t fuse_frame_index(std::span<const FusionCandidate> candidates,
                             const std::optional<BoundingBox>& previous, FusionWeights weights) {
  if (candidates.empty()) throw InvalidInput("fuse_frame: no candidates");
  std::size_t best = 0;
  double best_score = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    double score = 0.0;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      if (j != i) score += iou(candidates[i].box, candidates[j].box);
    }
    if (previous) score += weights.temporal * iou(candidates[i].box, *previous);
    score += weights.confidence * candidates[i].confidence;
    if (i == 0 || score > best_score) {
      best = i;
      best_score = score;
    }
  }
  return best;
}

BoundingBox fuse_frame(std::span<const FusionCandidate> candidates,
                       const std::optional<BoundingBox>& previous, FusionWeights weights) {
  return candidates[fuse_frame_index(candidates, previous, weights)].box;
}

Ensemble::Ensemble(std::vector<TrackerConfig> configs, const ImageRegion& frame0,
                   const BoundingBox& box0, std::uint64_t master_seed, FusionFn fusion)
    : fusion_(std::move(fusion)) {
  if (configs.empty()) throw InvalidInput("ensemble needs at least one tracker");
  if (!fusion_) {
    fusion_ = [](std::span<const FusionCandidate> c, const std::optional<BoundingBox>& prev) {
      return fuse_frame_index(c, prev);
    };
  }
  trackers_.reserve(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    trackers_.emplace_back(std::move(configs[i]), frame0, box0, master_seed + i);
    const BoundingBox start = trackers_.back().state().ref_box;
    history_.push_back({TrackerOutput{0, start, 1.0, true}});
  }
  fused_.push_back(trackers_.front().state().ref_box);
}

BoundingBox Ensemble::step(const ImageRegion& frame) {
  ++frame_;
  std::vector<FusionCandidate> candidates;
  for (std::size_t i = 0; i < trackers_.size(); ++i) {
    TrackerOutput out{frame_, history_[i].back().box, 0.0, false};
    try {
      const TrackResult r = trackers_[i].track_frame(frame);
      out.box = r.box;
      out.confidence = r.confidence;
      out.ok = true;
      candidates.push_back({r.box, r.confidence});
    } catch (const FrameError&) {
    }
    history_[i].push_back(out);
  }
  BoundingBox fused = fused_.back();
  if (!candidates.empty()) {
    const std::size_t pick = fusion_(candidates, std::optional<BoundingBox>(fused_.back()));
    if (pick >= candidates.size()) throw InvalidInput("fusion function returned an invalid index");
    fused = candidates[pick].box;
  }
  fused_.push_back(fused);
  return fused;
}

std::vector<TrackerConfig> ensemble_configs(const TrackerConfig& base,
                                            std::span<const double> scales) {
  std::vector<TrackerConfig> configs;
  for (double s : scales) {
    TrackerConfig c = base;
    c.motion.scale_sigma = s;
    configs.push_back(c);
  }
  return configs;
}

}  // namespace bbt
