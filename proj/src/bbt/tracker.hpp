#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "bbt/bbs.hpp"
#include "bbt/image.hpp"
#include "bbt/particle_filter.hpp"

namespace bbt {

struct ForwardBackwardGrid {
  /// Grid spacing as a fraction of the reference box side.
  double radius_frac = 0.1;
  /// Offsets per axis run over {-steps..steps}.
  int steps = 2;
};

struct TrackerConfig {
  int patch_size = 3;
  double lambda = 2.0;
  std::size_t buffer_capacity = 30;
  std::size_t templates_per_frame = 5;
  double gamma1 = 0.6;
  int f1 = 5;
  double gamma2 = 0.5;
  int f2 = 9;
  std::size_t n_particles = 200;
  std::size_t k_sample = 300;
  MotionModel motion;
  ForwardBackwardGrid fb_grid;

  /// Throws InvalidInput on violated invariants.
  void validate() const;
};

/// FIFO of templates whose first entry (the frame-0 template) is pinned.
class TemplateBuffer {
 public:
  TemplateBuffer(std::size_t capacity, ImageRegion first);

  /// Appends a template, evicting the oldest unpinned entry when full.
  void push(ImageRegion region);

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  const ImageRegion& operator[](std::size_t i) const { return entries_[i]; }
  const ImageRegion& newest() const { return entries_.back(); }

 private:
  std::size_t capacity_;
  std::vector<ImageRegion> entries_;
};

/// Commit rule shared by template and reference updates: a candidate proposed
/// at frame t commits at frame t + window iff every confidence in
/// [t, t + window] is >= gamma (and, with require_quiet, no commit happened in
/// the preceding window frames). One candidate is pending at a time; a broken
/// window drops it and the next qualifying frame proposes a new one.
template <class Payload>
class ConfidenceGate {
 public:
  struct Pending {
    std::int64_t frame;
    Payload payload;
  };

  ConfidenceGate(double gamma, int window, bool require_quiet)
      : gamma_(gamma), window_(window), require_quiet_(require_quiet) {}

  /// Feeds the confidence of `frame`. make_payload() is called only if this
  /// frame becomes the pending candidate. Returns the committed payload, if any.
  template <class MakePayload>
  std::optional<Payload> observe(std::int64_t frame, double confidence, MakePayload&& make_payload) {
    std::optional<Payload> committed;
    if (pending_) {
      if (confidence < gamma_) {
        pending_.reset();
      } else if (frame - pending_->frame >= window_) {
        const bool quiet = !require_quiet_ || !last_commit_ || frame - *last_commit_ >= window_;
        if (quiet) {
          committed = std::move(pending_->payload);
          last_commit_ = frame;
        }
        pending_.reset();
      }
    }
    if (!pending_ && confidence >= gamma_) pending_ = Pending{frame, make_payload()};
    return committed;
  }

  const std::optional<Pending>& pending() const { return pending_; }
  std::optional<std::int64_t> last_commit() const { return last_commit_; }

 private:
  double gamma_;
  std::int64_t window_;
  bool require_quiet_;
  std::optional<Pending> pending_;
  std::optional<std::int64_t> last_commit_;
};

struct ReferenceCandidate {
  ImageRegion frame;
  BoundingBox box;
  std::int64_t frame_index = 0;
};

struct TrackerState {
  TemplateBuffer buffer;
  ParticleCloud cloud;
  ImageRegion ref_frame;
  BoundingBox ref_box;
  std::int64_t ref_frame_index = 0;
  std::int64_t frame_index = 0;
  /// Indexed by frame; frame 0 is trusted (confidence 1).
  std::vector<double> confidence_history;
  ConfidenceGate<ImageRegion> template_gate;
  ConfidenceGate<ReferenceCandidate> reference_gate;

  TrackerState(const TrackerConfig& config, const ImageRegion& frame0, const BoundingBox& box0);
};

/// Applies the template rule for the state's current frame and latest
/// confidence. Returns true when a template was committed to the buffer.
bool maybe_update_template(TrackerState& state, const ImageRegion& current_template);

/// Applies the reference-frame rule; on commit the reference frame and box are
/// replaced by the candidate's.
bool maybe_update_reference(TrackerState& state, const ImageRegion& current_frame,
                            const BoundingBox& current_box);

/// l buffer indices evenly spaced over [0, n-1] (rounded to nearest, duplicates
/// collapsed, always including 0 and n-1 when l >= 2).
std::vector<std::size_t> evenly_spaced_indices(std::size_t n, std::size_t l);

/// Resizes the selected templates to target size, embeds them and concatenates
/// every point into one bag.
PointSet build_template_bag(const TemplateBuffer& buffer, std::size_t l, int target_w,
                            int target_h, int k);

/// Matches the current target back into the reference frame over a grid of
/// reference-sized boxes around ref_box; returns IoU(best box, ref_box).
double forward_backward_confidence(const ImageRegion& current_target, const ImageRegion& ref_frame,
                                   const BoundingBox& ref_box, const TrackerConfig& config,
                                   Rng& rng);

struct TrackResult {
  BoundingBox box;
  double confidence = 0.0;
};

/// Single best-buddies tracker (one particle filter with its template buffer
/// and reference frame).
class Tracker {
 public:
  Tracker(TrackerConfig config, const ImageRegion& frame0, const BoundingBox& box0,
          std::uint64_t seed);

  /// Advances one frame. Throws FrameError for frames that cannot be
  /// processed; the tracker state is left as it was in that case.
  TrackResult track_frame(const ImageRegion& frame);

  const TrackerState& state() const { return state_; }
  const TrackerConfig& config() const { return config_; }

 private:
  double particle_score(const ImageRegion& frame, const BoundingBox& box, const PointSet& bag,
                        std::uint64_t seed) const;

  TrackerConfig config_;
  TrackerState state_;
  Rng rng_;
};

}  // namespace bbt
