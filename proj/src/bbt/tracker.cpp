#include "bbt/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bbt/error.hpp"

namespace bbt {

void TrackerConfig::validate() const {
  if (patch_size < 1) throw InvalidInput("patch_size must be >= 1");
  if (!(lambda >= 0.0)) throw InvalidInput("lambda must be >= 0");
  if (buffer_capacity < 1) throw InvalidInput("buffer_size must be >= 1");
  if (templates_per_frame < 1 || templates_per_frame > buffer_capacity)
    throw InvalidInput("templates_per_frame must lie in [1, buffer_size]");
  if (!(gamma1 >= 0.0 && gamma1 <= 1.0)) throw InvalidInput("gamma1 must lie in [0,1]");
  if (!(gamma2 >= 0.0 && gamma2 <= 1.0)) throw InvalidInput("gamma2 must lie in [0,1]");
  if (f1 < 0 || f2 < 0) throw InvalidInput("f1 and f2 must be >= 0");
  if (n_particles < 1) throw InvalidInput("particles must be >= 1");
  if (k_sample < 1) throw InvalidInput("sample_points must be >= 1");
  if (!(motion.pos_sigma_frac >= 0.0) || !(motion.scale_sigma >= 0.0))
    throw InvalidInput("motion noise must be >= 0");
  if (!(fb_grid.radius_frac >= 0.0) || fb_grid.steps < 0)
    throw InvalidInput("forward-backward grid must have radius >= 0 and steps >= 0");
}

TemplateBuffer::TemplateBuffer(std::size_t capacity, ImageRegion first) : capacity_(capacity) {
  if (capacity < 1) throw InvalidInput("template buffer capacity must be >= 1");
  entries_.push_back(std::move(first));
}

void TemplateBuffer::push(ImageRegion region) {
  if (capacity_ == 1) return;  // only the pinned template fits
  if (entries_.size() == capacity_) entries_.erase(entries_.begin() + 1);
  entries_.push_back(std::move(region));
}

TrackerState::TrackerState(const TrackerConfig& config, const ImageRegion& frame0,
                           const BoundingBox& box0)
    : buffer(config.buffer_capacity, crop_region(frame0, box0)),
      cloud(init_particles(box0, config.n_particles)),
      ref_frame(frame0),
      ref_box(box0),
      confidence_history{1.0},
      template_gate(config.gamma1, config.f1, true),
      reference_gate(config.gamma2, config.f2, false) {}

bool maybe_update_template(TrackerState& state, const ImageRegion& current_template) {
  auto committed = state.template_gate.observe(state.frame_index, state.confidence_history.back(),
                                               [&] { return current_template; });
  if (!committed) return false;
  state.buffer.push(std::move(*committed));
  return true;
}

bool maybe_update_reference(TrackerState& state, const ImageRegion& current_frame,
                            const BoundingBox& current_box) {
  auto committed = state.reference_gate.observe(
      state.frame_index, state.confidence_history.back(),
      [&] { return ReferenceCandidate{current_frame, current_box, state.frame_index}; });
  if (!committed) return false;
  state.ref_frame = std::move(committed->frame);
  state.ref_box = committed->box;
  state.ref_frame_index = committed->frame_index;
  return true;
}

std::vector<std::size_t> evenly_spaced_indices(std::size_t n, std::size_t l) {
  if (n == 0 || l == 0) return {};
  if (l == 1) return {0};
  std::vector<std::size_t> idx;
  idx.reserve(l);
  for (std::size_t i = 0; i < l; ++i) {
    const double pos = static_cast<double>(i) * static_cast<double>(n - 1) / static_cast<double>(l - 1);
    const auto r = static_cast<std::size_t>(std::lround(pos));
    if (idx.empty() || idx.back() != r) idx.push_back(r);
  }
  return idx;
}

PointSet build_template_bag(const TemplateBuffer& buffer, std::size_t l, int target_w,
                            int target_h, int k) {
  if (target_w < k || target_h < k)
    throw InvalidInput("template bag target " + std::to_string(target_w) + "x" +
                       std::to_string(target_h) + " is smaller than patch size");
  PointSet bag;
  for (std::size_t i : evenly_spaced_indices(buffer.size(), l))
    bag.append(embed_region(resize_region(buffer[i], target_w, target_h), k));
  return bag;
}

double forward_backward_confidence(const ImageRegion& current_target, const ImageRegion& ref_frame,
                                   const BoundingBox& ref_box, const TrackerConfig& config,
                                   Rng& rng) {
  const int k = config.patch_size;
  const PixelRect ref_px = pixel_rect(ref_box, ref_frame.width, ref_frame.height);
  if (ref_px.w < k || ref_px.h < k || current_target.empty()) return 0.0;

  const PointSet target = embed_region(resize_region(current_target, ref_px.w, ref_px.h), k);
  const std::size_t n_sample = std::min(config.k_sample, target.size());
  // One shared index subset: every candidate has the same patch grid as the
  // target, so identical content yields identical sampled sets.
  const std::vector<std::size_t> sample = sample_indices(target.size(), n_sample, rng);
  const PointSet target_sampled = target.subset(sample);

  struct Offset {
    int i, j;
  };
  const int steps = config.fb_grid.steps;
  std::vector<Offset> offsets;
  for (int j = -steps; j <= steps; ++j)
    for (int i = -steps; i <= steps; ++i) offsets.push_back({i, j});
  // Center first, then rings outward, so score ties favor the least displaced box.
  std::stable_sort(offsets.begin(), offsets.end(), [](const Offset& a, const Offset& b) {
    return a.i * a.i + a.j * a.j < b.i * b.i + b.j * b.j;
  });

  const double step_x = config.fb_grid.radius_frac * ref_box.w;
  const double step_y = config.fb_grid.radius_frac * ref_box.h;
  double best_score = -1.0;
  std::optional<BoundingBox> best_box;
  for (const Offset& o : offsets) {
    BoundingBox cand{ref_box.x + o.i * step_x, ref_box.y + o.j * step_y, ref_box.w, ref_box.h};
    cand = clamp_to_frame(cand, ref_frame.width, ref_frame.height, 1.0);
    ImageRegion crop;
    try {
      crop = crop_region(ref_frame, cand);
    } catch (const FrameError&) {
      continue;
    }
    if (crop.width != ref_px.w || crop.height != ref_px.h) crop = resize_region(crop, ref_px.w, ref_px.h);
    const PointSet q = embed_region(crop, k).subset(sample);
    const double score = compute_bbs(target_sampled, q, config.lambda).value;
    if (score > best_score) {
      best_score = score;
      best_box = cand;
    }
  }
  if (!best_box) return 0.0;
  return iou(*best_box, ref_box);
}

namespace {

const TrackerConfig& validated(const TrackerConfig& config) {
  config.validate();
  return config;
}

BoundingBox initial_box(const ImageRegion& frame0, const BoundingBox& box0) {
  validate_region(frame0);
  if (frame0.empty()) throw InvalidInput("first frame is empty");
  if (!(box0.w > 0.0 && box0.h > 0.0)) throw InvalidInput("initial box must have positive size");
  return clamp_to_frame(box0, frame0.width, frame0.height, 1.0);
}

}  // namespace

Tracker::Tracker(TrackerConfig config, const ImageRegion& frame0, const BoundingBox& box0,
                 std::uint64_t seed)
    : config_(validated(config)), state_(config_, frame0, initial_box(frame0, box0)), rng_(seed) {}

double Tracker::particle_score(const ImageRegion& frame, const BoundingBox& box, const PointSet& bag,
                               std::uint64_t seed) const {
  const ImageRegion crop = crop_region(frame, box);
  if (crop.width < config_.patch_size || crop.height < config_.patch_size) return 0.0;
  const PointSet candidate = embed_region(crop, config_.patch_size);
  const std::size_t k = std::min({config_.k_sample, bag.size(), candidate.size()});
  Rng rng(seed);
  const auto [bag_s, cand_s] = equalize_random(bag, candidate, k, rng);
  return compute_bbs(bag_s, cand_s, config_.lambda).value;
}

TrackResult Tracker::track_frame(const ImageRegion& frame) {
  if (frame.empty() || frame.channels != state_.ref_frame.channels)
    throw FrameError("frame is empty or has a different channel count than the first frame");
  if (frame.data.size() != static_cast<std::size_t>(frame.width) * frame.height * frame.channels)
    throw FrameError("frame data length does not match its dimensions");
  if (frame.width < config_.patch_size || frame.height < config_.patch_size)
    throw FrameError("frame is smaller than the patch size");

  const int k = config_.patch_size;
  Rng rng = rng_;
  ParticleCloud cloud = propagate(state_.cloud, config_.motion, frame.width, frame.height, rng);
  const auto [mean_w, mean_h] = mean_particle_size(cloud);
  const int bag_w = std::max(k, static_cast<int>(std::lround(mean_w)));
  const int bag_h = std::max(k, static_cast<int>(std::lround(mean_h)));
  const PointSet bag = build_template_bag(state_.buffer, config_.templates_per_frame, bag_w, bag_h, k);

  std::vector<std::uint64_t> seeds(cloud.size());
  for (auto& s : seeds) s = rng();
  std::vector<double> scores(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i)
    scores[i] = particle_score(frame, cloud.particles[i], bag, seeds[i]);

  cloud = weigh(std::move(cloud), scores);
  const BoundingBox box = map_estimate(cloud);
  ImageRegion current_template = crop_region(frame, box);
  const double confidence =
      forward_backward_confidence(current_template, state_.ref_frame, state_.ref_box, config_, rng);

  state_.frame_index += 1;
  state_.confidence_history.push_back(confidence);
  maybe_update_template(state_, current_template);
  maybe_update_reference(state_, frame, box);
  state_.cloud = resample(cloud, rng);
  rng_ = rng;
  return TrackResult{box, confidence};
}

}  // namespace bbt
