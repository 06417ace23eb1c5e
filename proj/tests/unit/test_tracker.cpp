#include <doctest.h>

#include "bbt/bbs.hpp"
#include "bbt/error.hpp"
#include "bbt/tracker.hpp"
#include "oracle.hpp"
#include "sequences.hpp"

using namespace bbt;

namespace {

ImageRegion constant_region(int w, int h, float v) { return ImageRegion(w, h, 1, v); }

// Feeds a confidence trace through a gate; returns the frames at which it committed.
std::vector<std::int64_t> commits(ConfidenceGate<std::int64_t>& gate, const std::vector<double>& trace) {
  std::vector<std::int64_t> out;
  for (std::size_t t = 0; t < trace.size(); ++t) {
    const auto frame = static_cast<std::int64_t>(t + 1);
    if (auto c = gate.observe(frame, trace[t], [&] { return frame; })) out.push_back(frame);
  }
  return out;
}

}  // namespace

TEST_CASE("iou") {
  const BoundingBox a{0, 0, 10, 10};
  CHECK(iou(a, a) == 1.0);
  CHECK(iou(a, {20, 20, 5, 5}) == 0.0);
  CHECK(iou(a, {10, 0, 10, 10}) == 0.0);
  CHECK(iou(a, {5, 0, 10, 10}) == doctest::Approx(1.0 / 3.0));
  CHECK(iou({5, 0, 10, 10}, a) == iou(a, {5, 0, 10, 10}));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  for (int i = 0; i < 200; ++i) {
    const BoundingBox p{u(rng), u(rng), 1 + u(rng), 1 + u(rng)};
    const BoundingBox q{u(rng), u(rng), 1 + u(rng), 1 + u(rng)};
    const double v = iou(p, q);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(v == iou(q, p));
    const bool overlap = p.x < q.x + q.w && q.x < p.x + p.w && p.y < q.y + q.h && q.y < p.y + p.h;
    CHECK((v > 0.0) == overlap);
  }
}

TEST_CASE("evenly_spaced_indices") {
  CHECK(evenly_spaced_indices(30, 5) == std::vector<std::size_t>{0, 7, 15, 22, 29});
  CHECK(evenly_spaced_indices(1, 5) == std::vector<std::size_t>{0});
  CHECK(evenly_spaced_indices(3, 5) == std::vector<std::size_t>{0, 1, 2});
  CHECK(evenly_spaced_indices(2, 5) == std::vector<std::size_t>{0, 1});
  CHECK(evenly_spaced_indices(10, 1) == std::vector<std::size_t>{0});
  for (std::size_t n = 1; n <= 30; ++n) {
    const auto idx = evenly_spaced_indices(n, 5);
    CHECK(idx.front() == 0);
    CHECK(idx.back() == n - 1);
    CHECK(idx.size() == std::min<std::size_t>(n, 5));
  }
}

TEST_CASE("TemplateBuffer") {
  TemplateBuffer buf(30, constant_region(4, 4, 0.0f));
  for (int i = 1; i <= 1000; ++i) {
    buf.push(constant_region(4, 4, float(i % 97) / 97.0f + 0.001f));
    CHECK(buf.size() <= 30);
    CHECK(buf[0].data[0] == 0.0f);
  }
  CHECK(buf.size() == 30);
  CHECK(buf.newest().data[0] == doctest::Approx(float(1000 % 97) / 97.0f + 0.001f));
  // FIFO: entry 1 is the oldest survivor, pushed 28 updates before the newest.
  CHECK(buf[1].data[0] == doctest::Approx(float(972 % 97) / 97.0f + 0.001f));

  TemplateBuffer single(1, constant_region(4, 4, 0.5f));
  single.push(constant_region(4, 4, 0.9f));
  CHECK(single.size() == 1);
  CHECK(single[0].data[0] == 0.5f);
}

TEST_CASE("build_template_bag") {
  std::mt19937_64 rng(2);
  const ImageRegion t0 = test::noise_frame(9, 9, rng);
  SUBCASE("single template") {
    TemplateBuffer buf(30, t0);
    CHECK(build_template_bag(buf, 5, 9, 9, 3) == embed_region(t0, 3));
  }
  SUBCASE("duplicated templates duplicate points") {
    TemplateBuffer buf(30, t0);
    buf.push(t0);
    const PointSet bag = build_template_bag(buf, 5, 9, 9, 3);
    CHECK(bag.size() == 18);
    const PointSet single = embed_region(t0, 3);
    // Every candidate point finds an exact twin, and its nearest neighbor
    // in the bag is the first copy, which returns the favor.
    CHECK(compute_bbs(bag, single, 2.0).value == compute_bbs(single, single, 2.0).value);
  }
  SUBCASE("resizes to the target") {
    TemplateBuffer buf(30, t0);
    buf.push(test::noise_frame(15, 6, rng));
    const PointSet bag = build_template_bag(buf, 5, 12, 6, 3);
    CHECK(bag.size() == 2 * 4 * 2);
  }
  SUBCASE("target smaller than a patch") {
    TemplateBuffer buf(30, t0);
    CHECK_THROWS_AS(build_template_bag(buf, 5, 2, 9, 3), InvalidInput);
  }
}

TEST_CASE("adding a copy of the candidate never lowers its pair count") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const ImageRegion candidate = test::noise_frame(9, 9, rng);
    TemplateBuffer buf(30, test::noise_frame(9, 9, rng));
    buf.push(test::noise_frame(9, 9, rng));
    const PointSet cand = embed_region(candidate, 3);
    const std::size_t before = test::oracle_bbp_count(build_template_bag(buf, 5, 9, 9, 3), cand, 2.0);
    buf.push(candidate);
    const std::size_t after = test::oracle_bbp_count(build_template_bag(buf, 5, 9, 9, 3), cand, 2.0);
    CHECK(after >= before);
    CHECK(after == cand.size());
  }
}

TEST_CASE("ConfidenceGate template rule") {
  SUBCASE("steady confidence adds at t + f1") {
    ConfidenceGate<std::int64_t> gate(0.6, 5, true);
    CHECK(commits(gate, std::vector<double>(6, 0.7)) == std::vector<std::int64_t>{6});
  }
  SUBCASE("one low frame drops the pending candidate") {
    ConfidenceGate<std::int64_t> gate(0.6, 5, true);
    // Pending from frame 1 breaks at 4; frame 5 proposes again and commits at 10.
    const std::vector<double> trace{0.7, 0.7, 0.7, 0.5, 0.7, 0.7, 0.7, 0.7, 0.7, 0.7};
    CHECK(commits(gate, trace) == std::vector<std::int64_t>{10});
  }
  SUBCASE("committed payload is the proposing frame") {
    ConfidenceGate<std::int64_t> gate(0.6, 5, true);
    std::optional<std::int64_t> got;
    for (std::int64_t f = 1; f <= 6; ++f) {
      auto c = gate.observe(f, 0.6, [&] { return f * 100; });
      if (c) got = c;
    }
    CHECK(got == 100);
  }
  SUBCASE("commits at most once per window") {
    ConfidenceGate<std::int64_t> gate(0.6, 5, true);
    const auto c = commits(gate, std::vector<double>(40, 0.9));
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i] - c[i - 1] >= 5);
    CHECK(c.front() == 6);
  }
  SUBCASE("exactly gamma qualifies") {
    ConfidenceGate<std::int64_t> gate(0.6, 5, true);
    CHECK(commits(gate, std::vector<double>(6, 0.6)).size() == 1);
  }
}

TEST_CASE("ConfidenceGate reference rule") {
  ConfidenceGate<std::int64_t> gate(0.5, 9, false);
  CHECK(commits(gate, std::vector<double>(10, 0.55)) == std::vector<std::int64_t>{10});
  ConfidenceGate<std::int64_t> broken(0.5, 9, false);
  std::vector<double> trace(10, 0.55);
  trace[6] = 0.49;
  CHECK(commits(broken, trace).empty());
}

TEST_CASE("maybe_update_* drive the tracker state") {
  std::mt19937_64 rng(4);
  const ImageRegion frame0 = test::noise_frame(40, 40, rng);
  const BoundingBox box0{10, 10, 12, 12};
  TrackerConfig config;
  TrackerState state(config, frame0, box0);
  CHECK(state.ref_frame == frame0);
  CHECK(state.ref_box == box0);
  CHECK(state.ref_frame_index == 0);
  CHECK(state.confidence_history == std::vector<double>{1.0});

  const ImageRegion other = test::noise_frame(40, 40, rng);
  int templates = 0, refs = 0;
  for (int t = 1; t <= 10; ++t) {
    state.frame_index = t;
    state.confidence_history.push_back(0.7);
    templates += maybe_update_template(state, crop_region(other, {0, 0, 12, 12}));
    refs += maybe_update_reference(state, other, BoundingBox{double(t), 2, 12, 12});
  }
  CHECK(templates == 1);
  CHECK(state.buffer.size() == 2);
  CHECK(refs == 1);
  CHECK(state.ref_frame_index == 1);
  CHECK(state.ref_box == BoundingBox{1, 2, 12, 12});
}

TEST_CASE("forward_backward_confidence") {
  TrackerConfig config;
  SUBCASE("identity crop gives confidence 1") {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 10; ++trial) {
      const ImageRegion ref = test::noise_frame(80, 60, gen);
      const BoundingBox box{25, 18, 24, 21};
      Rng rng(trial);
      CHECK(forward_backward_confidence(crop_region(ref, box), ref, box, config, rng) == 1.0);
    }
  }
  SUBCASE("identity beats uncorrelated noise") {
    std::mt19937_64 gen(6);
    double same_sum = 0.0, other_sum = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const ImageRegion ref = test::noise_frame(80, 60, gen);
      const BoundingBox box{25, 18, 24, 21};
      const ImageRegion noise = test::noise_frame(24, 21, gen);
      Rng a(trial), b(trial);
      const double same = forward_backward_confidence(crop_region(ref, box), ref, box, config, a);
      const double other = forward_backward_confidence(noise, ref, box, config, b);
      CHECK(other >= 0.0);
      CHECK(other <= 1.0);
      CHECK(same >= other);
      same_sum += same;
      other_sum += other;
    }
    CHECK(same_sum / 20 == 1.0);
    CHECK(same_sum > other_sum);
  }
  SUBCASE("target found half a width away") {
    // Content of the shifted box, grid spacing w/2: best candidate sits at
    // offset +1, IoU with the reference box is 1/3.
    std::mt19937_64 gen(7);
    const ImageRegion ref = test::noise_frame(100, 60, gen);
    const BoundingBox box{30, 20, 20, 20};
    TrackerConfig half = config;
    half.fb_grid.radius_frac = 0.5;
    half.fb_grid.steps = 1;
    Rng rng(1);
    const double conf = forward_backward_confidence(crop_region(ref, {40, 20, 20, 20}), ref, box, half, rng);
    CHECK(conf == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("box too small for a patch") {
    std::mt19937_64 gen(8);
    const ImageRegion ref = test::noise_frame(30, 30, gen);
    Rng rng(1);
    CHECK(forward_backward_confidence(ref, ref, {1, 1, 2, 2}, config, rng) == 0.0);
  }
}

TEST_CASE("TrackerConfig validation") {
  TrackerConfig c;
  CHECK_NOTHROW(c.validate());
  TrackerConfig bad = c;
  bad.templates_per_frame = 31;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  bad = c;
  bad.gamma1 = 1.5;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  bad = c;
  bad.k_sample = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  bad = c;
  bad.motion.scale_sigma = -0.1;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
}

TEST_CASE("static sequence: no drift, full confidence") {
  const auto seq = test::static_sequence(12);
  TrackerConfig config;
  config.motion = MotionModel{0.0, 0.0};
  config.n_particles = 20;
  Tracker tracker(config, seq.frames[0], seq.ground_truth[0], 1);
  for (std::size_t t = 1; t < seq.frames.size(); ++t) {
    const TrackResult r = tracker.track_frame(seq.frames[t]);
    CHECK(r.box == seq.ground_truth[0]);
    CHECK(r.confidence == 1.0);
  }
  CHECK(tracker.state().buffer.size() == 3);  // commits at frames 6 and 11
}

TEST_CASE("tracker is deterministic and follows a slow target") {
  const auto seq = test::translating_square(12, 40, 1);
  TrackerConfig config;
  config.n_particles = 60;
  auto run = [&](std::uint64_t seed) {
    Tracker tracker(config, seq.frames[0], seq.ground_truth[0], seed);
    std::vector<TrackResult> out;
    for (std::size_t t = 1; t < seq.frames.size(); ++t) out.push_back(tracker.track_frame(seq.frames[t]));
    return out;
  };
  const auto a = run(9);
  const auto b = run(9);
  double mean_iou = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].box == b[i].box);
    CHECK(a[i].confidence == b[i].confidence);
    CHECK(a[i].confidence >= 0.0);
    CHECK(a[i].confidence <= 1.0);
    mean_iou += iou(a[i].box, seq.ground_truth[i + 1]);
  }
  CHECK(mean_iou / a.size() > 0.5);
}

TEST_CASE("bad frames leave the tracker untouched") {
  const auto seq = test::static_sequence(4);
  TrackerConfig config;
  config.n_particles = 10;
  Tracker tracker(config, seq.frames[0], seq.ground_truth[0], 2);
  Tracker twin(config, seq.frames[0], seq.ground_truth[0], 2);
  CHECK_THROWS_AS(tracker.track_frame(ImageRegion{}), FrameError);
  CHECK_THROWS_AS(tracker.track_frame(ImageRegion(64, 64, 3)), FrameError);
  CHECK(tracker.state().frame_index == 0);
  CHECK(tracker.track_frame(seq.frames[1]).box == twin.track_frame(seq.frames[1]).box);

  CHECK_THROWS_AS(Tracker(config, seq.frames[0], {0, 0, 0, 5}, 1), InvalidInput);
  TrackerConfig bad = config;
  bad.n_particles = 0;
  CHECK_THROWS_AS(Tracker(bad, seq.frames[0], seq.ground_truth[0], 1), InvalidInput);
}
