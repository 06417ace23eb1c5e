#include <doctest.h>

#include <fstream>

#include "bbt/error.hpp"
#include "bbt/evaluation.hpp"
#include "sequences.hpp"

using namespace bbt;
namespace fs = std::filesystem;

namespace {

SuccessCurve curve_of(std::vector<double> rates) {
  SuccessCurve c;
  c.thresholds = default_thresholds();
  c.rates = std::move(rates);
  return c;
}

}  // namespace

TEST_CASE("parse_ground_truth") {
  SUBCASE("1-based to 0-based") {
    const auto boxes = parse_ground_truth("213,253,34,81\n");
    REQUIRE(boxes.size() == 1);
    CHECK(boxes[0] == BoundingBox{212, 252, 34, 81});
  }
  SUBCASE("tabs and spaces") {
    CHECK(parse_ground_truth("213\t253\t34\t81") == parse_ground_truth("213,253,34,81"));
    CHECK(parse_ground_truth("213 253  34 81\r\n") == parse_ground_truth("213,253,34,81"));
  }
  SUBCASE("blank lines are skipped") {
    CHECK(parse_ground_truth("1,1,5,5\n\n2,2,5,5\n").size() == 2);
  }
  SUBCASE("errors name the line") {
    try {
      parse_ground_truth("1,1,5,5\n1,1,0,5\n");
      FAIL("expected an error");
    } catch (const IngestionError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_ground_truth("1,2,3\n"), IngestionError);
    CHECK_THROWS_AS(parse_ground_truth("1,2,x,4\n"), IngestionError);
  }
  SUBCASE("round trip of parsed boxes") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> px(1, 640);
    std::string text;
    for (int i = 0; i < 200; ++i)
      text += std::to_string(px(rng)) + "," + std::to_string(px(rng)) + "\t" + std::to_string(px(rng)) + " " +
              std::to_string(px(rng)) + "\n";
    text += "12.5,7.25,30.75,40.5\n1,1,1,1\n";
    const auto boxes = parse_ground_truth(text);
    CHECK(parse_ground_truth(format_ground_truth(boxes)) == boxes);
  }
}

TEST_CASE("success_curve and auc") {
  const auto th = default_thresholds();
  REQUIRE(th.size() == 21);
  CHECK(th.front() == 0.0);
  CHECK(th.back() == 1.0);
  CHECK(th[10] == doctest::Approx(0.5));

  const std::vector<BoundingBox> gt(11, BoundingBox{10, 10, 20, 20});
  SUBCASE("perfect prediction") {
    const SuccessCurve c = success_curve(gt, gt, th);
    for (std::size_t i = 0; i + 1 < th.size(); ++i) CHECK(c.rates[i] == 1.0);
    CHECK(c.rates.back() == 0.0);
    CHECK(auc(c) == doctest::Approx(0.975));
  }
  SUBCASE("all disjoint") {
    std::vector<BoundingBox> pred(11, BoundingBox{100, 100, 5, 5});
    pred[0] = gt[0];
    const SuccessCurve c = success_curve(pred, gt, th);
    for (double r : c.rates) CHECK(r == 0.0);
    CHECK(auc(c) == 0.0);
  }
  SUBCASE("half at 0.8, half at 0.2") {
    // Frame 0 is not scored; frames 1..10 alternate.
    std::vector<BoundingBox> pred(gt);
    for (std::size_t t = 1; t < 11; ++t) {
      // Same height; the width w' against 20 overlapping from x=10 gives IoU w'/20.
      pred[t].w = t % 2 ? 16.0 : 4.0;
    }
    const SuccessCurve c = success_curve(pred, gt, th);
    CHECK(c.rates[10] == doctest::Approx(0.5));
    for (std::size_t i = 1; i < c.rates.size(); ++i) CHECK(c.rates[i] <= c.rates[i - 1]);
  }
  SUBCASE("frame 0 does not count") {
    std::vector<BoundingBox> pred(gt);
    pred[0] = {300, 300, 5, 5};
    CHECK(auc(success_curve(pred, gt, th)) == doctest::Approx(0.975));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(success_curve(std::vector<BoundingBox>(3), gt, th), InvalidInput);
    CHECK_THROWS_AS(success_curve(std::vector<BoundingBox>(1), std::vector<BoundingBox>(1), th), InvalidInput);
  }
  SUBCASE("auc of reference curves") {
    CHECK(auc(curve_of(std::vector<double>(21, 1.0))) == doctest::Approx(1.0));
    CHECK(auc(curve_of(std::vector<double>(21, 0.0))) == 0.0);
    std::vector<double> linear;
    for (double t : th) linear.push_back(1.0 - t);
    CHECK(auc(curve_of(linear)) == doctest::Approx(0.5));
  }
  SUBCASE("mean curve is linear in AUC") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> a(21), b(21);
    for (auto& v : a) v = u(rng);
    for (auto& v : b) v = u(rng);
    const std::vector<SuccessCurve> both{curve_of(a), curve_of(b)};
    CHECK(auc(mean_curve(both)) == doctest::Approx((auc(both[0]) + auc(both[1])) / 2));
  }
}

TEST_CASE("oracle_upper_bounds") {
  const auto th = default_thresholds();
  SUBCASE("identical trackers") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 6.0);
    TrajectorySet ts;
    for (int t = 0; t < 15; ++t) ts.ground_truth.push_back({20, 20, 10, 10});
    std::vector<BoundingBox> traj;
    for (int t = 0; t < 15; ++t) traj.push_back({20 + u(rng), 20 + u(rng), 10, 10});
    ts.trackers = {traj, traj, traj};
    const OracleBounds b = oracle_upper_bounds(std::vector<TrajectorySet>{ts}, th);
    CHECK(b.per_sequence_auc == doctest::Approx(b.best_single_auc));
    CHECK(b.per_frame_auc == doctest::Approx(b.best_single_auc));
    CHECK(b.single_tracker_auc.size() == 3);
  }
  SUBCASE("dominance chain on random trajectories") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> jitter(-8.0, 8.0);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<TrajectorySet> seqs(1 + trial % 4);
      for (auto& ts : seqs) {
        for (int t = 0; t < 12; ++t) ts.ground_truth.push_back({30 + 2.0 * t, 30, 12, 12});
        ts.trackers.resize(3);
        for (auto& tr : ts.trackers)
          for (const auto& g : ts.ground_truth) tr.push_back({g.x + jitter(rng), g.y + jitter(rng), g.w, g.h});
      }
      const OracleBounds b = oracle_upper_bounds(seqs, th);
      CHECK(b.per_frame_auc >= b.per_sequence_auc - 1e-12);
      CHECK(b.per_sequence_auc >= b.best_single_auc - 1e-12);
      for (double a : b.single_tracker_auc) CHECK(b.best_single_auc >= a);
    }
  }
}

TEST_CASE("frame I/O") {
  const fs::path dir = test::scratch_dir("frame_io");
  std::mt19937_64 rng(5);
  SUBCASE("grayscale PNG round trip") {
    ImageRegion f = test::noise_frame(17, 9, rng);
    for (auto& v : f.data) v = std::round(v * 255.0f) / 255.0f;
    save_frame(dir / "g.png", f);
    const ImageRegion back = load_frame(dir / "g.png");
    CHECK(back.width == 17);
    CHECK(back.height == 9);
    CHECK(back.channels == 1);
    for (std::size_t i = 0; i < f.data.size(); ++i) CHECK(back.data[i] == doctest::Approx(f.data[i]).epsilon(1e-6));
  }
  SUBCASE("color stays RGB") {
    ImageRegion f(4, 3, 3, 0.0f);
    for (int y = 0; y < 3; ++y)
      for (int x = 0; x < 4; ++x) f.at(x, y, 0) = 1.0f;  // pure red
    save_frame(dir / "c.png", f);
    const ImageRegion back = load_frame(dir / "c.png");
    CHECK(back.channels == 3);
    CHECK(back.at(2, 1, 0) == 1.0f);
    CHECK(back.at(2, 1, 2) == 0.0f);
  }
  SUBCASE("undecodable file") {
    std::ofstream(dir / "bad.png") << "not an image";
    CHECK_THROWS_AS(load_frame(dir / "bad.png"), FrameError);
  }
}

TEST_CASE("load_sequence") {
  const fs::path root = test::scratch_dir("load_sequence");
  const auto seq = test::static_sequence(4);
  SUBCASE("valid directory") {
    test::write_otb_sequence(root / "s", seq);
    const Sequence s = load_sequence(root / "s");
    CHECK(s.name == "s");
    CHECK(s.frames.size() == 4);
    CHECK(s.ground_truth == seq.ground_truth);
    CHECK(s.frames[0].filename() == "0001.png");
  }
  SUBCASE("count mismatch") {
    test::write_otb_sequence(root / "m", seq);
    std::ofstream(root / "m" / "groundtruth_rect.txt") << "1,1,5,5\n";
    CHECK_THROWS_AS(load_sequence(root / "m"), IngestionError);
  }
  SUBCASE("missing ground truth") {
    test::write_otb_sequence(root / "g", seq);
    fs::remove(root / "g" / "groundtruth_rect.txt");
    CHECK_THROWS_AS(load_sequence(root / "g"), IngestionError);
  }
  SUBCASE("missing directory") { CHECK_THROWS_AS(load_sequence(root / "nope"), IngestionError); }
}

TEST_CASE("run_ope on synthetic sequences") {
  const fs::path root = test::scratch_dir("run_ope");
  test::write_otb_sequence(root / "still", test::static_sequence(8));
  std::vector<Sequence> seqs{load_sequence(root / "still")};
  TrackerConfig config;
  config.motion = MotionModel{0.0, 0.0};
  config.n_particles = 10;

  const OpeReport report = run_ope(seqs, {config, config}, 1);
  REQUIRE(report.runs.size() == 1);
  CHECK(report.failures.empty());
  CHECK(report.overall_auc == doctest::Approx(0.975));
  CHECK(report.oracle.per_frame_auc >= report.oracle.per_sequence_auc);
  CHECK(report.runs[0].trackers.size() == 2);
  CHECK(report.runs[0].fused.size() == 8);

  Sequence broken = seqs[0];
  broken.name = "broken";
  broken.ground_truth.pop_back();
  seqs.push_back(broken);
  const OpeReport with_failure = run_ope(seqs, {config}, 1);
  CHECK(with_failure.runs.size() == 1);
  REQUIRE(with_failure.failures.size() == 1);
  CHECK(with_failure.failures[0].name == "broken");
  CHECK(with_failure.overall_auc == doctest::Approx(0.975));
}
