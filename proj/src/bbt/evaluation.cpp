#include "bbt/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "bbt/error.hpp"

namespace bbt {
namespace fs = std::filesystem;

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ',' || c == '\t' || c == ' ' || c == '\r'; };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_sep(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool is_frame_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".jpg" || ext == ".jpeg" || ext == ".png";
}

void append_number(std::string& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace

std::vector<BoundingBox> parse_ground_truth(std::string_view text) {
  std::vector<BoundingBox> boxes;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const std::string where = "ground truth line " + std::to_string(line_no) + " (\"" +
                              std::string(line.substr(0, 80)) + "\")";
    if (fields.size() != 4) throw IngestionError(where + ": expected 4 numbers");
    double v[4];
    for (int i = 0; i < 4; ++i) {
      const auto f = fields[i];
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v[i]);
      if (res.ec != std::errc{} || res.ptr != f.data() + f.size())
        throw IngestionError(where + ": '" + std::string(f) + "' is not a number");
    }
    if (!(v[2] > 0.0 && v[3] > 0.0)) throw IngestionError(where + ": width and height must be positive");
    boxes.push_back({v[0] - 1.0, v[1] - 1.0, v[2], v[3]});
    if (end == text.size()) break;
  }
  return boxes;
}

std::string format_ground_truth(std::span<const BoundingBox> boxes) {
  std::string out;
  for (const auto& b : boxes) {
    append_number(out, b.x + 1.0);
    out += ',';
    append_number(out, b.y + 1.0);
    out += ',';
    append_number(out, b.w);
    out += ',';
    append_number(out, b.h);
    out += '\n';
  }
  return out;
}

Sequence load_sequence(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IngestionError("sequence directory not found: " + dir.string());
  const fs::path img_dir = dir / "img";
  const fs::path gt_path = dir / "groundtruth_rect.txt";
  if (!fs::is_directory(img_dir)) throw IngestionError("missing img/ directory in " + dir.string());
  if (!fs::is_regular_file(gt_path)) throw IngestionError("missing groundtruth_rect.txt in " + dir.string());

  Sequence seq;
  seq.name = dir.filename().string();
  if (seq.name.empty()) seq.name = dir.parent_path().filename().string();
  for (const auto& entry : fs::directory_iterator(img_dir)) {
    if (entry.is_regular_file() && is_frame_file(entry.path())) seq.frames.push_back(entry.path());
  }
  std::sort(seq.frames.begin(), seq.frames.end());
  if (seq.frames.empty()) throw IngestionError("no JPEG/PNG frames in " + img_dir.string());

  std::ifstream in(gt_path, std::ios::binary);
  if (!in) throw IngestionError("cannot read " + gt_path.string());
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  try {
    seq.ground_truth = parse_ground_truth(text);
  } catch (const IngestionError& e) {
    throw IngestionError(gt_path.string() + ": " + e.what());
  }
  if (seq.ground_truth.size() != seq.frames.size())
    throw IngestionError(gt_path.string() + ": " + std::to_string(seq.ground_truth.size()) +
                         " ground-truth boxes for " + std::to_string(seq.frames.size()) + " frames");
  return seq;
}

ImageRegion load_frame(const fs::path& path) {
  const cv::Mat raw = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (raw.empty()) throw FrameError("cannot decode frame " + path.string());
  double scale = 1.0;
  switch (raw.depth()) {
    case CV_8U: scale = 1.0 / 255.0; break;
    case CV_16U: scale = 1.0 / 65535.0; break;
    default: throw FrameError("unsupported pixel depth in " + path.string());
  }
  cv::Mat img;
  raw.convertTo(img, CV_32F, scale);
  const int src_channels = img.channels();
  const int channels = src_channels >= 3 ? 3 : 1;
  ImageRegion out(img.cols, img.rows, channels);
  for (int y = 0; y < img.rows; ++y) {
    const float* row = img.ptr<float>(y);
    for (int x = 0; x < img.cols; ++x) {
      const float* px = row + static_cast<std::ptrdiff_t>(x) * src_channels;
      if (channels == 1) {
        out.at(x, y) = std::clamp(px[0], 0.0f, 1.0f);
      } else {
        // OpenCV stores BGR(A).
        out.at(x, y, 0) = std::clamp(px[2], 0.0f, 1.0f);
        out.at(x, y, 1) = std::clamp(px[1], 0.0f, 1.0f);
        out.at(x, y, 2) = std::clamp(px[0], 0.0f, 1.0f);
      }
    }
  }
  return out;
}

void save_frame(const fs::path& path, const ImageRegion& frame) {
  validate_region(frame);
  cv::Mat img(frame.height, frame.width, frame.channels == 3 ? CV_8UC3 : CV_8UC1);
  for (int y = 0; y < frame.height; ++y) {
    auto* row = img.ptr<unsigned char>(y);
    for (int x = 0; x < frame.width; ++x) {
      auto to_byte = [](float v) { return static_cast<unsigned char>(std::lround(v * 255.0f)); };
      if (frame.channels == 1) {
        row[x] = to_byte(frame.at(x, y));
      } else {
        row[3 * x + 0] = to_byte(frame.at(x, y, 2));
        row[3 * x + 1] = to_byte(frame.at(x, y, 1));
        row[3 * x + 2] = to_byte(frame.at(x, y, 0));
      }
    }
  }
  if (!cv::imwrite(path.string(), img)) throw IngestionError("cannot write frame " + path.string());
}

std::vector<double> default_thresholds() {
  std::vector<double> t(21);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i) / 20.0;
  return t;
}

SuccessCurve success_curve(std::span<const BoundingBox> predicted,
                           std::span<const BoundingBox> ground_truth,
                           std::span<const double> thresholds) {
  if (predicted.size() != ground_truth.size())
    throw InvalidInput("success_curve: " + std::to_string(predicted.size()) + " predictions for " +
                       std::to_string(ground_truth.size()) + " ground-truth boxes");
  if (predicted.size() < 2) throw InvalidInput("success_curve: need at least two frames (frame 0 is not scored)");
  std::vector<double> overlaps;
  overlaps.reserve(predicted.size() - 1);
  for (std::size_t t = 1; t < predicted.size(); ++t) overlaps.push_back(iou(predicted[t], ground_truth[t]));

  SuccessCurve curve;
  curve.thresholds.assign(thresholds.begin(), thresholds.end());
  for (double th : thresholds) {
    const auto hits = std::count_if(overlaps.begin(), overlaps.end(), [th](double o) { return o > th; });
    curve.rates.push_back(static_cast<double>(hits) / static_cast<double>(overlaps.size()));
  }
  return curve;
}

double auc(const SuccessCurve& curve) {
  if (curve.thresholds.size() < 2 || curve.thresholds.size() != curve.rates.size())
    throw InvalidInput("auc: need at least two aligned thresholds");
  double area = 0.0;
  for (std::size_t i = 1; i < curve.thresholds.size(); ++i) {
    const double dt = curve.thresholds[i] - curve.thresholds[i - 1];
    area += 0.5 * dt * (curve.rates[i] + curve.rates[i - 1]);
  }
  return area;
}

SuccessCurve mean_curve(std::span<const SuccessCurve> curves) {
  if (curves.empty()) throw InvalidInput("mean_curve: no curves");
  SuccessCurve out{curves.front().thresholds, std::vector<double>(curves.front().rates.size(), 0.0)};
  for (const auto& c : curves) {
    if (c.thresholds != out.thresholds) throw InvalidInput("mean_curve: threshold grids differ");
    for (std::size_t i = 0; i < c.rates.size(); ++i) out.rates[i] += c.rates[i];
  }
  for (double& r : out.rates) r /= static_cast<double>(curves.size());
  return out;
}

OracleBounds oracle_upper_bounds(std::span<const TrajectorySet> sequences,
                                 std::span<const double> thresholds) {
  if (sequences.empty()) throw InvalidInput("oracle_upper_bounds: no sequences");
  const std::size_t n_trackers = sequences.front().trackers.size();
  if (n_trackers == 0) throw InvalidInput("oracle_upper_bounds: no trackers");

  std::vector<std::vector<SuccessCurve>> per_tracker(n_trackers);
  std::vector<SuccessCurve> per_sequence_best;
  std::vector<SuccessCurve> per_frame_best;
  for (const auto& seq : sequences) {
    if (seq.trackers.size() != n_trackers) throw InvalidInput("oracle_upper_bounds: tracker count differs");
    double best_auc = -1.0;
    std::size_t best = 0;
    for (std::size_t k = 0; k < n_trackers; ++k) {
      per_tracker[k].push_back(success_curve(seq.trackers[k], seq.ground_truth, thresholds));
      const double a = auc(per_tracker[k].back());
      if (a > best_auc) {
        best_auc = a;
        best = k;
      }
    }
    per_sequence_best.push_back(per_tracker[best].back());

    std::vector<BoundingBox> frame_best(seq.ground_truth.size());
    for (std::size_t t = 0; t < seq.ground_truth.size(); ++t) {
      double best_iou = -1.0;
      for (std::size_t k = 0; k < n_trackers; ++k) {
        const double o = iou(seq.trackers[k][t], seq.ground_truth[t]);
        if (o > best_iou) {
          best_iou = o;
          frame_best[t] = seq.trackers[k][t];
        }
      }
    }
    per_frame_best.push_back(success_curve(frame_best, seq.ground_truth, thresholds));
  }

  OracleBounds bounds;
  bounds.per_sequence_auc = auc(mean_curve(per_sequence_best));
  bounds.per_frame_auc = auc(mean_curve(per_frame_best));
  for (const auto& curves : per_tracker) bounds.single_tracker_auc.push_back(auc(mean_curve(curves)));
  bounds.best_single_auc =
      *std::max_element(bounds.single_tracker_auc.begin(), bounds.single_tracker_auc.end());
  return bounds;
}

SequenceRun run_sequence(const Sequence& sequence, const std::vector<TrackerConfig>& configs,
                         std::uint64_t seed) {
  if (sequence.frames.empty() || sequence.ground_truth.size() != sequence.frames.size())
    throw InvalidInput("sequence " + sequence.name + " has no frames or misaligned ground truth");
  Ensemble ensemble(configs, load_frame(sequence.frames.front()), sequence.ground_truth.front(), seed);
  for (std::size_t t = 1; t < sequence.frames.size(); ++t) {
    ImageRegion frame;
    try {
      frame = load_frame(sequence.frames[t]);
    } catch (const FrameError&) {
      // Undecodable frame: every tracker fails this step and keeps its state.
    }
    ensemble.step(frame);
  }
  SequenceRun run;
  run.name = sequence.name;
  run.trackers = ensemble.history();
  run.fused = ensemble.fused_history();
  run.ground_truth = sequence.ground_truth;
  run.curve = success_curve(run.fused, run.ground_truth, default_thresholds());
  run.auc = auc(run.curve);
  return run;
}

OpeReport run_ope(std::span<const Sequence> sequences, const std::vector<TrackerConfig>& configs,
                  std::uint64_t seed) {
  OpeReport report;
  for (const auto& seq : sequences) {
    try {
      report.runs.push_back(run_sequence(seq, configs, seed));
    } catch (const Error& e) {
      report.failures.push_back({seq.name, e.what()});
    }
  }
  if (report.runs.empty()) {
    report.mean_curve = SuccessCurve{default_thresholds(), std::vector<double>(21, 0.0)};
    return report;
  }
  std::vector<SuccessCurve> curves;
  std::vector<TrajectorySet> trajectories;
  for (const auto& run : report.runs) {
    curves.push_back(run.curve);
    TrajectorySet ts;
    ts.ground_truth = run.ground_truth;
    for (const auto& hist : run.trackers) {
      std::vector<BoundingBox> boxes;
      for (const auto& out : hist) boxes.push_back(out.box);
      ts.trackers.push_back(std::move(boxes));
    }
    trajectories.push_back(std::move(ts));
  }
  report.mean_curve = mean_curve(curves);
  report.overall_auc = auc(report.mean_curve);
  const auto thresholds = default_thresholds();
  report.oracle = oracle_upper_bounds(trajectories, thresholds);
  return report;
}

}  // namespace bbt
