#include "bbt/commands.hpp"

#include <charconv>
#include <fstream>
#include <iostream>

#include "bbt/error.hpp"
#include "bbt/synthetic.hpp"

namespace bbt {
namespace fs = std::filesystem;

namespace {

using Json = nlohmann::ordered_json;

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error("cannot create output directory " + dir.string());
}

std::string config_comment(const std::string& command, const RunConfig& config) {
  return "# bbt " + command + " seed=" + std::to_string(config.seed) + " config=" + config.to_json().dump() + "\n";
}

void write_json(const fs::path& path, const Json& doc) {
  auto out = open_output(path);
  out << doc.dump(2) << '\n';
}

Json curve_json(const SuccessCurve& c) { return Json{{"thresholds", c.thresholds}, {"rates", c.rates}}; }

Json oracle_json(const OracleBounds& o) {
  return Json{{"per_sequence_auc", o.per_sequence_auc},
              {"per_frame_auc", o.per_frame_auc},
              {"best_single_auc", o.best_single_auc},
              {"single_tracker_auc", o.single_tracker_auc}};
}

// Boxes are written in the 1-based OTB convention, like groundtruth_rect.txt.
void write_boxes_csv(const fs::path& path, const SequenceRun& run, const std::string& command,
                     const RunConfig& config) {
  auto out = open_output(path);
  out << config_comment(command, config);
  out << "frame,source,x,y,w,h,confidence\n";
  auto row = [&](std::size_t frame, const std::string& source, const BoundingBox& b, const std::string& conf) {
    out << frame << ',' << source << ',' << format_double(b.x + 1.0) << ',' << format_double(b.y + 1.0) << ','
        << format_double(b.w) << ',' << format_double(b.h) << ',' << conf << '\n';
  };
  for (std::size_t t = 0; t < run.fused.size(); ++t) {
    for (std::size_t k = 0; k < run.trackers.size(); ++k) {
      const TrackerOutput& o = run.trackers[k][t];
      row(t, "tracker" + std::to_string(k), o.box, o.ok ? format_double(o.confidence) : std::string("failed"));
    }
    row(t, "fused", run.fused[t], "");
  }
}

void write_curve_csv(const fs::path& path, const SuccessCurve& curve, const std::string& command,
                     const RunConfig& config) {
  auto out = open_output(path);
  out << config_comment(command, config);
  out << "threshold,rate\n";
  for (std::size_t i = 0; i < curve.thresholds.size(); ++i)
    out << format_double(curve.thresholds[i]) << ',' << format_double(curve.rates[i]) << '\n';
}

Json sequence_json(const SequenceRun& run) {
  return Json{{"name", run.name}, {"frames", run.fused.size()}, {"auc", run.auc}};
}

synth::BiasParams bias_params(const RunConfig& config, std::size_t trials) {
  synth::BiasParams p;
  p.base_n = config.synth.base_n;
  p.ratios = config.synth.ratios;
  p.trials = trials;
  p.seed = config.seed;
  return p;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string to_string(SynthKind kind) {
  switch (kind) {
    case SynthKind::Bias: return "bias";
    case SynthKind::Timing: return "timing";
    case SynthKind::Convergence: return "convergence";
  }
  return "unknown";
}

std::vector<fs::path> find_sequences(const fs::path& dataset_dir) {
  if (!fs::is_directory(dataset_dir)) throw IngestionError("dataset directory not found: " + dataset_dir.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dataset_dir)) {
    if (entry.is_directory() && fs::is_directory(entry.path() / "img")) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

SequenceRun run_track_command(const fs::path& sequence_dir, const RunConfig& config, const fs::path& out_dir) {
  config.validate();
  const Sequence seq = load_sequence(sequence_dir);
  const auto configs = config.ensemble();
  SequenceRun run = run_sequence(seq, configs, config.seed);

  ensure_dir(out_dir);
  write_boxes_csv(out_dir / ("boxes_" + run.name + ".csv"), run, "track", config);

  TrajectorySet ts;
  ts.ground_truth = run.ground_truth;
  for (const auto& hist : run.trackers) {
    std::vector<BoundingBox> boxes;
    for (const auto& o : hist) boxes.push_back(o.box);
    ts.trackers.push_back(std::move(boxes));
  }
  const auto thresholds = default_thresholds();
  const OracleBounds oracle = oracle_upper_bounds(std::span<const TrajectorySet>(&ts, 1), thresholds);

  Json doc{{"command", "track"},
           {"seed", config.seed},
           {"config", config.to_json()},
           {"sequence", sequence_json(run)},
           {"auc", run.auc},
           {"curve", curve_json(run.curve)},
           {"oracle", oracle_json(oracle)}};
  write_json(out_dir / "results.json", doc);
  return run;
}

OpeReport run_eval_command(const fs::path& dataset_dir, const RunConfig& config, const fs::path& out_dir) {
  config.validate();
  const auto dirs = find_sequences(dataset_dir);
  if (dirs.empty()) throw IngestionError("no sequence directories (with img/) under " + dataset_dir.string());

  std::vector<Sequence> sequences;
  std::vector<SequenceFailure> load_failures;
  for (const auto& dir : dirs) {
    try {
      sequences.push_back(load_sequence(dir));
    } catch (const Error& e) {
      load_failures.push_back({dir.filename().string(), e.what()});
    }
  }
  OpeReport report = run_ope(sequences, config.ensemble(), config.seed);
  report.failures.insert(report.failures.begin(), load_failures.begin(), load_failures.end());
  for (const auto& f : report.failures) std::cerr << "warning: sequence " << f.name << " skipped: " << f.message << '\n';
  if (report.runs.empty()) throw IngestionError("no sequence under " + dataset_dir.string() + " could be evaluated");

  ensure_dir(out_dir);
  for (const auto& run : report.runs) write_boxes_csv(out_dir / ("boxes_" + run.name + ".csv"), run, "eval", config);
  write_curve_csv(out_dir / "curve.csv", report.mean_curve, "eval", config);

  Json seqs = Json::array();
  for (const auto& run : report.runs) seqs.push_back(sequence_json(run));
  Json failures = Json::array();
  for (const auto& f : report.failures) failures.push_back(Json{{"name", f.name}, {"error", f.message}});
  Json doc{{"command", "eval"},
           {"seed", config.seed},
           {"config", config.to_json()},
           {"overall_auc", report.overall_auc},
           {"curve", curve_json(report.mean_curve)},
           {"sequences", seqs},
           {"failures", failures},
           {"oracle", oracle_json(report.oracle)}};
  write_json(out_dir / "results.json", doc);
  return report;
}

void run_synth_command(SynthKind kind, const RunConfig& config, const fs::path& out_dir) {
  config.validate();
  const std::string name = "synth_" + to_string(kind);
  const std::string command = "synth-" + to_string(kind);
  Json rows = Json::array();
  std::string csv = config_comment(command, config);

  if (kind == SynthKind::Convergence) {
    synth::ConvergenceParams p;
    p.p_size = config.synth.convergence_p;
    p.q_sizes = config.synth.convergence_q_sizes;
    p.trials = config.synth.convergence_trials;
    p.seed = config.seed;
    csv += "q_size,p_size,mean,std,trials\n";
    for (const auto& r : synth::verify_convergence_claim(p)) {
      csv += std::to_string(r.q_size) + ',' + std::to_string(p.p_size) + ',' + format_double(r.mean) + ',' +
             format_double(r.std) + ',' + std::to_string(r.trials) + '\n';
      rows.push_back(Json{{"q_size", r.q_size}, {"p_size", p.p_size}, {"mean", r.mean}, {"std", r.std}, {"trials", r.trials}});
    }
  } else {
    synth::BiasCurve curve;
    std::string value_col = "mean";
    std::string spread_col = "std";
    if (kind == SynthKind::Bias) {
      curve = synth::run_bias_experiment(bias_params(config, config.synth.trials));
    } else {
      synth::TimingParams tp;
      tp.sweep = bias_params(config, config.synth.timing_trials);
      tp.repetitions = config.synth.timing_repetitions;
      curve = synth::run_timing_experiment(tp);
      value_col = "median_seconds";
      spread_col = "std_seconds";
    }
    csv += "ratio,strategy," + value_col + ',' + spread_col + ",trials\n";
    for (const auto& pt : curve.points) {
      csv += format_double(pt.ratio) + ',' + synth::to_string(pt.strategy) + ',' + format_double(pt.mean) + ',' +
             format_double(pt.std) + ',' + std::to_string(pt.trials) + '\n';
      rows.push_back(Json{{"ratio", pt.ratio},
                          {"strategy", synth::to_string(pt.strategy)},
                          {value_col, pt.mean},
                          {spread_col, pt.std},
                          {"trials", pt.trials}});
    }
  }

  ensure_dir(out_dir);
  {
    auto out = open_output(out_dir / (name + ".csv"));
    out << csv;
  }
  write_json(out_dir / (name + ".json"),
             Json{{"command", command}, {"seed", config.seed}, {"config", config.to_json()}, {"rows", rows}});
}

}  // namespace bbt
