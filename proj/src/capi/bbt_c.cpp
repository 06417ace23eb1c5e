#include "bbt/bbt.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "bbt/bbs.hpp"
#include "bbt/commands.hpp"
#include "bbt/config.hpp"
#include "bbt/ensemble.hpp"
#include "bbt/error.hpp"

struct bbt_config_t {
  bbt::RunConfig config;
};

struct bbt_point_set_t {
  bbt::PointSet points;
};

struct bbt_ensemble_t {
  std::unique_ptr<bbt::Ensemble> ensemble;
};

namespace {

thread_local std::string last_error;

bbt_status fail(bbt_status status, const char* message) {
  last_error = message;
  return status;
}

// Runs body and maps exceptions onto status codes.
template <class Body>
bbt_status guarded(Body&& body) {
  try {
    body();
    return BBT_OK;
  } catch (const bbt::InvalidInput& e) {
    return fail(BBT_ERR_INVALID_INPUT, e.what());
  } catch (const bbt::IngestionError& e) {
    return fail(BBT_ERR_INGESTION, e.what());
  } catch (const bbt::FrameError& e) {
    return fail(BBT_ERR_FRAME, e.what());
  } catch (const std::bad_alloc&) {
    return fail(BBT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BBT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(BBT_ERR_INTERNAL, "unknown error");
  }
}

#define BBT_REQUIRE(ptr)                                                  \
  do {                                                                    \
    if ((ptr) == nullptr) return fail(BBT_ERR_NULL_ARGUMENT, #ptr " is null"); \
  } while (0)

bbt::ImageRegion to_region(const bbt_image& img) {
  if (img.data == nullptr) throw bbt::InvalidInput("image data is null");
  if (img.width < 0 || img.height < 0) throw bbt::InvalidInput("image size is negative");
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height * img.channels;
  return bbt::ImageRegion(img.width, img.height, img.channels, std::vector<float>(img.data, img.data + n));
}

bbt::BoundingBox to_box(const bbt_box& b) { return {b.x, b.y, b.w, b.h}; }
bbt_box from_box(const bbt::BoundingBox& b) { return {b.x, b.y, b.w, b.h}; }

}  // namespace

extern "C" {

const char* bbt_version(void) { return "1.0.0"; }

const char* bbt_last_error(void) { return last_error.c_str(); }

const char* bbt_status_name(bbt_status status) {
  switch (status) {
    case BBT_OK: return "ok";
    case BBT_ERR_INTERNAL: return "internal error";
    case BBT_ERR_INVALID_INPUT: return "invalid input";
    case BBT_ERR_INGESTION: return "ingestion error";
    case BBT_ERR_FRAME: return "frame error";
    case BBT_ERR_NULL_ARGUMENT: return "null argument";
  }
  return "unknown status";
}

bbt_status bbt_config_create(bbt_config* out) {
  BBT_REQUIRE(out);
  return guarded([&] { *out = new bbt_config_t{}; });
}

void bbt_config_destroy(bbt_config config) { delete config; }

bbt_status bbt_config_load_file(bbt_config config, const char* path) {
  BBT_REQUIRE(config);
  BBT_REQUIRE(path);
  return guarded([&] {
    bbt::RunConfig updated = config->config;
    updated.load_file(path);
    config->config = updated;
  });
}

bbt_status bbt_config_set(bbt_config config, const char* key, const char* value) {
  BBT_REQUIRE(config);
  BBT_REQUIRE(key);
  BBT_REQUIRE(value);
  return guarded([&] { config->config.set(key, value); });
}

bbt_status bbt_config_to_json(bbt_config config, char* buf, size_t capacity, size_t* needed) {
  BBT_REQUIRE(config);
  return guarded([&] {
    const std::string text = config->config.to_json().dump();
    if (needed) *needed = text.size() + 1;
    if (buf && capacity > 0) {
      const std::size_t n = std::min(capacity - 1, text.size());
      std::memcpy(buf, text.data(), n);
      buf[n] = '\0';
    }
  });
}

bbt_status bbt_point_set_create(size_t dim, bbt_point_set* out) {
  BBT_REQUIRE(out);
  return guarded([&] { *out = new bbt_point_set_t{bbt::PointSet(dim)}; });
}

void bbt_point_set_destroy(bbt_point_set set) { delete set; }

bbt_status bbt_point_set_add(bbt_point_set set, const double* appearance, size_t dim, double x, double y) {
  BBT_REQUIRE(set);
  if (dim > 0) BBT_REQUIRE(appearance);
  return guarded([&] {
    if (dim != set->points.dim()) throw bbt::InvalidInput("point dimensionality does not match the set");
    set->points.push_back(std::span<const double>(appearance, dim), {x, y});
  });
}

bbt_status bbt_point_set_size(bbt_point_set set, size_t* out) {
  BBT_REQUIRE(set);
  BBT_REQUIRE(out);
  *out = set->points.size();
  return BBT_OK;
}

bbt_status bbt_embed_region(bbt_image region, int patch_size, bbt_point_set* out) {
  BBT_REQUIRE(out);
  return guarded([&] {
    auto points = bbt::embed_region(to_region(region), patch_size);
    *out = new bbt_point_set_t{std::move(points)};
  });
}

bbt_status bbt_point_distance(const double* a_app, const double* a_loc, const double* b_app,
                              const double* b_loc, size_t dim, double lambda, double* out) {
  BBT_REQUIRE(a_loc);
  BBT_REQUIRE(b_loc);
  BBT_REQUIRE(out);
  if (dim > 0) {
    BBT_REQUIRE(a_app);
    BBT_REQUIRE(b_app);
  }
  return guarded([&] {
    const bbt::FeaturePoint a{{a_app, a_app + dim}, {a_loc[0], a_loc[1]}};
    const bbt::FeaturePoint b{{b_app, b_app + dim}, {b_loc[0], b_loc[1]}};
    *out = bbt::point_distance(a, b, lambda);
  });
}

bbt_status bbt_bbs(bbt_point_set p, bbt_point_set q, double lambda, bbt_strategy strategy, size_t k,
                   uint64_t seed, bbt_bbs_score* out) {
  BBT_REQUIRE(p);
  BBT_REQUIRE(q);
  BBT_REQUIRE(out);
  return guarded([&] {
    bbt::EqualizationStrategy s;
    switch (strategy) {
      case BBT_STRATEGY_NONE: s = bbt::strategy::None{}; break;
      case BBT_STRATEGY_RANDOM_SAMPLE: s = bbt::strategy::RandomSample{k}; break;
      case BBT_STRATEGY_CLUSTER: s = bbt::strategy::Cluster{}; break;
      default: throw bbt::InvalidInput("unknown equalization strategy");
    }
    bbt::Rng rng(seed);
    const bbt::BbsScore score = bbt::bbs_with_strategy(p->points, q->points, s, lambda, rng);
    *out = bbt_bbs_score{score.value, score.pair_count, score.normalizer};
  });
}

bbt_status bbt_iou(bbt_box a, bbt_box b, double* out) {
  BBT_REQUIRE(out);
  *out = bbt::iou(to_box(a), to_box(b));
  return BBT_OK;
}

bbt_status bbt_ensemble_create(bbt_config config, bbt_image frame0, bbt_box box0, bbt_ensemble* out) {
  BBT_REQUIRE(config);
  BBT_REQUIRE(out);
  return guarded([&] {
    config->config.validate();
    auto ens = std::make_unique<bbt::Ensemble>(config->config.ensemble(), to_region(frame0), to_box(box0),
                                               config->config.seed);
    *out = new bbt_ensemble_t{std::move(ens)};
  });
}

void bbt_ensemble_destroy(bbt_ensemble ensemble) { delete ensemble; }

bbt_status bbt_ensemble_step(bbt_ensemble ensemble, bbt_image frame, bbt_box* fused) {
  BBT_REQUIRE(ensemble);
  BBT_REQUIRE(fused);
  return guarded([&] {
    bbt::ImageRegion region;
    try {
      region = to_region(frame);
    } catch (const bbt::InvalidInput&) {
      // Malformed frames count as per-tracker failures, like undecodable files.
    }
    *fused = from_box(ensemble->ensemble->step(region));
  });
}

bbt_status bbt_ensemble_tracker_count(bbt_ensemble ensemble, size_t* out) {
  BBT_REQUIRE(ensemble);
  BBT_REQUIRE(out);
  *out = ensemble->ensemble->tracker_count();
  return BBT_OK;
}

bbt_status bbt_ensemble_tracker_output(bbt_ensemble ensemble, size_t i, bbt_box* box, double* confidence,
                                       int* ok) {
  BBT_REQUIRE(ensemble);
  return guarded([&] {
    const auto& history = ensemble->ensemble->history();
    if (i >= history.size()) throw bbt::InvalidInput("tracker index out of range");
    const bbt::TrackerOutput& o = history[i].back();
    if (box) *box = from_box(o.box);
    if (confidence) *confidence = o.confidence;
    if (ok) *ok = o.ok ? 1 : 0;
  });
}

bbt_status bbt_run_track(bbt_config config, const char* sequence_dir, const char* out_dir) {
  BBT_REQUIRE(config);
  BBT_REQUIRE(sequence_dir);
  BBT_REQUIRE(out_dir);
  return guarded([&] { bbt::run_track_command(sequence_dir, config->config, out_dir); });
}

bbt_status bbt_run_eval(bbt_config config, const char* dataset_dir, const char* out_dir) {
  BBT_REQUIRE(config);
  BBT_REQUIRE(dataset_dir);
  BBT_REQUIRE(out_dir);
  return guarded([&] { bbt::run_eval_command(dataset_dir, config->config, out_dir); });
}

bbt_status bbt_run_synth(bbt_config config, bbt_synth_kind kind, const char* out_dir) {
  BBT_REQUIRE(config);
  BBT_REQUIRE(out_dir);
  return guarded([&] {
    bbt::SynthKind k;
    switch (kind) {
      case BBT_SYNTH_BIAS: k = bbt::SynthKind::Bias; break;
      case BBT_SYNTH_TIMING: k = bbt::SynthKind::Timing; break;
      case BBT_SYNTH_CONVERGENCE: k = bbt::SynthKind::Convergence; break;
      default: throw bbt::InvalidInput("unknown synthetic experiment");
    }
    bbt::run_synth_command(k, config->config, out_dir);
  });
}

}  // extern "C"
