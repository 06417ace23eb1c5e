/*
 * bbt.h - C interface to the best-buddies similarity library and tracker.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Functions return a bbt_status; on failure bbt_last_error() holds a message
 * for the calling thread until its next failing call.
 */
#ifndef BBT_BBT_H_
#define BBT_BBT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BBT_BUILDING_LIBRARY)
#    define BBT_API __declspec(dllexport)
#  else
#    define BBT_API __declspec(dllimport)
#  endif
#else
#  define BBT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bbt_status {
  BBT_OK = 0,
  BBT_ERR_INTERNAL = 1,
  BBT_ERR_INVALID_INPUT = 2,
  BBT_ERR_INGESTION = 3,
  BBT_ERR_FRAME = 4,
  BBT_ERR_NULL_ARGUMENT = 5
} bbt_status;

typedef enum bbt_strategy {
  BBT_STRATEGY_NONE = 0,
  BBT_STRATEGY_RANDOM_SAMPLE = 1,
  BBT_STRATEGY_CLUSTER = 2
} bbt_strategy;

typedef enum bbt_synth_kind {
  BBT_SYNTH_BIAS = 0,
  BBT_SYNTH_TIMING = 1,
  BBT_SYNTH_CONVERGENCE = 2
} bbt_synth_kind;

typedef struct bbt_box {
  double x, y, w, h; /* 0-based, top-left origin */
} bbt_box;

typedef struct bbt_bbs_score {
  double value;
  size_t pair_count;
  size_t normalizer;
} bbt_bbs_score;

/* A raster frame: row-major, channel-interleaved floats in [0,1]. */
typedef struct bbt_image {
  const float* data;
  int width;
  int height;
  int channels; /* 1 or 3 */
} bbt_image;

typedef struct bbt_config_t* bbt_config;
typedef struct bbt_point_set_t* bbt_point_set;
typedef struct bbt_ensemble_t* bbt_ensemble;

BBT_API const char* bbt_version(void);
BBT_API const char* bbt_last_error(void);
BBT_API const char* bbt_status_name(bbt_status status);

/* Run configuration (defaults are the published tracker parameters). */
BBT_API bbt_status bbt_config_create(bbt_config* out);
BBT_API void bbt_config_destroy(bbt_config config);
BBT_API bbt_status bbt_config_load_file(bbt_config config, const char* path);
BBT_API bbt_status bbt_config_set(bbt_config config, const char* key, const char* value);
/* Copies the JSON echo into buf (NUL-terminated, truncated to capacity);
 * *needed receives the full length including the terminator. */
BBT_API bbt_status bbt_config_to_json(bbt_config config, char* buf, size_t capacity, size_t* needed);

/* Point sets. */
BBT_API bbt_status bbt_point_set_create(size_t dim, bbt_point_set* out);
BBT_API void bbt_point_set_destroy(bbt_point_set set);
BBT_API bbt_status bbt_point_set_add(bbt_point_set set, const double* appearance, size_t dim, double x,
                                     double y);
BBT_API bbt_status bbt_point_set_size(bbt_point_set set, size_t* out);
BBT_API bbt_status bbt_embed_region(bbt_image region, int patch_size, bbt_point_set* out);

/* Similarity. `k` is used by BBT_STRATEGY_RANDOM_SAMPLE; `seed` by the
 * randomized strategies. */
BBT_API bbt_status bbt_point_distance(const double* a_app, const double* a_loc, const double* b_app,
                                      const double* b_loc, size_t dim, double lambda, double* out);
BBT_API bbt_status bbt_bbs(bbt_point_set p, bbt_point_set q, double lambda, bbt_strategy strategy, size_t k,
                           uint64_t seed, bbt_bbs_score* out);
BBT_API bbt_status bbt_iou(bbt_box a, bbt_box b, double* out);

/* Tracker ensemble driven frame by frame. */
BBT_API bbt_status bbt_ensemble_create(bbt_config config, bbt_image frame0, bbt_box box0, bbt_ensemble* out);
BBT_API void bbt_ensemble_destroy(bbt_ensemble ensemble);
BBT_API bbt_status bbt_ensemble_step(bbt_ensemble ensemble, bbt_image frame, bbt_box* fused);
BBT_API bbt_status bbt_ensemble_tracker_count(bbt_ensemble ensemble, size_t* out);
/* Latest output of tracker i; *ok is 0 when that tracker failed the frame. */
BBT_API bbt_status bbt_ensemble_tracker_output(bbt_ensemble ensemble, size_t i, bbt_box* box,
                                               double* confidence, int* ok);

/* Whole commands; they write their artifacts into out_dir. */
BBT_API bbt_status bbt_run_track(bbt_config config, const char* sequence_dir, const char* out_dir);
BBT_API bbt_status bbt_run_eval(bbt_config config, const char* dataset_dir, const char* out_dir);
BBT_API bbt_status bbt_run_synth(bbt_config config, bbt_synth_kind kind, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* BBT_BBT_H_ */
