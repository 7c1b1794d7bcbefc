/*
 * C interface to the speckle-correlation imaging toolkit.
 *
 * Every function returns an spk_status; SPK_OK is 0. On failure a
 * description is available from spk_last_error() on the same thread until
 * the next call into the library. Objects are opaque handles released with
 * the matching *_destroy function.
 */
#ifndef SPK_SPK_H
#define SPK_SPK_H

#include <stddef.h>
#include <stdint.h>

#if defined(SPK_BUILDING_LIBRARY)
#define SPK_API __attribute__((visibility("default")))
#else
#define SPK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spk_status {
  SPK_OK = 0,
  SPK_ERR_FORMAT = 1,
  SPK_ERR_TRUNCATED = 2,
  SPK_ERR_DIMENSION = 3,
  SPK_ERR_RANGE = 4,
  SPK_ERR_INPUT = 5,
  SPK_ERR_SELECTION = 6,
  SPK_ERR_NUMERICAL = 7,
  SPK_ERR_CONFIG = 8,
  SPK_ERR_IO = 9,
  SPK_ERR_DEGENERATE = 10,
  SPK_ERR_RESOLUTION = 11,
  SPK_ERR_INTERNAL = 99
} spk_status;

typedef struct spk_image spk_image;
typedef struct spk_config spk_config;

SPK_API const char* spk_version(void);
SPK_API const char* spk_last_error(void);
SPK_API const char* spk_status_name(spk_status status);

/* Images */
SPK_API spk_status spk_image_create(size_t width, size_t height, double pitch, const double* samples,
                                    spk_image** out);
SPK_API void spk_image_destroy(spk_image* img);
SPK_API size_t spk_image_width(const spk_image* img);
SPK_API size_t spk_image_height(const spk_image* img);
SPK_API double spk_image_pitch(const spk_image* img);
/* Row-major samples, valid until the image is destroyed. */
SPK_API const double* spk_image_data(const spk_image* img);
SPK_API spk_status spk_image_read(const char* path, spk_image** out);
SPK_API spk_status spk_image_write(const spk_image* img, const char* path);
SPK_API spk_status spk_image_write_pgm(const spk_image* img, const char* path);
SPK_API spk_status spk_image_read_pgm(const char* path, double pitch, spk_image** out);
SPK_API spk_status spk_image_crop_center(const spk_image* img, size_t size, spk_image** out);

SPK_API uint64_t spk_derive_seed(uint64_t master_seed, const char* label, uint64_t index);

/* Correlation */
SPK_API spk_status spk_true_autocorrelation(const spk_image* const* frames, size_t count, size_t out_size,
                                            unsigned workers, spk_image** out);
SPK_API spk_status spk_r_autocorrelation(const spk_image* const* frames, size_t count, size_t window_size,
                                         size_t windows_per_frame, uint64_t seed, size_t max_redraws,
                                         unsigned workers, spk_image** out);
/* kind: 0 finite, 1 unbounded (+inf), 2 flat (0). */
SPK_API spk_status spk_peak_background_ratio(const spk_image* ac, double feature_radius, double* ratio, int* kind);

/* Metrics */
SPK_API spk_status spk_speckle_contrast(const spk_image* img, double* out);
SPK_API spk_status spk_aligned_ncc(const spk_image* a, const spk_image* b, double* out);

/* Phase retrieval from a centered autocorrelation-like pattern with the
 * configured schedule. truth may be NULL for blind selection. */
SPK_API spk_status spk_reconstruct(const spk_config* cfg, const spk_image* pattern, const spk_image* truth,
                                   unsigned workers, spk_image** out, double* residual);

/* Pipeline configuration ("key = value" file) */
SPK_API spk_status spk_config_create(spk_config** out);
SPK_API spk_status spk_config_load(const char* path, spk_config** out);
SPK_API spk_status spk_config_set(spk_config* cfg, const char* key, const char* value);
SPK_API void spk_config_destroy(spk_config* cfg);

/* Commands. Each writes its outputs and a manifest.txt under out_dir. */
typedef void (*spk_line_callback)(const char* line, void* user);

SPK_API spk_status spk_cmd_simulate(const spk_config* cfg, const char* out_dir, unsigned workers);
/* method: "trueac" or "raut" */
SPK_API spk_status spk_cmd_extract(const spk_config* cfg, const char* const* frames, size_t count, const char* method,
                                   const char* out_dir, unsigned workers);
SPK_API spk_status spk_cmd_reconstruct(const spk_config* cfg, const char* pattern, const char* truth,
                                       const char* out_dir, unsigned workers);
/* Emits one "name=value" line per metric through emit. */
SPK_API spk_status spk_cmd_metrics(const spk_config* cfg, const char* const* images, size_t count, const char* truth,
                                   spk_line_callback emit, void* user);
/* out_dir NULL uses the configured output_dir. */
SPK_API spk_status spk_cmd_pipeline(const spk_config* cfg, const char* out_dir, unsigned workers,
                                    spk_line_callback emit, void* user);

#ifdef __cplusplus
}
#endif

#endif /* SPK_SPK_H */
