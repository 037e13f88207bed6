/* rasc — remote-assistance sensor compression toolkit.
 *
 * C interface to the core library: opaque handles, status-code returns.
 * Every function that can fail returns rasc_status; on failure
 * rasc_errmsg() describes the most recent error on the calling thread.
 * Handles are freed with their matching *_free function; freeing NULL is a
 * no-op. All multi-byte file and wire formats are little-endian.
 */
#ifndef RASC_H
#define RASC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rasc_status {
  RASC_OK = 0,
  RASC_ERR_INVALID = 1,  /* bad argument or precondition */
  RASC_ERR_IO = 2,       /* file open/read/write failure */
  RASC_ERR_FORMAT = 3,   /* malformed file, payload or stream */
  RASC_ERR_MISMATCH = 4, /* codec/model/dimension disagreement */
  RASC_ERR_NET = 5,      /* socket failure */
  RASC_ERR_INTERNAL = 6
} rasc_status;

typedef enum rasc_codec {
  RASC_CODEC_BLOCK_DCT = 1,
  RASC_CODEC_LEARNED_AE = 2
} rasc_codec;

typedef enum rasc_sensor {
  RASC_SENSOR_CAMERA = 0,
  RASC_SENSOR_LIDAR = 1
} rasc_sensor;

typedef struct rasc_image rasc_image;     /* 8-bit RGB raster */
typedef struct rasc_cloud rasc_cloud;     /* lidar point cloud */
typedef struct rasc_grid rasc_grid;       /* range grid */
typedef struct rasc_payload rasc_payload; /* one compressed frame */
typedef struct rasc_model rasc_model;     /* learned codec checkpoint */

const char* rasc_version(void);
/* Message for the last failure on this thread; never NULL. */
const char* rasc_errmsg(void);

/* ---- images (binary PPM / P6) ---- */
rasc_status rasc_image_load(const char* path, rasc_image** out);
rasc_status rasc_image_save(const rasc_image* image, const char* path);
rasc_status rasc_image_create(uint32_t width, uint32_t height, const uint8_t* rgb_interleaved,
                              rasc_image** out);
rasc_status rasc_image_synthetic(uint32_t width, uint32_t height, uint64_t seed,
                                 rasc_image** out);
void rasc_image_free(rasc_image* image);
uint32_t rasc_image_width(const rasc_image* image);
uint32_t rasc_image_height(const rasc_image* image);
const uint8_t* rasc_image_data(const rasc_image* image);

/* ---- point clouds (KITTI float32 x,y,z,intensity records) ---- */
rasc_status rasc_cloud_load(const char* path, rasc_cloud** out);
rasc_status rasc_cloud_save(const rasc_cloud* cloud, const char* path);
rasc_status rasc_cloud_create(const float* xyzi, size_t point_count, rasc_cloud** out);
rasc_status rasc_cloud_synthetic(uint32_t rings, uint32_t azimuth_steps, uint64_t seed,
                                 rasc_cloud** out);
void rasc_cloud_free(rasc_cloud* cloud);
size_t rasc_cloud_size(const rasc_cloud* cloud);
const float* rasc_cloud_data(const rasc_cloud* cloud);

/* ---- range grids ---- */
typedef struct rasc_grid_config {
  uint16_t rows;        /* default 64 */
  uint16_t cols;        /* default 512 */
  float elev_max_deg;   /* default  +2.0 */
  float elev_min_deg;   /* default -24.8 */
  float range_max_m;    /* default 120.0 */
} rasc_grid_config;

void rasc_grid_config_default(rasc_grid_config* cfg);

rasc_status rasc_cloud_to_grid(const rasc_cloud* cloud, const rasc_grid_config* cfg,
                               rasc_grid** out);
rasc_status rasc_grid_to_cloud(const rasc_grid* grid, rasc_cloud** out);
rasc_status rasc_grid_load(const char* path, const rasc_grid_config* cfg_or_null,
                           rasc_grid** out);
rasc_status rasc_grid_save(const rasc_grid* grid, const char* path);
void rasc_grid_free(rasc_grid* grid);
uint16_t rasc_grid_rows(const rasc_grid* grid);
uint16_t rasc_grid_cols(const rasc_grid* grid);
size_t rasc_grid_occupied(const rasc_grid* grid);
/* Mean L2 distance over jointly occupied bins; compared_out may be NULL. */
rasc_status rasc_grid_mean_distance(const rasc_grid* a, const rasc_grid* b, double* mean_out,
                                    uint64_t* compared_out);

/* ---- codecs ---- */
rasc_status rasc_model_load(const char* path, rasc_model** out);
rasc_status rasc_model_save(const rasc_model* model, const char* path);
void rasc_model_free(rasc_model* model);

rasc_status rasc_encode_image(const rasc_image* image, rasc_codec codec, int quality,
                              const rasc_model* model_or_null, double q_scale,
                              rasc_payload** out);
rasc_status rasc_encode_grid(const rasc_grid* grid, rasc_codec codec, int quality,
                             const rasc_model* model_or_null, double q_scale,
                             rasc_payload** out);
rasc_status rasc_decode_image(const rasc_payload* payload, const rasc_model* model_or_null,
                              rasc_image** out);
rasc_status rasc_decode_grid(const rasc_payload* payload, const rasc_model* model_or_null,
                             const rasc_grid_config* cfg_or_null, rasc_grid** out);

rasc_status rasc_payload_save(const rasc_payload* payload, const char* path);
rasc_status rasc_payload_load(const char* path, rasc_payload** out);
void rasc_payload_free(rasc_payload* payload);
size_t rasc_payload_bytes(const rasc_payload* payload);
double rasc_payload_bpp(const rasc_payload* payload);
rasc_codec rasc_payload_codec(const rasc_payload* payload);
int rasc_payload_is_grid(const rasc_payload* payload);

/* ---- metrics ---- */
rasc_status rasc_metric_mse(const rasc_image* a, const rasc_image* b, double* out);
rasc_status rasc_metric_psnr(const rasc_image* a, const rasc_image* b, double* out);
rasc_status rasc_metric_ms_ssim(const rasc_image* a, const rasc_image* b, double* out);
double rasc_bits_per_pixel(uint64_t payload_bytes, uint32_t width, uint32_t height);
rasc_status rasc_relative_detection_error(uint32_t n_orig, uint32_t n_recon, double* out);
rasc_status rasc_kde_scott(const double* samples, size_t n_samples, double scale,
                           const double* eval_points, size_t n_eval, double* density_out);

/* ---- training ---- */
typedef struct rasc_train_config {
  double lambda;        /* rate weight, >= 0 */
  uint32_t steps;       /* default 500 */
  double lr;            /* default 1e-4 */
  uint32_t batch;       /* default 8 */
  uint32_t crop;        /* default 64, multiple of 8 */
  uint64_t seed;
  double q_step;        /* default 1.0 */
  uint32_t hidden_channels; /* default 32 */
  uint32_t latent_channels; /* default 16 */
} rasc_train_config;

void rasc_train_config_default(rasc_train_config* cfg);

/* Trains on every .ppm under data_dir, writes the checkpoint, and
 * optionally the per-step loss trace as CSV. */
rasc_status rasc_train(const char* data_dir, const rasc_train_config* cfg,
                       const char* checkpoint_out, const char* trace_csv_or_null);

/* ---- rate-distortion sweep ---- */
typedef struct rasc_sweep_spec {
  rasc_codec codec;
  const char* input_dir;
  const char* output_csv;
  const int* qualities;            /* block codec rate points */
  size_t n_qualities;
  const char* const* model_paths;  /* learned codec rate points */
  size_t n_models;
  const double* q_scales;          /* learned codec: scales over one model */
  size_t n_q_scales;
  const char* lpips_sidecar;       /* optional */
} rasc_sweep_spec;

rasc_status rasc_rd_sweep(const rasc_sweep_spec* spec);

/* ---- detection-count evaluation ---- */
rasc_status rasc_eval_detections(const char* report_path, const char* output_path,
                                 double min_score, double kde_scale);

/* ---- streaming ---- */
typedef struct rasc_stream_config {
  rasc_codec codec;
  int quality;              /* block codec */
  const char* model_path;   /* learned codec checkpoint, or NULL */
  double q_scale;           /* learned codec rate knob */
  rasc_sensor sensor;       /* synthetic source type */
  const char* source_dir;   /* replay directory, or NULL for synthetic */
  uint32_t frame_width;     /* synthetic camera, default 256 */
  uint32_t frame_height;    /* synthetic camera, default 256 */
  rasc_grid_config grid;    /* lidar preprocessing */
  double pace_fps;          /* 0: unpaced */
  double duration_s;        /* 0: until the source ends */
  uint64_t max_frames;      /* 0: unlimited */
  uint64_t seed;
  const char* sink_dir;     /* receiver artifact directory, or NULL */
  double window_seconds;    /* aggregation window, default 300 */
} rasc_stream_config;

void rasc_stream_config_default(rasc_stream_config* cfg);

typedef struct rasc_bench_summary {
  double fps;
  double mean_preprocess_ms;
  double mean_encode_ms;
  double mean_serialize_ms;
  double mean_network_ms;
  double mean_decode_ms;
  double end_to_end_mean_ms;
  double wall_mean_ms; /* < 0 when no shared clock */
  uint64_t frames;
  uint64_t dropped_frames;
  uint64_t malformed_frames;
  uint64_t decode_failures;
} rasc_bench_summary;

/* Loopback bench: in-process sender and receiver over 127.0.0.1. Writes the
 * per-frame CSV plus summary block when csv_out is non-NULL. */
rasc_status rasc_bench_loopback(const rasc_stream_config* cfg, const char* csv_out,
                                rasc_bench_summary* summary_out);

/* Remote pieces: sender connects out, receiver listens on one connection.
 * Each writes its own per-frame CSV when csv_out is non-NULL. */
rasc_status rasc_stream_send(const rasc_stream_config* cfg, const char* host, uint16_t port,
                             const char* csv_out);
rasc_status rasc_stream_receive(const rasc_stream_config* cfg, const char* host, uint16_t port,
                                const char* csv_out);

#ifdef __cplusplus
}
#endif

#endif /* RASC_H */
