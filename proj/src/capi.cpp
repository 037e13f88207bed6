#include "rasc.h"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <string>

#include "rasc/ae.hpp"
#include "rasc/dct_codec.hpp"
#include "rasc/io.hpp"
#include "rasc/report.hpp"
#include "rasc/stream.hpp"
#include "rasc/synthetic.hpp"
#include "rasc/train.hpp"

// Opaque handle definitions: each wraps one core value.
struct rasc_image {
  rasc::Image8 value;
};
struct rasc_cloud {
  rasc::PointCloud value;
};
struct rasc_grid {
  rasc::RangeGrid value;
};
struct rasc_payload {
  rasc::EncodedPayload value;
};
struct rasc_model {
  rasc::AeModel value;
};

namespace {

thread_local std::string g_errmsg = "ok";

rasc_status status_code(const rasc::Error& e) {
  switch (e.status()) {
    case rasc::Status::ok:
      return RASC_OK;
    case rasc::Status::invalid_argument:
      return RASC_ERR_INVALID;
    case rasc::Status::io_error:
      return RASC_ERR_IO;
    case rasc::Status::bad_format:
      return RASC_ERR_FORMAT;
    case rasc::Status::mismatch:
      return RASC_ERR_MISMATCH;
    case rasc::Status::net_error:
      return RASC_ERR_NET;
    case rasc::Status::internal:
      return RASC_ERR_INTERNAL;
  }
  return RASC_ERR_INTERNAL;
}

template <typename Fn>
rasc_status guard(Fn&& fn) {
  try {
    fn();
    return RASC_OK;
  } catch (const rasc::Error& e) {
    g_errmsg = e.what();
    return status_code(e);
  } catch (const std::exception& e) {
    g_errmsg = e.what();
    return RASC_ERR_INTERNAL;
  } catch (...) {
    g_errmsg = "unknown error";
    return RASC_ERR_INTERNAL;
  }
}

rasc_status invalid(const char* msg) {
  g_errmsg = msg;
  return RASC_ERR_INVALID;
}

rasc::GridConfig to_core(const rasc_grid_config& cfg) {
  rasc::GridConfig out;
  out.rows = cfg.rows;
  out.cols = cfg.cols;
  out.elev_max_deg = cfg.elev_max_deg;
  out.elev_min_deg = cfg.elev_min_deg;
  out.range_max_m = cfg.range_max_m;
  return out;
}

}  // namespace

extern "C" {

const char* rasc_version(void) { return rasc::kVersionString; }

const char* rasc_errmsg(void) { return g_errmsg.c_str(); }

/* ---- images ---- */

rasc_status rasc_image_load(const char* path, rasc_image** out) {
  if (!path || !out) return invalid("NULL argument");
  return guard([&] { *out = new rasc_image{rasc::load_image(path)}; });
}

rasc_status rasc_image_save(const rasc_image* image, const char* path) {
  if (!image || !path) return invalid("NULL argument");
  return guard([&] { rasc::save_image(image->value, path); });
}

rasc_status rasc_image_create(uint32_t width, uint32_t height, const uint8_t* rgb,
                              rasc_image** out) {
  if (!rgb || !out) return invalid("NULL argument");
  return guard([&] {
    rasc::Image8 img(width, height);
    std::memcpy(img.data.data(), rgb, img.data.size());
    *out = new rasc_image{std::move(img)};
  });
}

rasc_status rasc_image_synthetic(uint32_t width, uint32_t height, uint64_t seed,
                                 rasc_image** out) {
  if (!out) return invalid("NULL argument");
  return guard([&] { *out = new rasc_image{rasc::make_natural_image(width, height, seed)}; });
}

void rasc_image_free(rasc_image* image) { delete image; }

uint32_t rasc_image_width(const rasc_image* image) { return image ? image->value.width : 0; }
uint32_t rasc_image_height(const rasc_image* image) { return image ? image->value.height : 0; }
const uint8_t* rasc_image_data(const rasc_image* image) {
  return image ? image->value.data.data() : nullptr;
}

/* ---- clouds ---- */

rasc_status rasc_cloud_load(const char* path, rasc_cloud** out) {
  if (!path || !out) return invalid("NULL argument");
  return guard([&] { *out = new rasc_cloud{rasc::load_pointcloud(path)}; });
}

rasc_status rasc_cloud_save(const rasc_cloud* cloud, const char* path) {
  if (!cloud || !path) return invalid("NULL argument");
  return guard([&] { rasc::save_pointcloud(cloud->value, path); });
}

rasc_status rasc_cloud_create(const float* xyzi, size_t point_count, rasc_cloud** out) {
  if ((!xyzi && point_count) || !out) return invalid("NULL argument");
  return guard([&] {
    rasc::PointCloud cloud;
    cloud.points.resize(point_count);
    for (size_t i = 0; i < point_count; ++i)
      cloud.points[i] = {xyzi[i * 4], xyzi[i * 4 + 1], xyzi[i * 4 + 2], xyzi[i * 4 + 3]};
    *out = new rasc_cloud{std::move(cloud)};
  });
}

rasc_status rasc_cloud_synthetic(uint32_t rings, uint32_t azimuth_steps, uint64_t seed,
                                 rasc_cloud** out) {
  if (!out) return invalid("NULL argument");
  return guard([&] {
    rasc::ScanSpec spec;
    spec.rings = rings;
    spec.azimuth_steps = azimuth_steps;
    *out = new rasc_cloud{rasc::make_scan(spec, seed)};
  });
}

void rasc_cloud_free(rasc_cloud* cloud) { delete cloud; }

size_t rasc_cloud_size(const rasc_cloud* cloud) { return cloud ? cloud->value.size() : 0; }
const float* rasc_cloud_data(const rasc_cloud* cloud) {
  return cloud && !cloud->value.points.empty()
             ? reinterpret_cast<const float*>(cloud->value.points.data())
             : nullptr;
}

/* ---- grids ---- */

void rasc_grid_config_default(rasc_grid_config* cfg) {
  if (!cfg) return;
  rasc::GridConfig d;
  cfg->rows = d.rows;
  cfg->cols = d.cols;
  cfg->elev_max_deg = d.elev_max_deg;
  cfg->elev_min_deg = d.elev_min_deg;
  cfg->range_max_m = d.range_max_m;
}

rasc_status rasc_cloud_to_grid(const rasc_cloud* cloud, const rasc_grid_config* cfg,
                               rasc_grid** out) {
  if (!cloud || !out) return invalid("NULL argument");
  return guard([&] {
    rasc::GridConfig core_cfg = cfg ? to_core(*cfg) : rasc::GridConfig{};
    *out = new rasc_grid{rasc::pointcloud_to_grid(cloud->value, core_cfg)};
  });
}

rasc_status rasc_grid_to_cloud(const rasc_grid* grid, rasc_cloud** out) {
  if (!grid || !out) return invalid("NULL argument");
  return guard([&] { *out = new rasc_cloud{rasc::grid_to_pointcloud(grid->value)}; });
}

rasc_status rasc_grid_load(const char* path, const rasc_grid_config* cfg, rasc_grid** out) {
  if (!path || !out) return invalid("NULL argument");
  return guard([&] {
    rasc::GridConfig core_cfg = cfg ? to_core(*cfg) : rasc::GridConfig{};
    *out = new rasc_grid{rasc::load_grid(path, core_cfg)};
  });
}

rasc_status rasc_grid_save(const rasc_grid* grid, const char* path) {
  if (!grid || !path) return invalid("NULL argument");
  return guard([&] { rasc::save_grid(grid->value, path); });
}

void rasc_grid_free(rasc_grid* grid) { delete grid; }

uint16_t rasc_grid_rows(const rasc_grid* grid) { return grid ? grid->value.config.rows : 0; }
uint16_t rasc_grid_cols(const rasc_grid* grid) { return grid ? grid->value.config.cols : 0; }
size_t rasc_grid_occupied(const rasc_grid* grid) {
  return grid ? grid->value.occupied_count() : 0;
}

rasc_status rasc_grid_mean_distance(const rasc_grid* a, const rasc_grid* b, double* mean_out,
                                    uint64_t* compared_out) {
  if (!a || !b || !mean_out) return invalid("NULL argument");
  return guard([&] {
    rasc::GridDistance d = rasc::mean_euclidean_distance(a->value, b->value);
    *mean_out = d.mean_m;
    if (compared_out) *compared_out = d.compared_bins;
  });
}

/* ---- codecs ---- */

rasc_status rasc_model_load(const char* path, rasc_model** out) {
  if (!path || !out) return invalid("NULL argument");
  return guard([&] { *out = new rasc_model{rasc::AeModel::load(path)}; });
}

rasc_status rasc_model_save(const rasc_model* model, const char* path) {
  if (!model || !path) return invalid("NULL argument");
  return guard([&] { model->value.save(path); });
}

void rasc_model_free(rasc_model* model) { delete model; }

rasc_status rasc_encode_image(const rasc_image* image, rasc_codec codec, int quality,
                              const rasc_model* model, double q_scale, rasc_payload** out) {
  if (!image || !out) return invalid("NULL argument");
  return guard([&] {
    if (codec == RASC_CODEC_BLOCK_DCT) {
      *out = new rasc_payload{rasc::dct_encode_image(image->value, quality)};
    } else {
      rasc::require(model != nullptr, rasc::Status::invalid_argument,
                    "learned codec needs a model");
      *out = new rasc_payload{rasc::ae_encode_image(image->value, model->value, q_scale)};
    }
  });
}

rasc_status rasc_encode_grid(const rasc_grid* grid, rasc_codec codec, int quality,
                             const rasc_model* model, double q_scale, rasc_payload** out) {
  if (!grid || !out) return invalid("NULL argument");
  return guard([&] {
    rasc::NormalizedGrid ngrid = rasc::normalize_grid(grid->value);
    if (codec == RASC_CODEC_BLOCK_DCT) {
      *out = new rasc_payload{rasc::dct_encode_grid(ngrid, quality)};
    } else {
      rasc::require(model != nullptr, rasc::Status::invalid_argument,
                    "learned codec needs a model");
      *out = new rasc_payload{rasc::ae_encode_grid(ngrid, model->value, q_scale)};
    }
  });
}

rasc_status rasc_decode_image(const rasc_payload* payload, const rasc_model* model,
                              rasc_image** out) {
  if (!payload || !out) return invalid("NULL argument");
  return guard([&] {
    if (payload->value.codec == rasc::CodecId::block_dct) {
      *out = new rasc_image{rasc::dct_decode_image(payload->value)};
    } else {
      rasc::require(model != nullptr, rasc::Status::invalid_argument,
                    "learned codec needs a model");
      *out = new rasc_image{rasc::ae_decode_image(payload->value, model->value)};
    }
  });
}

rasc_status rasc_decode_grid(const rasc_payload* payload, const rasc_model* model,
                             const rasc_grid_config* cfg, rasc_grid** out) {
  if (!payload || !out) return invalid("NULL argument");
  return guard([&] {
    rasc::GridConfig angles = cfg ? to_core(*cfg) : rasc::GridConfig{};
    rasc::NormalizedGrid ngrid;
    if (payload->value.codec == rasc::CodecId::block_dct) {
      ngrid = rasc::dct_decode_grid(payload->value, angles);
    } else {
      rasc::require(model != nullptr, rasc::Status::invalid_argument,
                    "learned codec needs a model");
      ngrid = rasc::ae_decode_grid(payload->value, model->value, angles);
    }
    *out = new rasc_grid{rasc::denormalize_grid(ngrid)};
  });
}

rasc_status rasc_payload_save(const rasc_payload* payload, const char* path) {
  if (!payload || !path) return invalid("NULL argument");
  return guard([&] {
    auto bytes = payload->value.serialize();
    rasc::write_file(path, bytes);
  });
}

rasc_status rasc_payload_load(const char* path, rasc_payload** out) {
  if (!path || !out) return invalid("NULL argument");
  return guard([&] {
    auto bytes = rasc::read_file(path);
    *out = new rasc_payload{rasc::EncodedPayload::parse(bytes)};
  });
}

void rasc_payload_free(rasc_payload* payload) { delete payload; }

size_t rasc_payload_bytes(const rasc_payload* payload) {
  return payload ? payload->value.byte_length() : 0;
}
double rasc_payload_bpp(const rasc_payload* payload) {
  return payload ? payload->value.bpp() : 0.0;
}
rasc_codec rasc_payload_codec(const rasc_payload* payload) {
  return payload && payload->value.codec == rasc::CodecId::learned_ae ? RASC_CODEC_LEARNED_AE
                                                                      : RASC_CODEC_BLOCK_DCT;
}
int rasc_payload_is_grid(const rasc_payload* payload) {
  return payload && payload->value.is_grid() ? 1 : 0;
}

/* ---- metrics ---- */

rasc_status rasc_metric_mse(const rasc_image* a, const rasc_image* b, double* out) {
  if (!a || !b || !out) return invalid("NULL argument");
  return guard([&] { *out = rasc::mse(a->value, b->value); });
}

rasc_status rasc_metric_psnr(const rasc_image* a, const rasc_image* b, double* out) {
  if (!a || !b || !out) return invalid("NULL argument");
  return guard([&] { *out = rasc::psnr(a->value, b->value); });
}

rasc_status rasc_metric_ms_ssim(const rasc_image* a, const rasc_image* b, double* out) {
  if (!a || !b || !out) return invalid("NULL argument");
  return guard([&] { *out = rasc::ms_ssim(a->value, b->value); });
}

double rasc_bits_per_pixel(uint64_t payload_bytes, uint32_t width, uint32_t height) {
  if (uint64_t(width) * height == 0) return 0.0;
  return rasc::bits_per_pixel(payload_bytes, width, height);
}

rasc_status rasc_relative_detection_error(uint32_t n_orig, uint32_t n_recon, double* out) {
  if (!out) return invalid("NULL argument");
  return guard([&] {
    rasc::DetectionCountRecord rec;
    rec.n_orig = n_orig;
    rec.n_recon = n_recon;
    *out = rasc::relative_detection_error(rec);
  });
}

rasc_status rasc_kde_scott(const double* samples, size_t n_samples, double scale,
                           const double* eval_points, size_t n_eval, double* density_out) {
  if (!samples || !eval_points || !density_out) return invalid("NULL argument");
  return guard([&] {
    auto density = rasc::kde_scott(std::span<const double>(samples, n_samples), scale,
                                   std::span<const double>(eval_points, n_eval));
    std::memcpy(density_out, density.data(), n_eval * sizeof(double));
  });
}

/* ---- training ---- */

void rasc_train_config_default(rasc_train_config* cfg) {
  if (!cfg) return;
  rasc::TrainConfig d;
  cfg->lambda = d.lambda;
  cfg->steps = d.steps;
  cfg->lr = d.lr;
  cfg->batch = d.batch;
  cfg->crop = d.crop;
  cfg->seed = d.seed;
  cfg->q_step = d.q_step;
  cfg->hidden_channels = uint32_t(d.hidden_channels);
  cfg->latent_channels = uint32_t(d.latent_channels);
}

rasc_status rasc_train(const char* data_dir, const rasc_train_config* cfg,
                       const char* checkpoint_out, const char* trace_csv) {
  if (!data_dir || !cfg || !checkpoint_out) return invalid("NULL argument");
  return guard([&] {
    namespace fs = std::filesystem;
    std::vector<std::string> paths;
    rasc::require(fs::is_directory(data_dir), rasc::Status::io_error,
                  std::string(data_dir) + " is not a directory");
    for (const auto& entry : fs::directory_iterator(data_dir))
      if (entry.is_regular_file() && entry.path().extension() == ".ppm")
        paths.push_back(entry.path().string());
    std::sort(paths.begin(), paths.end());
    std::vector<rasc::Image8> dataset;
    for (const std::string& p : paths) dataset.push_back(rasc::load_image(p));

    rasc::TrainConfig core;
    core.lambda = cfg->lambda;
    core.steps = cfg->steps;
    core.lr = cfg->lr;
    core.batch = cfg->batch;
    core.crop = cfg->crop;
    core.seed = cfg->seed;
    core.q_step = cfg->q_step;
    core.hidden_channels = int(cfg->hidden_channels);
    core.latent_channels = int(cfg->latent_channels);
    rasc::TrainResult result = rasc::train_ae(dataset, core);
    result.model.save(checkpoint_out);
    if (trace_csv) {
      std::string csv = "step,loss,mse,bpp\n";
      char row[128];
      for (size_t i = 0; i < result.loss_trace.size(); ++i) {
        std::snprintf(row, sizeof row, "%zu,%.9f,%.9f,%.9f\n", i, result.loss_trace[i],
                      result.mse_trace[i], result.bpp_trace[i]);
        csv += row;
      }
      std::vector<uint8_t> bytes(csv.begin(), csv.end());
      rasc::write_file(trace_csv, bytes);
    }
  });
}

/* ---- sweep / evaluation ---- */

rasc_status rasc_rd_sweep(const rasc_sweep_spec* spec) {
  if (!spec || !spec->input_dir || !spec->output_csv) return invalid("NULL argument");
  return guard([&] {
    rasc::SweepSpec core;
    core.codec = spec->codec == RASC_CODEC_LEARNED_AE ? rasc::CodecId::learned_ae
                                                      : rasc::CodecId::block_dct;
    core.input_dir = spec->input_dir;
    core.output_csv = spec->output_csv;
    for (size_t i = 0; i < spec->n_qualities; ++i) core.qualities.push_back(spec->qualities[i]);
    for (size_t i = 0; i < spec->n_models; ++i) core.model_paths.push_back(spec->model_paths[i]);
    for (size_t i = 0; i < spec->n_q_scales; ++i) core.q_scales.push_back(spec->q_scales[i]);
    if (spec->lpips_sidecar) core.lpips_sidecar = spec->lpips_sidecar;
    rasc::run_rd_sweep(core);
  });
}

rasc_status rasc_eval_detections(const char* report_path, const char* output_path,
                                 double min_score, double kde_scale) {
  if (!report_path || !output_path) return invalid("NULL argument");
  return guard([&] {
    rasc::DetectionEvalConfig cfg;
    cfg.report_path = report_path;
    cfg.output_path = output_path;
    cfg.min_score = min_score;
    cfg.kde_scale = kde_scale;
    rasc::evaluate_detections(cfg);
  });
}

/* ---- streaming ---- */

void rasc_stream_config_default(rasc_stream_config* cfg) {
  if (!cfg) return;
  std::memset(cfg, 0, sizeof *cfg);
  cfg->codec = RASC_CODEC_BLOCK_DCT;
  cfg->quality = 75;
  cfg->q_scale = 1.0;
  cfg->sensor = RASC_SENSOR_CAMERA;
  cfg->frame_width = 256;
  cfg->frame_height = 256;
  rasc_grid_config_default(&cfg->grid);
  cfg->window_seconds = 300.0;
}

namespace {

rasc::SenderConfig sender_config(const rasc_stream_config& cfg,
                                 std::shared_ptr<const rasc::AeModel> model) {
  rasc::SenderConfig out;
  out.codec.codec = cfg.codec == RASC_CODEC_LEARNED_AE ? rasc::CodecId::learned_ae
                                                       : rasc::CodecId::block_dct;
  out.codec.quality = cfg.quality;
  out.codec.q_scale = cfg.q_scale > 0 ? cfg.q_scale : 1.0;
  out.codec.model = std::move(model);
  out.grid = to_core(cfg.grid);
  out.pace_fps = cfg.pace_fps;
  out.duration_s = cfg.duration_s;
  out.max_frames = cfg.max_frames;
  return out;
}

std::unique_ptr<rasc::FrameSource> make_source(const rasc_stream_config& cfg) {
  if (cfg.source_dir) return rasc::make_replay_source(cfg.source_dir);
  if (cfg.sensor == RASC_SENSOR_LIDAR)
    return rasc::make_synthetic_lidar_source(cfg.grid.rows, uint32_t(cfg.grid.cols) * 4,
                                             cfg.seed);
  return rasc::make_synthetic_camera_source(cfg.frame_width ? cfg.frame_width : 256,
                                            cfg.frame_height ? cfg.frame_height : 256, cfg.seed);
}

std::shared_ptr<const rasc::AeModel> load_model_if(const rasc_stream_config& cfg) {
  if (cfg.codec != RASC_CODEC_LEARNED_AE) return nullptr;
  rasc::require(cfg.model_path != nullptr, rasc::Status::invalid_argument,
                "learned codec needs model_path");
  return std::make_shared<rasc::AeModel>(rasc::AeModel::load(cfg.model_path));
}

void fill_summary(const rasc::BenchReport& report, rasc_bench_summary* out) {
  if (!out) return;
  out->fps = report.fps;
  out->mean_preprocess_ms = report.preprocess.mean;
  out->mean_encode_ms = report.encode.mean;
  out->mean_serialize_ms = report.serialize.mean;
  out->mean_network_ms = report.network.mean;
  out->mean_decode_ms = report.decode.mean;
  out->end_to_end_mean_ms = report.end_to_end_mean_ms;
  out->wall_mean_ms = report.wall_mean_ms;
  out->frames = report.frames;
  out->dropped_frames = report.dropped_frames;
  out->malformed_frames = report.malformed_frames;
  out->decode_failures = report.decode_failures;
}

void write_text(const std::string& path, const std::string& text) {
  std::vector<uint8_t> bytes(text.begin(), text.end());
  rasc::write_file(path, bytes);
}

}  // namespace

rasc_status rasc_bench_loopback(const rasc_stream_config* cfg, const char* csv_out,
                                rasc_bench_summary* summary_out) {
  if (!cfg) return invalid("NULL argument");
  return guard([&] {
    auto model = load_model_if(*cfg);
    auto source = make_source(*cfg);
    rasc::SenderConfig scfg = sender_config(*cfg, model);
    rasc::ReceiverConfig rcfg;
    rcfg.sink_dir = cfg->sink_dir ? cfg->sink_dir : "";
    rcfg.model = model;
    rcfg.grid = to_core(cfg->grid);
    double window = cfg->window_seconds > 0 ? cfg->window_seconds : 300.0;
    rasc::BenchOutput out = rasc::bench_loopback(*source, scfg, rcfg, window);
    if (csv_out) write_text(csv_out, rasc::timing_csv(out.records, out.report));
    fill_summary(out.report, summary_out);
  });
}

rasc_status rasc_stream_send(const rasc_stream_config* cfg, const char* host, uint16_t port,
                             const char* csv_out) {
  if (!cfg || !host) return invalid("NULL argument");
  return guard([&] {
    auto model = load_model_if(*cfg);
    auto source = make_source(*cfg);
    rasc::SenderConfig scfg = sender_config(*cfg, model);
    rasc::SenderResult result = rasc::run_sender(*source, scfg, host, port);
    if (csv_out) {
      rasc::BenchReport report =
          rasc::aggregate_timings(result.records, cfg->window_seconds > 0 ? cfg->window_seconds : 300.0);
      report.dropped_frames = result.dropped_frames;
      report.skipped_source_files = result.skipped_source_files;
      write_text(csv_out, rasc::timing_csv(result.records, report));
    }
  });
}

rasc_status rasc_stream_receive(const rasc_stream_config* cfg, const char* host, uint16_t port,
                                const char* csv_out) {
  if (!cfg || !host) return invalid("NULL argument");
  return guard([&] {
    auto model = load_model_if(*cfg);
    rasc::TcpListener listener(host, port);
    rasc::ReceiverConfig rcfg;
    rcfg.sink_dir = cfg->sink_dir ? cfg->sink_dir : "";
    rcfg.model = model;
    rcfg.grid = to_core(cfg->grid);
    rcfg.max_frames = cfg->max_frames;
    rasc::ReceiverResult result = rasc::run_receiver(listener, rcfg);
    if (csv_out && !result.records.empty()) {
      rasc::BenchReport report = rasc::aggregate_timings(
          result.records, cfg->window_seconds > 0 ? cfg->window_seconds : 300.0);
      report.malformed_frames = result.malformed_frames;
      report.decode_failures = result.decode_failures;
      write_text(csv_out, rasc::timing_csv(result.records, report));
    }
  });
}

}  // extern "C"
