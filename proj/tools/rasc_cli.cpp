// rasc command-line front end. Talks to the core exclusively through the
// C API in rasc.h; every command writes a JSON sidecar recording the exact
// configuration it ran with.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rasc.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNetwork = 4;

int exit_code_for(rasc_status status) {
  switch (status) {
    case RASC_OK:
      return kExitOk;
    case RASC_ERR_INVALID:
      return kExitUsage;
    case RASC_ERR_IO:
    case RASC_ERR_FORMAT:
    case RASC_ERR_MISMATCH:
      return kExitData;
    case RASC_ERR_NET:
      return kExitNetwork;
    default:
      return kExitData;
  }
}

int fail_with(rasc_status status) {
  std::fprintf(stderr, "error: %s\n", rasc_errmsg());
  return exit_code_for(status);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void write_sidecar(const std::string& out_path, const json& config) {
  if (out_path.empty()) return;
  std::string path = out_path + ".config.json";
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) return;
  std::string text = config.dump(2);
  std::fwrite(text.data(), 1, text.size(), f);
  std::fputc('\n', f);
  std::fclose(f);
}

json grid_json(const rasc_grid_config& g) {
  return json{{"rows", g.rows},
              {"cols", g.cols},
              {"fov_max_deg", g.elev_max_deg},
              {"fov_min_deg", g.elev_min_deg},
              {"r_max_m", g.range_max_m}};
}

bool parse_endpoint(const std::string& addr, std::string& host, uint16_t& port) {
  auto colon = addr.rfind(':');
  if (colon == std::string::npos || colon + 1 >= addr.size()) return false;
  host = addr.substr(0, colon);
  try {
    int p = std::stoi(addr.substr(colon + 1));
    if (p < 0 || p > 65535) return false;
    port = uint16_t(p);
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

struct GridFlags {
  rasc_grid_config cfg{};

  void add_to(CLI::App* cmd) {
    rasc_grid_config_default(&cfg);
    cmd->add_option("--grid-h", cfg.rows, "grid rows")->capture_default_str();
    cmd->add_option("--grid-w", cfg.cols, "grid columns")->capture_default_str();
    cmd->add_option("--fov-max", cfg.elev_max_deg, "upper elevation, degrees")
        ->capture_default_str();
    cmd->add_option("--fov-min", cfg.elev_min_deg, "lower elevation, degrees")
        ->capture_default_str();
    cmd->add_option("--r-max", cfg.range_max_m, "max range, meters")->capture_default_str();
  }
};

// --- transform ---

struct TransformArgs {
  std::string in, out;
  bool inverse = false;
  GridFlags grid;
};

int run_transform(const TransformArgs& a) {
  rasc_status st;
  if (a.inverse) {
    rasc_grid* grid = nullptr;
    if ((st = rasc_grid_load(a.in.c_str(), &a.grid.cfg, &grid)) != RASC_OK) return fail_with(st);
    rasc_cloud* cloud = nullptr;
    st = rasc_grid_to_cloud(grid, &cloud);
    rasc_grid_free(grid);
    if (st != RASC_OK) return fail_with(st);
    st = rasc_cloud_save(cloud, a.out.c_str());
    std::printf("wrote %zu points to %s\n", rasc_cloud_size(cloud), a.out.c_str());
    rasc_cloud_free(cloud);
    if (st != RASC_OK) return fail_with(st);
  } else {
    rasc_cloud* cloud = nullptr;
    if ((st = rasc_cloud_load(a.in.c_str(), &cloud)) != RASC_OK) return fail_with(st);
    rasc_grid* grid = nullptr;
    st = rasc_cloud_to_grid(cloud, &a.grid.cfg, &grid);
    rasc_cloud_free(cloud);
    if (st != RASC_OK) return fail_with(st);
    st = rasc_grid_save(grid, a.out.c_str());
    std::printf("grid %ux%u, %zu occupied bins -> %s\n", rasc_grid_rows(grid),
                rasc_grid_cols(grid), rasc_grid_occupied(grid), a.out.c_str());
    rasc_grid_free(grid);
    if (st != RASC_OK) return fail_with(st);
  }
  write_sidecar(a.out, json{{"command", "transform"},
                            {"in", a.in},
                            {"out", a.out},
                            {"inverse", a.inverse},
                            {"grid", grid_json(a.grid.cfg)}});
  return kExitOk;
}

// --- encode / decode ---

struct CodecArgs {
  std::string in, out;
  std::string codec = "dct";
  int quality = 75;
  std::string model_path;
  double q_scale = 1.0;
  GridFlags grid;
};

// Returns kExitOk, or an exit code after printing its own message.
int load_model_if_needed(const CodecArgs& a, rasc_model** model) {
  if (a.codec != "ae") return kExitOk;
  if (a.model_path.empty()) {
    std::fprintf(stderr, "error: the learned codec needs --model <checkpoint>\n");
    return kExitUsage;
  }
  rasc_status st = rasc_model_load(a.model_path.c_str(), model);
  return st == RASC_OK ? kExitOk : fail_with(st);
}

int run_encode(const CodecArgs& a) {
  rasc_codec codec = a.codec == "ae" ? RASC_CODEC_LEARNED_AE : RASC_CODEC_BLOCK_DCT;
  rasc_model* model = nullptr;
  if (int rc = load_model_if_needed(a, &model); rc != kExitOk) return rc;
  rasc_status st;
  std::unique_ptr<rasc_model, decltype(&rasc_model_free)> model_guard(model, rasc_model_free);

  rasc_payload* payload = nullptr;
  if (ends_with(a.in, ".rgrd")) {
    rasc_grid* grid = nullptr;
    if ((st = rasc_grid_load(a.in.c_str(), &a.grid.cfg, &grid)) != RASC_OK) return fail_with(st);
    st = rasc_encode_grid(grid, codec, a.quality, model, a.q_scale, &payload);
    rasc_grid_free(grid);
  } else {
    rasc_image* image = nullptr;
    if ((st = rasc_image_load(a.in.c_str(), &image)) != RASC_OK) return fail_with(st);
    st = rasc_encode_image(image, codec, a.quality, model, a.q_scale, &payload);
    rasc_image_free(image);
  }
  if (st != RASC_OK) return fail_with(st);
  st = rasc_payload_save(payload, a.out.c_str());
  std::printf("%s: %zu bytes, %.4f bpp\n", a.out.c_str(), rasc_payload_bytes(payload),
              rasc_payload_bpp(payload));
  rasc_payload_free(payload);
  if (st != RASC_OK) return fail_with(st);
  write_sidecar(a.out, json{{"command", "encode"},
                            {"in", a.in},
                            {"out", a.out},
                            {"codec", a.codec},
                            {"quality", a.quality},
                            {"model", a.model_path},
                            {"q_scale", a.q_scale},
                            {"grid", grid_json(a.grid.cfg)}});
  return kExitOk;
}

int run_decode(const CodecArgs& a) {
  rasc_payload* payload = nullptr;
  rasc_status st = rasc_payload_load(a.in.c_str(), &payload);
  if (st != RASC_OK) return fail_with(st);
  std::unique_ptr<rasc_payload, decltype(&rasc_payload_free)> payload_guard(payload,
                                                                            rasc_payload_free);
  rasc_model* model = nullptr;
  CodecArgs with_codec = a;
  with_codec.codec = rasc_payload_codec(payload) == RASC_CODEC_LEARNED_AE ? "ae" : "dct";
  if (int rc = load_model_if_needed(with_codec, &model); rc != kExitOk) return rc;
  std::unique_ptr<rasc_model, decltype(&rasc_model_free)> model_guard(model, rasc_model_free);

  if (rasc_payload_is_grid(payload)) {
    rasc_grid* grid = nullptr;
    if ((st = rasc_decode_grid(payload, model, &a.grid.cfg, &grid)) != RASC_OK)
      return fail_with(st);
    st = rasc_grid_save(grid, a.out.c_str());
    rasc_grid_free(grid);
  } else {
    rasc_image* image = nullptr;
    if ((st = rasc_decode_image(payload, model, &image)) != RASC_OK) return fail_with(st);
    st = rasc_image_save(image, a.out.c_str());
    rasc_image_free(image);
  }
  if (st != RASC_OK) return fail_with(st);
  std::printf("decoded %s -> %s\n", a.in.c_str(), a.out.c_str());
  write_sidecar(a.out, json{{"command", "decode"},
                            {"in", a.in},
                            {"out", a.out},
                            {"model", a.model_path},
                            {"grid", grid_json(a.grid.cfg)}});
  return kExitOk;
}

// --- train ---

struct TrainArgs {
  std::string data_dir, out, trace;
  rasc_train_config cfg{};
};

int run_train(const TrainArgs& a) {
  rasc_status st = rasc_train(a.data_dir.c_str(), &a.cfg, a.out.c_str(),
                              a.trace.empty() ? nullptr : a.trace.c_str());
  if (st != RASC_OK) return fail_with(st);
  std::printf("checkpoint -> %s\n", a.out.c_str());
  write_sidecar(a.out, json{{"command", "train"},
                            {"data", a.data_dir},
                            {"out", a.out},
                            {"lambda", a.cfg.lambda},
                            {"steps", a.cfg.steps},
                            {"lr", a.cfg.lr},
                            {"batch", a.cfg.batch},
                            {"crop", a.cfg.crop},
                            {"seed", a.cfg.seed},
                            {"q_step", a.cfg.q_step},
                            {"hidden_channels", a.cfg.hidden_channels},
                            {"latent_channels", a.cfg.latent_channels}});
  return kExitOk;
}

// --- rd-sweep ---

struct SweepArgs {
  std::string codec = "dct";
  std::string input_dir, out_csv, lpips_sidecar;
  std::vector<int> qualities;
  std::vector<std::string> models;
  std::vector<double> q_scales;
};

int run_sweep(const SweepArgs& a) {
  std::vector<const char*> model_ptrs;
  for (const std::string& m : a.models) model_ptrs.push_back(m.c_str());
  rasc_sweep_spec spec{};
  spec.codec = a.codec == "ae" ? RASC_CODEC_LEARNED_AE : RASC_CODEC_BLOCK_DCT;
  spec.input_dir = a.input_dir.c_str();
  spec.output_csv = a.out_csv.c_str();
  spec.qualities = a.qualities.data();
  spec.n_qualities = a.qualities.size();
  spec.model_paths = model_ptrs.data();
  spec.n_models = model_ptrs.size();
  spec.q_scales = a.q_scales.data();
  spec.n_q_scales = a.q_scales.size();
  spec.lpips_sidecar = a.lpips_sidecar.empty() ? nullptr : a.lpips_sidecar.c_str();
  rasc_status st = rasc_rd_sweep(&spec);
  if (st != RASC_OK) return fail_with(st);
  std::printf("sweep -> %s\n", a.out_csv.c_str());
  write_sidecar(a.out_csv, json{{"command", "rd-sweep"},
                                {"codec", a.codec},
                                {"in", a.input_dir},
                                {"out", a.out_csv},
                                {"qualities", a.qualities},
                                {"models", a.models},
                                {"q_scales", a.q_scales},
                                {"lpips_sidecar", a.lpips_sidecar}});
  return kExitOk;
}

// --- eval-detections ---

struct EvalArgs {
  std::string report, out;
  double threshold = 0.7;
  double kde_scale = 0.6;
};

int run_eval(const EvalArgs& a) {
  rasc_status st =
      rasc_eval_detections(a.report.c_str(), a.out.c_str(), a.threshold, a.kde_scale);
  if (st != RASC_OK) return fail_with(st);
  std::printf("evaluation -> %s\n", a.out.c_str());
  write_sidecar(a.out, json{{"command", "eval-detections"},
                            {"report", a.report},
                            {"out", a.out},
                            {"threshold", a.threshold},
                            {"kde_scale", a.kde_scale}});
  return kExitOk;
}

// --- bench / stream ---

struct BenchArgs {
  std::string mode = "loopback";
  std::string codec = "dct";
  int quality = 75;
  std::string model_path;
  double q_scale = 1.0;
  std::string sensor = "camera";
  std::string source_dir;
  uint32_t width = 256, height = 256;
  double duration = 10.0;
  double fps = 33.0;
  uint64_t frames = 0;
  std::string listen_addr, connect_addr;
  std::string out_csv, sink_dir;
  uint64_t seed = 0;
  double window = 300.0;
  GridFlags grid;
};

int run_bench(const BenchArgs& a) {
  rasc_stream_config cfg;
  rasc_stream_config_default(&cfg);
  cfg.codec = a.codec == "ae" ? RASC_CODEC_LEARNED_AE : RASC_CODEC_BLOCK_DCT;
  cfg.quality = a.quality;
  cfg.model_path = a.model_path.empty() ? nullptr : a.model_path.c_str();
  cfg.q_scale = a.q_scale;
  cfg.sensor = a.sensor == "lidar" ? RASC_SENSOR_LIDAR : RASC_SENSOR_CAMERA;
  cfg.source_dir = a.source_dir.empty() ? nullptr : a.source_dir.c_str();
  cfg.frame_width = a.width;
  cfg.frame_height = a.height;
  cfg.grid = a.grid.cfg;
  cfg.pace_fps = a.fps;
  cfg.duration_s = a.duration;
  cfg.max_frames = a.frames;
  cfg.seed = a.seed;
  cfg.sink_dir = a.sink_dir.empty() ? nullptr : a.sink_dir.c_str();
  cfg.window_seconds = a.window;

  json sidecar{{"command", "bench"},
               {"mode", a.mode},
               {"codec", a.codec},
               {"quality", a.quality},
               {"model", a.model_path},
               {"q_scale", a.q_scale},
               {"sensor", a.sensor},
               {"source", a.source_dir},
               {"duration_s", a.duration},
               {"pace_fps", a.fps},
               {"max_frames", a.frames},
               {"seed", a.seed},
               {"window_seconds", a.window},
               {"grid", grid_json(a.grid.cfg)}};

  const char* csv = a.out_csv.empty() ? nullptr : a.out_csv.c_str();
  if (a.mode == "loopback") {
    if (a.duration <= 0 && a.frames == 0) {
      std::fprintf(stderr, "error: loopback bench needs --duration > 0 or --frames\n");
      return kExitUsage;
    }
    rasc_bench_summary summary{};
    rasc_status st = rasc_bench_loopback(&cfg, csv, &summary);
    if (st != RASC_OK) return fail_with(st);
    std::printf("frames %llu  fps %.2f\n", static_cast<unsigned long long>(summary.frames),
                summary.fps);
    std::printf("mean ms: preprocess %.3f  encode %.3f  serialize %.3f  network %.3f  decode %.3f\n",
                summary.mean_preprocess_ms, summary.mean_encode_ms, summary.mean_serialize_ms,
                summary.mean_network_ms, summary.mean_decode_ms);
    std::printf("end-to-end %.3f ms (stage sum), %.3f ms (measured)\n",
                summary.end_to_end_mean_ms, summary.wall_mean_ms);
    if (summary.dropped_frames || summary.malformed_frames || summary.decode_failures)
      std::printf("dropped %llu  malformed %llu  decode failures %llu\n",
                  static_cast<unsigned long long>(summary.dropped_frames),
                  static_cast<unsigned long long>(summary.malformed_frames),
                  static_cast<unsigned long long>(summary.decode_failures));
    write_sidecar(a.out_csv, sidecar);
    return kExitOk;
  }
  std::string host;
  uint16_t port = 0;
  if (a.mode == "send") {
    if (!parse_endpoint(a.connect_addr, host, port)) {
      std::fprintf(stderr, "error: --connect host:port required for send mode\n");
      return kExitUsage;
    }
    rasc_status st = rasc_stream_send(&cfg, host.c_str(), port, csv);
    if (st != RASC_OK) return fail_with(st);
    write_sidecar(a.out_csv, sidecar);
    return kExitOk;
  }
  if (a.mode == "receive") {
    if (!parse_endpoint(a.listen_addr, host, port)) {
      std::fprintf(stderr, "error: --listen host:port required for receive mode\n");
      return kExitUsage;
    }
    rasc_status st = rasc_stream_receive(&cfg, host.c_str(), port, csv);
    if (st != RASC_OK) return fail_with(st);
    write_sidecar(a.out_csv, sidecar);
    return kExitOk;
  }
  std::fprintf(stderr, "error: unknown mode %s\n", a.mode.c_str());
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rasc - sensor-stream compression toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rasc_version());

  TransformArgs transform;
  auto* cmd_transform =
      app.add_subcommand("transform", "point cloud <-> range grid conversion");
  cmd_transform->add_option("--in", transform.in, "input file")->required();
  cmd_transform->add_option("--out", transform.out, "output file")->required();
  cmd_transform->add_flag("--inverse", transform.inverse, "grid -> point cloud");
  transform.grid.add_to(cmd_transform);

  CodecArgs encode;
  auto* cmd_encode = app.add_subcommand("encode", "compress an image or range grid");
  cmd_encode->add_option("--in", encode.in, ".ppm image or .rgrd grid")->required();
  cmd_encode->add_option("--out", encode.out, "payload file")->required();
  cmd_encode->add_option("--codec", encode.codec, "dct|ae")
      ->check(CLI::IsMember({"dct", "ae"}))
      ->capture_default_str();
  cmd_encode->add_option("--quality", encode.quality, "block codec quality 1..100")
      ->capture_default_str();
  cmd_encode->add_option("--model", encode.model_path, "learned codec checkpoint");
  cmd_encode->add_option("--q-scale", encode.q_scale, "learned codec quantization scale")
      ->capture_default_str();
  encode.grid.add_to(cmd_encode);

  CodecArgs decode;
  auto* cmd_decode = app.add_subcommand("decode", "decompress a payload");
  cmd_decode->add_option("--in", decode.in, "payload file")->required();
  cmd_decode->add_option("--out", decode.out, "output .ppm or .rgrd")->required();
  cmd_decode->add_option("--model", decode.model_path, "learned codec checkpoint");
  decode.grid.add_to(cmd_decode);

  TrainArgs train;
  rasc_train_config_default(&train.cfg);
  auto* cmd_train = app.add_subcommand("train", "train the learned codec");
  cmd_train->add_option("--data", train.data_dir, "directory of .ppm images")->required();
  cmd_train->add_option("--out", train.out, "checkpoint file")->required();
  cmd_train->add_option("--trace", train.trace, "per-step loss CSV");
  cmd_train->add_option("--lambda", train.cfg.lambda, "rate weight")->capture_default_str();
  cmd_train->add_option("--steps", train.cfg.steps, "training steps")->capture_default_str();
  cmd_train->add_option("--lr", train.cfg.lr, "learning rate")->capture_default_str();
  cmd_train->add_option("--batch", train.cfg.batch, "batch size")->capture_default_str();
  cmd_train->add_option("--crop", train.cfg.crop, "crop size")->capture_default_str();
  cmd_train->add_option("--seed", train.cfg.seed, "rng seed")->capture_default_str();
  cmd_train->add_option("--q-step", train.cfg.q_step, "quantization step")
      ->capture_default_str();
  cmd_train->add_option("--hidden", train.cfg.hidden_channels, "hidden channels")
      ->capture_default_str();
  cmd_train->add_option("--latent", train.cfg.latent_channels, "latent channels")
      ->capture_default_str();

  SweepArgs sweep;
  auto* cmd_sweep = app.add_subcommand("rd-sweep", "rate-distortion sweep over a corpus");
  cmd_sweep->add_option("--codec", sweep.codec, "dct|ae")
      ->check(CLI::IsMember({"dct", "ae"}))
      ->capture_default_str();
  cmd_sweep->add_option("--in", sweep.input_dir, "directory of .ppm images")->required();
  cmd_sweep->add_option("--out", sweep.out_csv, "output CSV")->required();
  cmd_sweep->add_option("--qualities", sweep.qualities, "block codec qualities")
      ->delimiter(',');
  cmd_sweep->add_option("--models", sweep.models, "learned codec checkpoints")->delimiter(',');
  cmd_sweep->add_option("--q-scales", sweep.q_scales, "quantization scales over one checkpoint")
      ->delimiter(',');
  cmd_sweep->add_option("--lpips-sidecar", sweep.lpips_sidecar,
                        "CSV image,tag,lpips with ingested values");

  EvalArgs eval;
  auto* cmd_eval = app.add_subcommand("eval-detections", "detection-count evaluation");
  cmd_eval->add_option("--report", eval.report, "detection report file")->required();
  cmd_eval->add_option("--out", eval.out, "output file")->required();
  cmd_eval->add_option("--threshold", eval.threshold, "min box score")->capture_default_str();
  cmd_eval->add_option("--kde-scale", eval.kde_scale, "bandwidth scale")->capture_default_str();

  BenchArgs bench;
  auto* cmd_bench = app.add_subcommand("bench", "streaming pipeline benchmark");
  cmd_bench->add_option("--mode", bench.mode, "loopback|send|receive")
      ->check(CLI::IsMember({"loopback", "send", "receive"}))
      ->capture_default_str();
  cmd_bench->add_option("--codec", bench.codec, "dct|ae")
      ->check(CLI::IsMember({"dct", "ae"}))
      ->capture_default_str();
  cmd_bench->add_option("--quality", bench.quality, "block codec quality")
      ->capture_default_str();
  cmd_bench->add_option("--model", bench.model_path, "learned codec checkpoint");
  cmd_bench->add_option("--q-scale", bench.q_scale, "learned codec quantization scale")
      ->capture_default_str();
  cmd_bench->add_option("--sensor", bench.sensor, "camera|lidar (synthetic source)")
      ->check(CLI::IsMember({"camera", "lidar"}))
      ->capture_default_str();
  cmd_bench->add_option("--source", bench.source_dir, "replay directory (.ppm/.bin)");
  cmd_bench->add_option("--width", bench.width, "synthetic camera width")
      ->capture_default_str();
  cmd_bench->add_option("--height", bench.height, "synthetic camera height")
      ->capture_default_str();
  cmd_bench->add_option("--duration", bench.duration, "seconds to run")->capture_default_str();
  cmd_bench->add_option("--fps", bench.fps, "source pacing, 0 = unpaced")
      ->capture_default_str();
  cmd_bench->add_option("--frames", bench.frames, "stop after N frames (0 = by duration)")
      ->capture_default_str();
  cmd_bench->add_option("--listen", bench.listen_addr, "host:port (receive mode)");
  cmd_bench->add_option("--connect", bench.connect_addr, "host:port (send mode)");
  cmd_bench->add_option("--out", bench.out_csv, "per-frame CSV + summary");
  cmd_bench->add_option("--sink", bench.sink_dir, "receiver artifact directory");
  cmd_bench->add_option("--seed", bench.seed, "rng seed")->capture_default_str();
  cmd_bench->add_option("--window", bench.window, "aggregation window seconds")
      ->capture_default_str();
  bench.grid.add_to(cmd_bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (cmd_transform->parsed()) return run_transform(transform);
  if (cmd_encode->parsed()) return run_encode(encode);
  if (cmd_decode->parsed()) return run_decode(decode);
  if (cmd_train->parsed()) return run_train(train);
  if (cmd_sweep->parsed()) return run_sweep(sweep);
  if (cmd_eval->parsed()) return run_eval(eval);
  if (cmd_bench->parsed()) return run_bench(bench);
  return kExitUsage;
}
