#include "rasc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "rasc/dct_codec.hpp"
#include "rasc/io.hpp"

namespace rasc {

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::vector<std::string> list_corpus(const std::string& dir) {
  namespace fs = std::filesystem;
  require(fs::is_directory(dir), Status::io_error, dir + " is not a directory");
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".ppm")
      paths.push_back(entry.path().string());
  std::sort(paths.begin(), paths.end());
  require(!paths.empty(), Status::invalid_argument, dir + " holds no .ppm images");
  return paths;
}

// sidecar lines: image,tag,lpips
std::map<std::pair<std::string, std::string>, double> load_lpips_sidecar(
    const std::string& path) {
  std::map<std::pair<std::string, std::string>, double> out;
  std::ifstream in(path);
  require(bool(in), Status::io_error, "cannot open " + path);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line == "image,tag,lpips") continue;
    std::istringstream row(line);
    std::string image, tag, value;
    if (!std::getline(row, image, ',') || !std::getline(row, tag, ',') ||
        !std::getline(row, value, ','))
      fail(Status::bad_format, path + ": bad sidecar line " + std::to_string(line_no));
    try {
      out[{image, tag}] = std::stod(value);
    } catch (const std::exception&) {
      fail(Status::bad_format, path + ": bad lpips value on line " + std::to_string(line_no));
    }
  }
  return out;
}

struct RatePoint {
  std::string tag;
  int quality = 0;
  double q_scale = 1.0;
  std::shared_ptr<const AeModel> model;
};

std::vector<RatePoint> rate_points(const SweepSpec& spec) {
  std::vector<RatePoint> points;
  if (spec.codec == CodecId::block_dct) {
    require(!spec.qualities.empty(), Status::invalid_argument,
            "block-DCT sweep needs quality values");
    for (int q : spec.qualities) {
      RatePoint p;
      p.quality = q;
      p.tag = "q" + std::to_string(q);
      points.push_back(std::move(p));
    }
  } else if (!spec.model_paths.empty()) {
    for (const std::string& path : spec.model_paths) {
      RatePoint p;
      p.model = std::make_shared<AeModel>(AeModel::load(path));
      p.tag = std::filesystem::path(path).stem().string();
      points.push_back(std::move(p));
    }
  } else {
    fail(Status::invalid_argument,
         "learned-codec sweep needs checkpoints, or one checkpoint with quantization scales");
  }
  return points;
}

}  // namespace

SweepResult run_rd_sweep(const SweepSpec& spec) {
  std::vector<RatePoint> points;
  if (spec.codec == CodecId::learned_ae && !spec.q_scales.empty()) {
    require(spec.model_paths.size() == 1, Status::invalid_argument,
            "quantization-scale sweep takes exactly one checkpoint");
    auto model = std::make_shared<AeModel>(AeModel::load(spec.model_paths[0]));
    for (double s : spec.q_scales) {
      RatePoint p;
      p.model = model;
      p.q_scale = s;
      char tag[32];
      std::snprintf(tag, sizeof tag, "x%g", s);
      p.tag = tag;
      points.push_back(std::move(p));
    }
  } else {
    points = rate_points(spec);
  }
  require(points.size() >= 2, Status::invalid_argument, "a sweep needs at least 2 rate points");

  std::map<std::pair<std::string, std::string>, double> lpips;
  bool with_lpips = !spec.lpips_sidecar.empty();
  if (with_lpips) lpips = load_lpips_sidecar(spec.lpips_sidecar);

  SweepResult result;
  for (const std::string& path : list_corpus(spec.input_dir)) {
    Image8 original = load_image(path);
    std::string image_name = std::filesystem::path(path).stem().string();
    for (const RatePoint& point : points) {
      EncodedPayload payload;
      Image8 recon;
      if (spec.codec == CodecId::block_dct) {
        payload = dct_encode_image(original, point.quality);
        recon = dct_decode_image(payload);
      } else {
        payload = ae_encode_image(original, *point.model, point.q_scale);
        recon = ae_decode_image(payload, *point.model);
      }
      RdRow row;
      row.image = image_name;
      row.tag = point.tag;
      row.metrics.mse = mse(original, recon);
      row.metrics.psnr = psnr(original, recon);
      row.metrics.ms_ssim = ms_ssim(original, recon);
      row.metrics.bpp = payload.bpp();
      if (with_lpips) {
        auto it = lpips.find({image_name, point.tag});
        if (it != lpips.end()) row.metrics.lpips = it->second;
      }
      result.rows.push_back(std::move(row));
    }
  }
  std::stable_sort(result.rows.begin(), result.rows.end(), [](const RdRow& a, const RdRow& b) {
    if (a.metrics.bpp != b.metrics.bpp) return a.metrics.bpp < b.metrics.bpp;
    if (a.image != b.image) return a.image < b.image;
    return a.tag < b.tag;
  });
  result.csv = rd_csv(result.rows, with_lpips);
  if (!spec.output_csv.empty()) {
    std::vector<uint8_t> bytes(result.csv.begin(), result.csv.end());
    write_file(spec.output_csv, bytes);
  }
  return result;
}

std::string rd_csv(const std::vector<RdRow>& rows, bool with_lpips) {
  std::string out = with_lpips ? "bpp,mse,psnr,ms_ssim,lpips\n" : "bpp,mse,psnr,ms_ssim\n";
  for (const RdRow& row : rows) {
    double p = std::isinf(row.metrics.psnr) ? kPsnrCap : row.metrics.psnr;
    out += fmt(row.metrics.bpp) + "," + fmt(row.metrics.mse) + "," + fmt(p) + "," +
           fmt(row.metrics.ms_ssim);
    if (with_lpips) {
      out += ",";
      if (row.metrics.lpips) out += fmt(*row.metrics.lpips);
    }
    out += "\n";
  }
  return out;
}

DetectionEval evaluate_detections(const DetectionEvalConfig& cfg) {
  std::vector<DetectionCountRecord> records =
      ingest_detection_report(cfg.report_path, cfg.min_score);
  DetectionEval eval;
  std::vector<double> errors;
  std::map<int64_t, std::vector<double>> buckets;  // key: round(bpp * 100)
  for (const DetectionCountRecord& rec : records) {
    if (rec.excluded) {
      ++eval.excluded;
      continue;
    }
    ++eval.included;
    double err = relative_detection_error(rec);
    errors.push_back(err);
    buckets[int64_t(std::llround(rec.bpp * 100.0))].push_back(err);
  }
  require(eval.included > 0, Status::invalid_argument,
          "every record has n_orig = 0; nothing to evaluate");

  for (const auto& [key, errs] : buckets) {
    BucketStat stat;
    stat.bpp = double(key) / 100.0;
    stat.count = errs.size();
    double sum = 0;
    size_t at_m100 = 0, at_zero = 0;
    for (double e : errs) {
      sum += e;
      if (e == -100.0) ++at_m100;
      if (e == 0.0) ++at_zero;
    }
    stat.mean_error = sum / double(errs.size());
    stat.share_minus100 = double(at_m100) / double(errs.size());
    stat.share_zero = double(at_zero) / double(errs.size());
    eval.buckets.push_back(stat);
  }

  for (int e = -100; e <= 100; ++e) eval.error_grid.push_back(double(e));
  double mn = errors[0], mx = errors[0];
  for (double e : errors) {
    mn = std::min(mn, e);
    mx = std::max(mx, e);
  }
  if (errors.size() >= 2 && mx > mn) {
    eval.density = kde_scott(errors, cfg.kde_scale, eval.error_grid);
  } else {
    // all errors identical: a bandwidth is undefined, emit a point mass
    eval.density.assign(eval.error_grid.size(), 0.0);
    double target = errors[0];
    size_t best = 0;
    for (size_t i = 1; i < eval.error_grid.size(); ++i)
      if (std::abs(eval.error_grid[i] - target) < std::abs(eval.error_grid[best] - target))
        best = i;
    eval.density[best] = 1.0;
  }

  std::string out;
  out += "# detection evaluation: included " + std::to_string(eval.included) + ", excluded " +
         std::to_string(eval.excluded) + "\n";
  out += "bucket_bpp,count,mean_error,share_minus100,share_zero\n";
  for (const BucketStat& b : eval.buckets)
    out += fmt(b.bpp) + "," + std::to_string(b.count) + "," + fmt(b.mean_error) + "," +
           fmt(b.share_minus100) + "," + fmt(b.share_zero) + "\n";
  out += "error,density\n";
  for (size_t i = 0; i < eval.error_grid.size(); ++i)
    out += fmt(eval.error_grid[i]) + "," + fmt(eval.density[i]) + "\n";
  eval.text = out;
  if (!cfg.output_path.empty()) {
    std::vector<uint8_t> bytes(out.begin(), out.end());
    write_file(cfg.output_path, bytes);
  }
  return eval;
}

std::string timing_csv(const std::vector<TimingRecord>& records, const BenchReport& report) {
  std::string out =
      "frame_id,sensor,t_capture_ns,t_preprocess_ms,t_encode_ms,t_serialize_ms,t_network_ms,"
      "t_decode_ms,end_to_end_ms,wall_ms,payload_bytes,bpp\n";
  auto cell = [](double v) { return v >= 0 ? fmt(v) : std::string(); };
  for (const TimingRecord& r : records) {
    double e2e = r.t_preprocess_ms;
    for (double v : {r.t_encode_ms, r.t_serialize_ms, r.t_network_ms, r.t_decode_ms})
      if (v >= 0) e2e += v;
    out += std::to_string(r.frame_id) + "," +
           (r.sensor == SensorType::camera ? "camera" : "lidar") + "," +
           std::to_string(r.t_capture_ns) + "," + fmt(r.t_preprocess_ms) + "," +
           cell(r.t_encode_ms) + "," + cell(r.t_serialize_ms) + "," + cell(r.t_network_ms) + "," +
           cell(r.t_decode_ms) + "," + fmt(e2e) + "," + cell(r.wall_ms) + "," +
           std::to_string(r.payload_bytes) + "," + fmt(r.bpp) + "\n";
  }
  out += "# summary\n";
  out += "# frames," + std::to_string(report.frames) + "\n";
  out += "# fps," + fmt(report.fps) + "\n";
  out += "# window_seconds," + fmt(report.window_seconds) + "\n";
  out += "# stage,mean_ms,median_ms,p99_ms\n";
  auto stage = [&](const char* name, const StageStats& s) {
    out += std::string("# ") + name + "," + fmt(s.mean) + "," + fmt(s.median) + "," + fmt(s.p99) +
           "\n";
  };
  stage("preprocess", report.preprocess);
  stage("encode", report.encode);
  stage("serialize", report.serialize);
  stage("network", report.network);
  stage("decode", report.decode);
  out += "# end_to_end_mean_ms," + fmt(report.end_to_end_mean_ms) + "\n";
  if (report.wall_mean_ms >= 0) out += "# wall_mean_ms," + fmt(report.wall_mean_ms) + "\n";
  out += "# dropped_frames," + std::to_string(report.dropped_frames) + "\n";
  out += "# malformed_frames," + std::to_string(report.malformed_frames) + "\n";
  out += "# decode_failures," + std::to_string(report.decode_failures) + "\n";
  out += "# skipped_source_files," + std::to_string(report.skipped_source_files) + "\n";
  return out;
}

}  // namespace rasc
