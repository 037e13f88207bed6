#pragma once

#include <string>
#include <vector>

#include "rasc/ae.hpp"
#include "rasc/metrics.hpp"
#include "rasc/stream.hpp"

namespace rasc {

// One rate-distortion sweep: a codec, its rate points, an image corpus.
// For the block codec the points are qualities; for the learned codec either
// one checkpoint per point or one checkpoint swept over quantization scales.
struct SweepSpec {
  CodecId codec = CodecId::block_dct;
  std::vector<int> qualities;
  std::vector<std::string> model_paths;
  std::vector<double> q_scales;
  std::string input_dir;
  std::string output_csv;      // empty: don't write, just return
  std::string lpips_sidecar;   // optional CSV "image,tag,lpips"
};

struct RdRow {
  std::string image;
  std::string tag;
  MetricsRecord metrics;
};

struct SweepResult {
  std::vector<RdRow> rows;  // sorted by bpp
  std::string csv;
};

SweepResult run_rd_sweep(const SweepSpec& spec);

std::string rd_csv(const std::vector<RdRow>& rows, bool with_lpips);

// Relative-error statistics per bpp bucket plus a KDE table over the error
// grid [-100, 100] step 1.
struct DetectionEvalConfig {
  std::string report_path;
  std::string output_path;  // empty: don't write
  double min_score = 0.7;
  double kde_scale = 0.6;
};

struct BucketStat {
  double bpp = 0;
  size_t count = 0;
  double mean_error = 0;
  double share_minus100 = 0;
  double share_zero = 0;
};

struct DetectionEval {
  std::vector<BucketStat> buckets;
  std::vector<double> error_grid;
  std::vector<double> density;
  size_t included = 0;
  size_t excluded = 0;
  std::string text;
};

DetectionEval evaluate_detections(const DetectionEvalConfig& cfg);

std::string timing_csv(const std::vector<TimingRecord>& records, const BenchReport& report);

}  // namespace rasc
