#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rasc/types.hpp"

namespace rasc {

// Mean squared sample difference on the [0,255] scale, over all channels.
double mse(const Image8& a, const Image8& b);

// 10*log10(peak^2/mse). Identical inputs yield +infinity; CSV emitters cap
// the value at kPsnrCap.
inline constexpr double kPsnrCap = 99.0;
double psnr(const Image8& a, const Image8& b);
double psnr_from_mse(double mse_value, double peak);

struct MsSsimResult {
  double value = 0;
  int scales_used = 0;  // 5 when min(dim) >= 176, fewer otherwise
};

// Multi-scale SSIM, 11x11 Gaussian window sigma 1.5, K1=0.01, K2=0.03,
// standard per-scale weights, averaged over channels. When the input is too
// small for 5 scales the leading weights are renormalized.
MsSsimResult ms_ssim_full(const Image8& a, const Image8& b);
double ms_ssim(const Image8& a, const Image8& b);

double bits_per_pixel(uint64_t payload_bytes, uint32_t width, uint32_t height);

struct DetectionCountRecord {
  std::string image_id;
  uint32_t n_orig = 0;
  uint32_t n_recon = 0;
  double bpp = 0;
  bool excluded = false;  // n_orig == 0: not usable for relative error
};

// (n_recon - n_orig) / n_orig * 100. n_orig must be positive.
double relative_detection_error(const DetectionCountRecord& rec);

// Gaussian KDE with bandwidth scale * stddev * n^(-1/5) (Scott's rule with a
// scaling factor; stddev uses the n-1 denominator).
double kde_scott_bandwidth(std::span<const double> samples, double scale);
std::vector<double> kde_scott(std::span<const double> samples, double scale,
                              std::span<const double> eval_points);

// Line-delimited detection report. Two record forms per line:
//   <image_id> <orig|recon> <bpp> count <n>
//   <image_id> <orig|recon> <bpp> boxes <class>:<score> ...
// Boxes below min_score are dropped before counting; '#' starts a comment.
std::vector<DetectionCountRecord> ingest_detection_report(const std::string& path,
                                                          double min_score = 0.7);

}  // namespace rasc
