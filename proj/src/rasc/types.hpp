#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rasc/common.hpp"

namespace rasc {

// 8-bit interleaved RGB raster.
struct Image8 {
  static constexpr uint32_t kChannels = 3;

  uint32_t width = 0;
  uint32_t height = 0;
  std::vector<uint8_t> data;  // row-major, interleaved

  Image8() = default;
  Image8(uint32_t w, uint32_t h) : width(w), height(h), data(size_t(w) * h * kChannels, 0) {
    require(w >= 1 && h >= 1, Status::invalid_argument, "image dims must be >= 1");
  }

  size_t samples() const { return data.size(); }
  size_t pixels() const { return size_t(width) * height; }

  uint8_t at(uint32_t x, uint32_t y, uint32_t c) const {
    return data[(size_t(y) * width + x) * kChannels + c];
  }
  uint8_t& at(uint32_t x, uint32_t y, uint32_t c) {
    return data[(size_t(y) * width + x) * kChannels + c];
  }

  bool operator==(const Image8&) const = default;
};

struct PointXYZI {
  float x = 0, y = 0, z = 0;
  float intensity = 0;

  bool operator==(const PointXYZI&) const = default;
};

struct PointCloud {
  std::vector<PointXYZI> points;

  size_t size() const { return points.size(); }
  bool operator==(const PointCloud&) const = default;
};

// One row of a rate-distortion table.
struct MetricsRecord {
  double mse = 0;
  double psnr = 0;
  double ms_ssim = 0;
  double bpp = 0;
  std::optional<double> lpips;  // ingested, never computed here
};

}  // namespace rasc
