#pragma once

#include <cstdint>
#include <vector>

#include "rasc/types.hpp"

namespace rasc {

// Azimuth/elevation binning layout. Defaults give HDL-64-like 512x64 grids.
struct GridConfig {
  uint16_t rows = 64;
  uint16_t cols = 512;
  float elev_max_deg = 2.0f;
  float elev_min_deg = -24.8f;
  float range_max_m = 120.0f;

  void validate() const;
  bool operator==(const GridConfig&) const = default;
};

// h x w grid of per-bin averaged coordinates. coords are meaningful only
// where occupancy is set; empty bins hold zeros.
struct RangeGrid {
  GridConfig config;
  std::vector<uint8_t> occupancy;  // rows*cols, 0/1
  std::vector<float> coords;       // rows*cols*3, (x,y,z)

  RangeGrid() = default;
  explicit RangeGrid(const GridConfig& cfg)
      : config(cfg),
        occupancy(size_t(cfg.rows) * cfg.cols, 0),
        coords(size_t(cfg.rows) * cfg.cols * 3, 0.0f) {}

  size_t bins() const { return size_t(config.rows) * config.cols; }
  size_t occupied_count() const;

  bool occupied(uint32_t row, uint32_t col) const {
    return occupancy[size_t(row) * config.cols + col] != 0;
  }
  const float* bin(uint32_t row, uint32_t col) const {
    return &coords[(size_t(row) * config.cols + col) * 3];
  }

  bool operator==(const RangeGrid&) const = default;
};

// Codec-facing view of a grid: coordinates mapped affinely into [0,1].
struct NormalizedGrid {
  GridConfig config;
  std::vector<uint8_t> occupancy;
  std::vector<float> values;  // rows*cols*3, in [0,1], 0 where unoccupied

  size_t bins() const { return size_t(config.rows) * config.cols; }
};

struct BinIndex {
  uint32_t row = 0;
  uint32_t col = 0;
};

// Bin assignment for one point; returns false when the point is out of the
// configured field of view or beyond range_max_m.
bool bin_for_point(const GridConfig& cfg, float x, float y, float z, BinIndex& out);

RangeGrid pointcloud_to_grid(const PointCloud& cloud, const GridConfig& cfg);

// One point per occupied bin, row-major bin order, intensity 0.
PointCloud grid_to_pointcloud(const RangeGrid& grid);

NormalizedGrid normalize_grid(const RangeGrid& grid);
RangeGrid denormalize_grid(const NormalizedGrid& ngrid);

struct GridDistance {
  double mean_m = 0;
  size_t compared_bins = 0;
};

// Mean L2 distance over bins occupied in both grids; 0 when none are.
GridDistance mean_euclidean_distance(const RangeGrid& a, const RangeGrid& b);

}  // namespace rasc
