#pragma once

#include "rasc/grid.hpp"
#include "rasc/rng.hpp"
#include "rasc/types.hpp"

namespace rasc {

// Street-scene-like test raster: sky/ground gradient plus smooth random
// blobs and mild sensor noise. Deterministic for a given seed.
Image8 make_natural_image(uint32_t width, uint32_t height, uint64_t seed);

// Uniform random pixels.
Image8 make_noise_image(uint32_t width, uint32_t height, uint64_t seed);

struct ScanSpec {
  uint32_t rings = 64;
  uint32_t azimuth_steps = 2048;
  float elev_max_deg = 2.0f;
  float elev_min_deg = -24.8f;
  float max_range_m = 100.0f;
  bool grid_aligned = false;  // place rays exactly at bin centers of rings x azimuth_steps
};

// Rotating-scanner scan: ground returns plus a few wall/object structures,
// one return per (ring, azimuth) ray within range.
PointCloud make_scan(const ScanSpec& spec, uint64_t seed);

}  // namespace rasc
