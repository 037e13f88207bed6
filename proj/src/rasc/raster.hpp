#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "rasc/grid.hpp"
#include "rasc/types.hpp"

namespace rasc {

// Planar double view shared by the codecs; values live in [0,1].
struct Raster {
  uint32_t w = 0, h = 0;
  std::vector<double> v;  // 3 * w * h, channel-major

  Raster() = default;
  Raster(uint32_t width, uint32_t height) : w(width), h(height), v(size_t(3) * width * height, 0.0) {}

  double* plane(int c) { return v.data() + size_t(c) * w * h; }
  const double* plane(int c) const { return v.data() + size_t(c) * w * h; }
};

inline Raster raster_from_image(const Image8& img) {
  Raster r(img.width, img.height);
  size_t n = img.pixels();
  for (size_t p = 0; p < n; ++p)
    for (int c = 0; c < 3; ++c) r.v[size_t(c) * n + p] = img.data[p * 3 + c] / 255.0;
  return r;
}

inline Image8 image_from_raster(const Raster& r) {
  Image8 img(r.w, r.h);
  size_t n = img.pixels();
  for (size_t p = 0; p < n; ++p)
    for (int c = 0; c < 3; ++c) {
      double v = std::clamp(r.v[size_t(c) * n + p], 0.0, 1.0) * 255.0;
      img.data[p * 3 + c] = uint8_t(std::lround(v));
    }
  return img;
}

inline Raster raster_from_ngrid(const NormalizedGrid& g) {
  Raster r(g.config.cols, g.config.rows);
  size_t n = g.bins();
  for (size_t p = 0; p < n; ++p)
    for (int c = 0; c < 3; ++c) r.v[size_t(c) * n + p] = g.values[p * 3 + c];
  return r;
}

inline NormalizedGrid ngrid_from_raster(const Raster& r, std::vector<uint8_t> occupancy,
                                        const GridConfig& cfg) {
  NormalizedGrid g;
  g.config = cfg;
  g.config.rows = uint16_t(r.h);
  g.config.cols = uint16_t(r.w);
  g.occupancy = std::move(occupancy);
  size_t n = g.bins();
  g.values.assign(n * 3, 0.0f);
  for (size_t p = 0; p < n; ++p) {
    if (!g.occupancy[p]) continue;
    for (int c = 0; c < 3; ++c)
      g.values[p * 3 + c] = float(std::clamp(r.v[size_t(c) * n + p], 0.0, 1.0));
  }
  return g;
}

}  // namespace rasc
