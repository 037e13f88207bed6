#pragma once

#include "rasc/rng.hpp"
#include "rasc/types.hpp"
#include "test_tmpdir.hpp"

namespace testutil {

inline rasc::Image8 random_image(uint32_t w, uint32_t h, uint64_t seed) {
  rasc::Image8 img(w, h);
  rasc::Rng rng(seed);
  for (auto& v : img.data) v = uint8_t(rng.below(256));
  return img;
}

inline rasc::PointCloud random_cloud(size_t n, uint64_t seed, float scale = 50.0f) {
  rasc::PointCloud cloud;
  rasc::Rng rng(seed);
  for (size_t i = 0; i < n; ++i) {
    float x = float(rng.uniform(-scale, scale));
    float y = float(rng.uniform(-scale, scale));
    float z = float(rng.uniform(-4.0, 2.0));
    cloud.points.push_back({x, y, z, float(rng.uniform())});
  }
  return cloud;
}

}  // namespace testutil
