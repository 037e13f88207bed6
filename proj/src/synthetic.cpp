#include "rasc/synthetic.hpp"

#include <algorithm>
#include <cmath>

namespace rasc {

Image8 make_natural_image(uint32_t width, uint32_t height, uint64_t seed) {
  Image8 img(width, height);
  Rng rng(seed);

  struct Blob {
    double cx, cy, sx, sy, amp[3];
  };
  std::vector<Blob> blobs(12);
  for (Blob& b : blobs) {
    b.cx = rng.uniform() * width;
    b.cy = rng.uniform() * height;
    b.sx = (0.04 + 0.16 * rng.uniform()) * width;
    b.sy = (0.04 + 0.16 * rng.uniform()) * height;
    for (double& a : b.amp) a = rng.uniform(-70.0, 70.0);
  }
  double sky[3] = {140 + 60 * rng.uniform(), 160 + 60 * rng.uniform(), 190 + 50 * rng.uniform()};
  double ground[3] = {70 + 40 * rng.uniform(), 70 + 40 * rng.uniform(), 60 + 30 * rng.uniform()};
  double horizon = height * (0.35 + 0.2 * rng.uniform());

  for (uint32_t y = 0; y < height; ++y) {
    double t = 1.0 / (1.0 + std::exp(-(double(y) - horizon) / (0.03 * height + 1.0)));
    for (uint32_t x = 0; x < width; ++x) {
      double base[3];
      for (int c = 0; c < 3; ++c) base[c] = sky[c] * (1 - t) + ground[c] * t;
      for (const Blob& b : blobs) {
        double dx = (x - b.cx) / b.sx, dy = (y - b.cy) / b.sy;
        double g = std::exp(-0.5 * (dx * dx + dy * dy));
        for (int c = 0; c < 3; ++c) base[c] += b.amp[c] * g;
      }
      for (int c = 0; c < 3; ++c) {
        double v = base[c] + rng.uniform(-3.0, 3.0);
        img.at(x, y, c) = uint8_t(std::clamp(v, 0.0, 255.0) + 0.5);
      }
    }
  }
  return img;
}

Image8 make_noise_image(uint32_t width, uint32_t height, uint64_t seed) {
  Image8 img(width, height);
  Rng rng(seed);
  for (uint8_t& v : img.data) v = uint8_t(rng.below(256));
  return img;
}

PointCloud make_scan(const ScanSpec& spec, uint64_t seed) {
  Rng rng(seed);
  constexpr double kPi = 3.14159265358979323846;
  double elev_max = spec.elev_max_deg * kPi / 180.0;
  double elev_min = spec.elev_min_deg * kPi / 180.0;

  // A few larger structures standing on the ground plane.
  struct Wall {
    double az_center, az_width, dist, top_z;
  };
  std::vector<Wall> walls(8);
  for (Wall& w : walls) {
    w.az_center = rng.uniform(-kPi, kPi);
    w.az_width = rng.uniform(0.1, 0.5);
    w.dist = rng.uniform(4.0, 0.6 * spec.max_range_m);
    w.top_z = rng.uniform(0.5, 5.0);
  }
  double sensor_z = 1.8;

  PointCloud cloud;
  cloud.points.reserve(size_t(spec.rings) * spec.azimuth_steps);
  for (uint32_t ring = 0; ring < spec.rings; ++ring) {
    double phi;
    if (spec.grid_aligned) {
      phi = elev_max - (ring + 0.5) / spec.rings * (elev_max - elev_min);
    } else {
      phi = elev_min + (elev_max - elev_min) * (spec.rings == 1 ? 0.5 : double(ring) / (spec.rings - 1));
    }
    for (uint32_t step = 0; step < spec.azimuth_steps; ++step) {
      double theta = -kPi + (step + (spec.grid_aligned ? 0.5 : 0.0)) / spec.azimuth_steps * 2.0 * kPi;
      double range;
      if (phi < -1e-6) {
        range = sensor_z / -std::sin(phi);  // ground return
      } else {
        range = spec.max_range_m * 2;  // upward rays miss unless a wall intervenes
      }
      for (const Wall& w : walls) {
        double d = std::abs(std::remainder(theta - w.az_center, 2.0 * kPi));
        if (d > w.az_width) continue;
        double horiz = w.dist;
        double wall_range = horiz / std::cos(phi);
        double hit_z = sensor_z + wall_range * std::sin(phi);
        if (hit_z >= -0.2 && hit_z <= w.top_z && wall_range < range) range = wall_range;
      }
      if (!spec.grid_aligned) range *= 1.0 + rng.uniform(-0.01, 0.01);
      if (range > spec.max_range_m || range <= 0.1) continue;
      float x = float(range * std::cos(phi) * std::cos(theta));
      float y = float(range * std::cos(phi) * std::sin(theta));
      float z = float(range * std::sin(phi) - 0.0);
      cloud.points.push_back({x, y, z, float(rng.uniform())});
    }
  }
  return cloud;
}

}  // namespace rasc
