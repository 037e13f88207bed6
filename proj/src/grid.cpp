#include "rasc/grid.hpp"

#include <cmath>

namespace rasc {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;
}  // namespace

void GridConfig::validate() const {
  require(rows >= 1 && cols >= 1, Status::invalid_argument, "grid dims must be >= 1");
  require(elev_max_deg > elev_min_deg, Status::invalid_argument, "elev_max must exceed elev_min");
  require(range_max_m > 0, Status::invalid_argument, "range_max must be positive");
}

size_t RangeGrid::occupied_count() const {
  size_t n = 0;
  for (uint8_t o : occupancy) n += o;
  return n;
}

bool bin_for_point(const GridConfig& cfg, float x, float y, float z, BinIndex& out) {
  double xd = x, yd = y, zd = z;
  double horiz = std::sqrt(xd * xd + yd * yd);
  double range = std::sqrt(horiz * horiz + zd * zd);
  if (!(range <= cfg.range_max_m)) return false;  // also drops non-finite
  double elev_max = cfg.elev_max_deg * kDegToRad;
  double elev_min = cfg.elev_min_deg * kDegToRad;
  double phi = std::atan2(zd, horiz);
  if (phi < elev_min || phi > elev_max) return false;
  double theta = std::atan2(yd, xd);  // (-pi, pi]
  auto clamp_idx = [](double v, uint32_t n) {
    if (v < 0) return uint32_t(0);
    uint32_t i = uint32_t(v);
    return i >= n ? n - 1 : i;
  };
  out.col = clamp_idx(std::floor((theta + kPi) / (2.0 * kPi) * cfg.cols), cfg.cols);
  // row 0 is the highest elevation
  out.row = clamp_idx(std::floor((elev_max - phi) / (elev_max - elev_min) * cfg.rows), cfg.rows);
  return true;
}

RangeGrid pointcloud_to_grid(const PointCloud& cloud, const GridConfig& cfg) {
  cfg.validate();
  RangeGrid grid(cfg);
  size_t n = grid.bins();
  std::vector<double> sums(n * 3, 0.0);
  std::vector<uint32_t> counts(n, 0);
  BinIndex idx;
  for (const PointXYZI& p : cloud.points) {
    if (!bin_for_point(cfg, p.x, p.y, p.z, idx)) continue;
    size_t bin = size_t(idx.row) * cfg.cols + idx.col;
    sums[bin * 3 + 0] += p.x;
    sums[bin * 3 + 1] += p.y;
    sums[bin * 3 + 2] += p.z;
    counts[bin] += 1;
  }
  for (size_t bin = 0; bin < n; ++bin) {
    if (counts[bin] == 0) continue;
    grid.occupancy[bin] = 1;
    for (int c = 0; c < 3; ++c) grid.coords[bin * 3 + c] = float(sums[bin * 3 + c] / counts[bin]);
  }
  return grid;
}

PointCloud grid_to_pointcloud(const RangeGrid& grid) {
  PointCloud cloud;
  cloud.points.reserve(grid.occupied_count());
  size_t n = grid.bins();
  for (size_t bin = 0; bin < n; ++bin) {
    if (!grid.occupancy[bin]) continue;
    cloud.points.push_back(
        {grid.coords[bin * 3], grid.coords[bin * 3 + 1], grid.coords[bin * 3 + 2], 0.0f});
  }
  return cloud;
}

NormalizedGrid normalize_grid(const RangeGrid& grid) {
  NormalizedGrid out;
  out.config = grid.config;
  out.occupancy = grid.occupancy;
  out.values.assign(grid.coords.size(), 0.0f);
  float r = grid.config.range_max_m;
  size_t n = grid.bins();
  for (size_t bin = 0; bin < n; ++bin) {
    if (!grid.occupancy[bin]) continue;
    for (int c = 0; c < 3; ++c) {
      float v = grid.coords[bin * 3 + c];
      if (v > r) v = r;
      if (v < -r) v = -r;
      out.values[bin * 3 + c] = (v + r) / (2.0f * r);
    }
  }
  return out;
}

RangeGrid denormalize_grid(const NormalizedGrid& ngrid) {
  RangeGrid out(ngrid.config);
  out.occupancy = ngrid.occupancy;
  float r = ngrid.config.range_max_m;
  size_t n = out.bins();
  for (size_t bin = 0; bin < n; ++bin) {
    if (!out.occupancy[bin]) continue;
    for (int c = 0; c < 3; ++c)
      out.coords[bin * 3 + c] = ngrid.values[bin * 3 + c] * 2.0f * r - r;
  }
  return out;
}

GridDistance mean_euclidean_distance(const RangeGrid& a, const RangeGrid& b) {
  require(a.config.rows == b.config.rows && a.config.cols == b.config.cols, Status::mismatch,
          "grid dimension mismatch");
  GridDistance result;
  double sum = 0;
  size_t n = a.bins();
  for (size_t bin = 0; bin < n; ++bin) {
    if (!a.occupancy[bin] || !b.occupancy[bin]) continue;
    double dx = double(a.coords[bin * 3]) - b.coords[bin * 3];
    double dy = double(a.coords[bin * 3 + 1]) - b.coords[bin * 3 + 1];
    double dz = double(a.coords[bin * 3 + 2]) - b.coords[bin * 3 + 2];
    sum += std::sqrt(dx * dx + dy * dy + dz * dz);
    result.compared_bins += 1;
  }
  result.mean_m = result.compared_bins ? sum / result.compared_bins : 0.0;
  return result;
}

}  // namespace rasc
