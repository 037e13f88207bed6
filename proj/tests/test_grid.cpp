#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "rasc/grid.hpp"
#include "rasc/synthetic.hpp"
#include "oracle_grid.hpp"
#include "test_util.hpp"

using namespace rasc;

TEST_CASE("binning: single point lands where the formulas say") {
  PointCloud cloud;
  cloud.points.push_back({10, 0, 0, 0});
  RangeGrid grid = pointcloud_to_grid(cloud, GridConfig{});
  CHECK(grid.occupied_count() == 1);
  CHECK(grid.occupied(4, 256));
  const float* c = grid.bin(4, 256);
  CHECK(c[0] == 10.0f);
  CHECK(c[1] == 0.0f);
  CHECK(c[2] == 0.0f);
}

TEST_CASE("binning: same-bin points are averaged") {
  PointCloud cloud;
  cloud.points.push_back({10, 0, 0, 0});
  cloud.points.push_back({12, 0, 0, 0});
  RangeGrid grid = pointcloud_to_grid(cloud, GridConfig{});
  CHECK(grid.occupied_count() == 1);
  CHECK(grid.bin(4, 256)[0] == 11.0f);
}

TEST_CASE("binning: out-of-FOV and out-of-range points are dropped") {
  PointCloud cloud;
  float phi = -30.0f * 3.14159265f / 180.0f;
  cloud.points.push_back({10.0f * std::cos(phi), 0, 10.0f * std::sin(phi), 0});
  CHECK(pointcloud_to_grid(cloud, GridConfig{}).occupied_count() == 0);

  cloud.points.clear();
  cloud.points.push_back({500, 0, 0, 0});
  CHECK(pointcloud_to_grid(cloud, GridConfig{}).occupied_count() == 0);
}

TEST_CASE("binning matches the brute-force oracle bit-for-bit") {
  GridConfig cfg;
  for (uint64_t seed = 10; seed < 14; ++seed) {
    PointCloud cloud = testutil::random_cloud(5000, seed);
    RangeGrid got = pointcloud_to_grid(cloud, cfg);
    RangeGrid want = testoracle::oracle_grid(cloud, cfg);
    REQUIRE(got.occupancy == want.occupancy);
    REQUIRE(got.coords == want.coords);
  }
}

TEST_CASE("binning is permutation invariant") {
  GridConfig cfg;
  PointCloud cloud = testutil::random_cloud(2000, 42);
  RangeGrid a = pointcloud_to_grid(cloud, cfg);
  Rng rng(7);
  for (size_t i = cloud.points.size(); i > 1; --i)
    std::swap(cloud.points[i - 1], cloud.points[rng.below(uint32_t(i))]);
  RangeGrid b = pointcloud_to_grid(cloud, cfg);
  CHECK(a.occupancy == b.occupancy);
  // double accumulation re-rounded to float absorbs the order sensitivity
  CHECK(a.coords == b.coords);
}

TEST_CASE("grid_to_pointcloud emits one point per occupied bin, row-major") {
  PointCloud cloud = testutil::random_cloud(3000, 5);
  RangeGrid grid = pointcloud_to_grid(cloud, GridConfig{});
  PointCloud out = grid_to_pointcloud(grid);
  CHECK(out.size() == grid.occupied_count());
  for (const PointXYZI& p : out.points) CHECK(p.intensity == 0.0f);

  CHECK(grid_to_pointcloud(RangeGrid(GridConfig{})).size() == 0);
}

TEST_CASE("re-gridding a reconstructed cloud is a fixed point") {
  for (uint64_t seed = 20; seed < 23; ++seed) {
    PointCloud cloud = testutil::random_cloud(4000, seed);
    RangeGrid grid = pointcloud_to_grid(cloud, GridConfig{});
    RangeGrid again = pointcloud_to_grid(grid_to_pointcloud(grid), GridConfig{});
    CHECK(again.occupancy == grid.occupancy);
    CHECK(again.coords == grid.coords);
  }
}

TEST_CASE("normalize endpoints and round trip") {
  GridConfig cfg;
  cfg.rows = 2;
  cfg.cols = 2;
  RangeGrid grid(cfg);
  grid.occupancy = {1, 1, 1, 0};
  grid.coords.assign(12, 0.0f);
  grid.coords[0] = cfg.range_max_m;   // -> 1.0
  grid.coords[3] = -cfg.range_max_m;  // -> 0.0
  grid.coords[6] = 130.0f;            // clamped to range_max
  NormalizedGrid n = normalize_grid(grid);
  CHECK(n.values[0] == 1.0f);
  CHECK(n.values[3] == 0.0f);
  CHECK(n.values[6] == 1.0f);
  CHECK(n.values[9] == 0.0f);  // unoccupied encodes as 0

  RangeGrid back = denormalize_grid(n);
  CHECK(back.coords[0] == doctest::Approx(cfg.range_max_m));
  CHECK(back.coords[3] == doctest::Approx(-cfg.range_max_m));

  NormalizedGrid mid = n;
  mid.values[0] = 0.5f;
  CHECK(denormalize_grid(mid).coords[0] == doctest::Approx(0.0f));
}

TEST_CASE("normalize/denormalize round trip error is tiny") {
  GridConfig cfg;
  PointCloud cloud = testutil::random_cloud(8000, 33, 100.0f);
  RangeGrid grid = pointcloud_to_grid(cloud, cfg);
  RangeGrid back = denormalize_grid(normalize_grid(grid));
  double bound = cfg.range_max_m * std::pow(2.0, -20);
  for (size_t i = 0; i < grid.coords.size(); ++i)
    CHECK(std::abs(double(grid.coords[i]) - back.coords[i]) <= bound);
}

TEST_CASE("mean euclidean distance") {
  GridConfig cfg;
  cfg.rows = 2;
  cfg.cols = 2;
  RangeGrid a(cfg), b(cfg);
  CHECK(mean_euclidean_distance(a, b).mean_m == 0.0);
  CHECK(mean_euclidean_distance(a, b).compared_bins == 0);

  a.occupancy = {1, 1, 0, 0};
  b.occupancy = {1, 0, 0, 0};
  a.coords[0] = 3;
  a.coords[1] = 4;
  GridDistance d = mean_euclidean_distance(a, b);
  CHECK(d.compared_bins == 1);  // the a-only bin is excluded
  CHECK(d.mean_m == doctest::Approx(5.0));

  CHECK(mean_euclidean_distance(a, a).mean_m == 0.0);

  GridConfig other;
  other.rows = 4;
  other.cols = 2;
  RangeGrid c(other);
  CHECK_THROWS_AS(mean_euclidean_distance(a, c), Error);
}

TEST_CASE("synthetic grid-aligned scan reconstructs exactly") {
  ScanSpec spec;
  spec.rings = 64;
  spec.azimuth_steps = 2048;
  spec.grid_aligned = true;
  PointCloud cloud = make_scan(spec, 99);
  REQUIRE(cloud.size() > 10000);
  RangeGrid grid = pointcloud_to_grid(cloud, GridConfig{});
  RangeGrid again = pointcloud_to_grid(grid_to_pointcloud(grid), GridConfig{});
  GridDistance d = mean_euclidean_distance(grid, again);
  CHECK(d.compared_bins == grid.occupied_count());
  CHECK(d.mean_m == 0.0);
}
