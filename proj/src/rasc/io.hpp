#pragma once

#include <string>

#include "rasc/grid.hpp"
#include "rasc/types.hpp"

namespace rasc {

// Binary PPM (P6), maxval 255 only.
Image8 load_image(const std::string& path);
void save_image(const Image8& image, const std::string& path);

// KITTI velodyne layout: consecutive little-endian float32 (x,y,z,intensity)
// records, 16 bytes per point.
PointCloud load_pointcloud(const std::string& path);
void save_pointcloud(const PointCloud& cloud, const std::string& path);

// RGRD container: 16-byte header (magic "RGRD", u16 rows, u16 cols, u32
// flags, u32 reserved), packed row-major occupancy bitmap padded to a byte,
// then float32 (x,y,z) triples for occupied bins in row-major order.
// Angular extents are not stored; the caller supplies them (defaults apply).
RangeGrid load_grid(const std::string& path, const GridConfig& cfg = GridConfig{});
void save_grid(const RangeGrid& grid, const std::string& path);

std::vector<uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const uint8_t> bytes);

}  // namespace rasc
