#include "rasc/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace rasc {

std::vector<uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(bool(in), Status::io_error, "cannot open " + path);
  in.seekg(0, std::ios::end);
  auto size = in.tellg();
  require(size >= 0, Status::io_error, "cannot stat " + path);
  in.seekg(0, std::ios::beg);
  std::vector<uint8_t> bytes(static_cast<size_t>(size), 0);
  if (size > 0) in.read(reinterpret_cast<char*>(bytes.data()), size);
  require(bool(in), Status::io_error, "short read on " + path);
  return bytes;
}

void write_file(const std::string& path, std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(bool(out), Status::io_error, "cannot create " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  out.flush();
  require(bool(out), Status::io_error, "write failed on " + path);
}

namespace {

// PPM header token: skips whitespace and '#' comments.
uint32_t ppm_token(ByteReader& r, const std::string& path) {
  for (;;) {
    uint8_t c = r.u8();
    if (std::isspace(c)) continue;
    if (c == '#') {
      while (r.u8() != '\n') {
      }
      continue;
    }
    require(std::isdigit(c), Status::bad_format, path + ": bad PPM header");
    uint64_t v = c - '0';
    while (r.remaining() > 0) {
      uint8_t d = r.u8();
      if (!std::isdigit(d)) break;  // consumed the single delimiter
      v = v * 10 + (d - '0');
      require(v <= 0xFFFFFFFFull, Status::bad_format, path + ": PPM value overflow");
    }
    return uint32_t(v);
  }
}

}  // namespace

Image8 load_image(const std::string& path) {
  std::vector<uint8_t> bytes = read_file(path);
  ByteReader r(bytes);
  require(r.remaining() >= 2, Status::bad_format, path + ": truncated PPM header");
  uint8_t m0 = r.u8(), m1 = r.u8();
  require(m0 == 'P' && m1 == '6', Status::bad_format, path + ": unsupported magic (want P6)");
  uint32_t w = ppm_token(r, path);
  uint32_t h = ppm_token(r, path);
  uint32_t maxval = ppm_token(r, path);
  require(w >= 1 && h >= 1, Status::bad_format, path + ": zero dimension");
  require(maxval == 255, Status::bad_format, path + ": only 8-bit (maxval 255) supported");
  size_t need = size_t(w) * h * Image8::kChannels;
  require(r.remaining() >= need, Status::bad_format, path + ": truncated pixel data");
  Image8 img(w, h);
  auto payload = r.bytes(need);
  std::copy(payload.begin(), payload.end(), img.data.begin());
  return img;
}

void save_image(const Image8& image, const std::string& path) {
  require(image.width >= 1 && image.height >= 1, Status::invalid_argument, "empty image");
  require(image.data.size() == image.pixels() * Image8::kChannels, Status::invalid_argument,
          "image data size mismatch");
  std::vector<uint8_t> bytes;
  bytes.reserve(image.data.size() + 32);
  char header[64];
  int n = std::snprintf(header, sizeof header, "P6\n%u %u\n255\n", image.width, image.height);
  bytes.insert(bytes.end(), header, header + n);
  bytes.insert(bytes.end(), image.data.begin(), image.data.end());
  write_file(path, bytes);
}

PointCloud load_pointcloud(const std::string& path) {
  std::vector<uint8_t> bytes = read_file(path);
  require(bytes.size() % 16 == 0, Status::bad_format,
          path + ": size is not a multiple of 16 bytes");
  PointCloud cloud;
  size_t n = bytes.size() / 16;
  cloud.points.resize(n);
  ByteReader r(bytes);
  for (size_t i = 0; i < n; ++i) {
    PointXYZI& p = cloud.points[i];
    p.x = r.f32();
    p.y = r.f32();
    p.z = r.f32();
    p.intensity = r.f32();
    require(std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z) &&
                std::isfinite(p.intensity),
            Status::bad_format, path + ": non-finite point value");
  }
  return cloud;
}

void save_pointcloud(const PointCloud& cloud, const std::string& path) {
  std::vector<uint8_t> bytes;
  bytes.reserve(cloud.size() * 16);
  for (const PointXYZI& p : cloud.points) {
    put_f32(bytes, p.x);
    put_f32(bytes, p.y);
    put_f32(bytes, p.z);
    put_f32(bytes, p.intensity);
  }
  write_file(path, bytes);
}

namespace {
constexpr char kGridMagic[4] = {'R', 'G', 'R', 'D'};
}

RangeGrid load_grid(const std::string& path, const GridConfig& cfg) {
  std::vector<uint8_t> bytes = read_file(path);
  ByteReader r(bytes);
  require(r.remaining() >= 16, Status::bad_format, path + ": truncated RGRD header");
  auto magic = r.bytes(4);
  require(std::memcmp(magic.data(), kGridMagic, 4) == 0, Status::bad_format,
          path + ": bad RGRD magic");
  uint16_t rows = r.u16();
  uint16_t cols = r.u16();
  r.u32();  // flags
  r.u32();  // reserved
  require(rows >= 1 && cols >= 1, Status::bad_format, path + ": zero grid dimension");
  GridConfig grid_cfg = cfg;
  grid_cfg.rows = rows;
  grid_cfg.cols = cols;
  grid_cfg.validate();
  size_t bins = size_t(rows) * cols;
  size_t bitmap_bytes = (bins + 7) / 8;
  // size sanity before any allocation sized from the header
  require(r.remaining() >= bitmap_bytes, Status::bad_format, path + ": truncated occupancy bitmap");
  RangeGrid grid(grid_cfg);
  auto bitmap = r.bytes(bitmap_bytes);
  size_t occupied = 0;
  for (size_t i = 0; i < bins; ++i) {
    uint8_t bit = (bitmap[i / 8] >> (i % 8)) & 1;
    grid.occupancy[i] = bit;
    occupied += bit;
  }
  require(r.remaining() == occupied * 12, Status::bad_format,
          path + ": coordinate payload size mismatch");
  for (size_t i = 0; i < bins; ++i) {
    if (!grid.occupancy[i]) continue;
    for (int c = 0; c < 3; ++c) {
      float v = r.f32();
      require(std::isfinite(v), Status::bad_format, path + ": non-finite coordinate");
      grid.coords[i * 3 + c] = v;
    }
  }
  return grid;
}

void save_grid(const RangeGrid& grid, const std::string& path) {
  size_t bins = grid.bins();
  require(grid.occupancy.size() == bins && grid.coords.size() == bins * 3,
          Status::invalid_argument, "grid buffers inconsistent with config");
  std::vector<uint8_t> bytes;
  bytes.insert(bytes.end(), kGridMagic, kGridMagic + 4);
  put_u16(bytes, grid.config.rows);
  put_u16(bytes, grid.config.cols);
  put_u32(bytes, 0);  // flags
  put_u32(bytes, 0);  // reserved
  size_t bitmap_bytes = (bins + 7) / 8;
  size_t bitmap_at = bytes.size();
  bytes.resize(bytes.size() + bitmap_bytes, 0);
  for (size_t i = 0; i < bins; ++i)
    if (grid.occupancy[i]) bytes[bitmap_at + i / 8] |= uint8_t(1u << (i % 8));
  for (size_t i = 0; i < bins; ++i) {
    if (!grid.occupancy[i]) continue;
    for (int c = 0; c < 3; ++c) put_f32(bytes, grid.coords[i * 3 + c]);
  }
  write_file(path, bytes);
}

}  // namespace rasc
