#include "rasc/dct_codec.hpp"

#include <array>
#include <cmath>

#include "rasc/section.hpp"

namespace rasc {

namespace {

// JPEG Annex K luminance table, applied to all channels.
constexpr int kBaseQuant[64] = {
    16, 11, 10, 16, 24,  40,  51,  61,   //
    12, 12, 14, 19, 26,  58,  60,  55,   //
    14, 13, 16, 24, 40,  57,  69,  56,   //
    14, 17, 22, 29, 51,  87,  80,  62,   //
    18, 22, 37, 56, 68,  109, 103, 77,   //
    24, 35, 55, 64, 81,  104, 113, 92,   //
    49, 64, 78, 87, 103, 121, 120, 101,  //
    72, 92, 95, 98, 112, 100, 103, 99};

constexpr int kZigZag[64] = {0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
                             12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
                             35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
                             58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

struct DctBasis {
  double c[8][8];
  DctBasis() {
    constexpr double kPi = 3.14159265358979323846;
    for (int k = 0; k < 8; ++k) {
      double a = k == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
      for (int n = 0; n < 8; ++n) c[k][n] = a * std::cos((2 * n + 1) * k * kPi / 16.0);
    }
  }
};

const DctBasis& basis() {
  static const DctBasis b;
  return b;
}

void forward_dct(const double in[64], double out[64]) {
  const auto& c = basis().c;
  double tmp[64];
  for (int k = 0; k < 8; ++k)
    for (int n = 0; n < 8; ++n) {
      double s = 0;
      for (int m = 0; m < 8; ++m) s += c[k][m] * in[m * 8 + n];
      tmp[k * 8 + n] = s;
    }
  for (int k = 0; k < 8; ++k)
    for (int l = 0; l < 8; ++l) {
      double s = 0;
      for (int m = 0; m < 8; ++m) s += tmp[k * 8 + m] * c[l][m];
      out[k * 8 + l] = s;
    }
}

void inverse_dct(const double in[64], double out[64]) {
  const auto& c = basis().c;
  double tmp[64];
  for (int n = 0; n < 8; ++n)
    for (int l = 0; l < 8; ++l) {
      double s = 0;
      for (int m = 0; m < 8; ++m) s += c[m][n] * in[m * 8 + l];
      tmp[n * 8 + l] = s;
    }
  for (int n = 0; n < 8; ++n)
    for (int p = 0; p < 8; ++p) {
      double s = 0;
      for (int m = 0; m < 8; ++m) s += tmp[n * 8 + m] * c[m][p];
      out[n * 8 + p] = s;
    }
}

std::array<double, 64> step_matrix(int quality) {
  require(quality >= 1 && quality <= 100, Status::invalid_argument, "quality must be in [1,100]");
  double s = quality < 50 ? 5000.0 / quality : 200.0 - 2.0 * quality;
  std::array<double, 64> steps;
  for (int i = 0; i < 64; ++i) steps[i] = std::clamp(kBaseQuant[i] * s / 100.0, 1.0, 2040.0);
  return steps;
}

uint32_t padded8(uint32_t v) { return (v + 7) / 8 * 8; }

// Mirror with period 2n; degenerates to edge replication for n = 1.
uint32_t reflect(uint32_t i, uint32_t n) {
  uint32_t m = i % (2 * n);
  return m < n ? m : 2 * n - 1 - m;
}

struct ChannelSymbols {
  int32_t dc_first = 0;
  std::vector<int32_t> symbols;  // DC deltas for blocks 1..B-1, then 63 ACs per block
};

ChannelSymbols encode_plane(const double* plane, uint32_t w, uint32_t h,
                            const std::array<double, 64>& steps) {
  uint32_t pw = padded8(w), ph = padded8(h);
  uint32_t blocks_x = pw / 8, blocks_y = ph / 8;
  ChannelSymbols out;
  out.symbols.reserve(size_t(blocks_x) * blocks_y * 64);
  std::vector<int32_t> ac;
  ac.reserve(size_t(blocks_x) * blocks_y * 63);
  int32_t prev_dc = 0;
  bool first = true;
  double block[64], coef[64];
  for (uint32_t by = 0; by < blocks_y; ++by)
    for (uint32_t bx = 0; bx < blocks_x; ++bx) {
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
          uint32_t sy = reflect(by * 8 + y, h), sx = reflect(bx * 8 + x, w);
          block[y * 8 + x] = plane[size_t(sy) * w + sx] * 255.0 - 128.0;
        }
      forward_dct(block, coef);
      int32_t dc = quantize_value(coef[0], steps[0]);
      if (first) {
        out.dc_first = dc;
        first = false;
      } else {
        out.symbols.push_back(dc - prev_dc);
      }
      prev_dc = dc;
      for (int i = 1; i < 64; ++i) {
        int z = kZigZag[i];
        ac.push_back(quantize_value(coef[z], steps[z]));
      }
    }
  out.symbols.insert(out.symbols.end(), ac.begin(), ac.end());
  return out;
}

void decode_plane(std::span<const int32_t> symbols, int32_t dc_first, uint32_t w, uint32_t h,
                  const std::array<double, 64>& steps, double* plane) {
  uint32_t pw = padded8(w), ph = padded8(h);
  uint32_t blocks_x = pw / 8, blocks_y = ph / 8;
  size_t n_blocks = size_t(blocks_x) * blocks_y;
  require(symbols.size() == n_blocks - 1 + n_blocks * 63, Status::bad_format,
          "coefficient count mismatch");
  std::span<const int32_t> deltas = symbols.subspan(0, n_blocks - 1);
  std::span<const int32_t> ac = symbols.subspan(n_blocks - 1);
  int32_t dc = dc_first;
  double coef[64], block[64];
  for (size_t b = 0; b < n_blocks; ++b) {
    if (b > 0) dc += deltas[b - 1];
    coef[0] = double(dc) * steps[0];
    for (int i = 1; i < 64; ++i) {
      int z = kZigZag[i];
      coef[z] = double(ac[b * 63 + i - 1]) * steps[z];
    }
    inverse_dct(coef, block);
    uint32_t bx = uint32_t(b % blocks_x), by = uint32_t(b / blocks_x);
    for (int y = 0; y < 8; ++y) {
      uint32_t py = by * 8 + y;
      if (py >= h) continue;
      for (int x = 0; x < 8; ++x) {
        uint32_t px = bx * 8 + x;
        if (px >= w) continue;
        plane[size_t(py) * w + px] = std::clamp((block[y * 8 + x] + 128.0) / 255.0, 0.0, 1.0);
      }
    }
  }
}

EncodedPayload encode_raster(const Raster& raster, int quality,
                             const std::vector<uint8_t>* occupancy) {
  require(raster.w >= 1 && raster.h >= 1, Status::invalid_argument, "empty input");
  require(raster.w <= 0xFFFF && raster.h <= 0xFFFF, Status::invalid_argument, "input too large");
  auto steps = step_matrix(quality);
  EncodedPayload payload;
  payload.codec = CodecId::block_dct;
  payload.quality_tag = uint8_t(quality);
  payload.width = uint16_t(raster.w);
  payload.height = uint16_t(raster.h);
  payload.channels = 3;
  if (raster.w % 8) payload.flags |= kPayloadFlagPadWidth;
  if (raster.h % 8) payload.flags |= kPayloadFlagPadHeight;
  if (occupancy) {
    payload.flags |= kPayloadFlagGrid;
    write_occupancy_section(payload.body, *occupancy);
  }
  for (int c = 0; c < 3; ++c) {
    ChannelSymbols ch = encode_plane(raster.plane(c), raster.w, raster.h, steps);
    put_i32(payload.body, ch.dc_first);
    write_symbol_section(payload.body, ch.symbols);
  }
  return payload;
}

Raster decode_raster(const EncodedPayload& payload, std::vector<uint8_t>* occupancy_out) {
  require(payload.codec == CodecId::block_dct, Status::mismatch,
          "payload was not produced by the block-DCT codec");
  auto steps = step_matrix(payload.quality_tag);
  Raster raster(payload.width, payload.height);
  ByteReader r(payload.body);
  if (payload.is_grid()) {
    auto occ = read_occupancy_section(r, size_t(payload.width) * payload.height);
    if (occupancy_out) *occupancy_out = std::move(occ);
  } else {
    require(occupancy_out == nullptr, Status::mismatch, "payload carries no occupancy");
  }
  uint32_t blocks = (padded8(raster.w) / 8) * (padded8(raster.h) / 8);
  size_t n_symbols = size_t(blocks) - 1 + size_t(blocks) * 63;
  for (int c = 0; c < 3; ++c) {
    int32_t dc_first = r.i32();
    std::vector<int32_t> symbols = read_symbol_section(r, n_symbols);
    decode_plane(symbols, dc_first, raster.w, raster.h, steps, raster.plane(c));
  }
  require(r.remaining() == 0, Status::bad_format, "trailing bytes in payload");
  return raster;
}

}  // namespace

EncodedPayload dct_encode_image(const Image8& image, int quality) {
  require(image.width >= 1 && image.height >= 1, Status::invalid_argument, "empty image");
  return encode_raster(raster_from_image(image), quality, nullptr);
}

Image8 dct_decode_image(const EncodedPayload& payload) {
  require(!payload.is_grid(), Status::mismatch, "payload holds a grid, not an image");
  return image_from_raster(decode_raster(payload, nullptr));
}

EncodedPayload dct_encode_grid(const NormalizedGrid& grid, int quality) {
  require(grid.bins() > 0, Status::invalid_argument, "empty grid");
  return encode_raster(raster_from_ngrid(grid), quality, &grid.occupancy);
}

NormalizedGrid dct_decode_grid(const EncodedPayload& payload, const GridConfig& angles) {
  require(payload.is_grid(), Status::mismatch, "payload holds an image, not a grid");
  std::vector<uint8_t> occupancy;
  Raster raster = decode_raster(payload, &occupancy);
  return ngrid_from_raster(raster, std::move(occupancy), angles);
}

}  // namespace rasc
