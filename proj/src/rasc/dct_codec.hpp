#pragma once

#include "rasc/payload.hpp"
#include "rasc/raster.hpp"

namespace rasc {

// 8x8 block-DCT codec: per channel, orthonormal block transform, uniform
// quantization with a quality-scaled step matrix, zig-zag scan, DC deltas,
// range-coded with a per-channel frequency table shipped in the payload.
// Grid payloads additionally carry the occupancy mask, coded losslessly.

EncodedPayload dct_encode_image(const Image8& image, int quality);
Image8 dct_decode_image(const EncodedPayload& payload);

EncodedPayload dct_encode_grid(const NormalizedGrid& grid, int quality);
NormalizedGrid dct_decode_grid(const EncodedPayload& payload,
                               const GridConfig& angles = GridConfig{});

}  // namespace rasc
