#pragma once

#include <cstdint>
#include <vector>

#include "rasc/common.hpp"

namespace rasc {

enum class CodecId : uint8_t {
  block_dct = 1,
  learned_ae = 2,
};

// Flag bits in the payload header.
inline constexpr uint8_t kPayloadFlagPadWidth = 1u << 0;
inline constexpr uint8_t kPayloadFlagPadHeight = 1u << 1;
inline constexpr uint8_t kPayloadFlagGrid = 1u << 2;  // carries an occupancy section

// One compressed frame. Wire layout: u8 codec id, u8 quality tag, u16 width,
// u16 height, u8 channels, u8 flags, then the codec-specific body (entropy
// model tables and coded bytes).
struct EncodedPayload {
  CodecId codec = CodecId::block_dct;
  uint8_t quality_tag = 0;
  uint16_t width = 0;   // source dims before any padding
  uint16_t height = 0;
  uint8_t channels = 3;
  uint8_t flags = 0;
  std::vector<uint8_t> body;

  static constexpr size_t kHeaderBytes = 8;

  size_t byte_length() const { return kHeaderBytes + body.size(); }
  bool is_grid() const { return (flags & kPayloadFlagGrid) != 0; }
  double bpp() const;

  std::vector<uint8_t> serialize() const;
  static EncodedPayload parse(std::span<const uint8_t> bytes);
};

// Scalar quantizer, round half away from zero.
int32_t quantize_value(double v, double step);
double dequantize_value(int32_t index, double step);
std::vector<int32_t> quantize(std::span<const double> values, double step);
std::vector<double> dequantize(std::span<const int32_t> indices, double step);

// Rate-distortion objectives. The VAE form is mse + lambda*bpp; the GAN form
// weighs mse by k_m and an ingested LPIPS by k_p before adding the rate term.
struct RdLossConfig {
  double lambda = 0.01;
  double k_m = 0.075 * 0.03125;  // 0.075 * 2^-5
  double k_p = 1.0;
};

double rd_loss_vae(double mse, double bpp, double lambda);
double rd_loss_gan(double mse, double lpips, double bpp, const RdLossConfig& cfg);

}  // namespace rasc
