#include "rasc/payload.hpp"

#include <cmath>

#include "rasc/metrics.hpp"

namespace rasc {

double EncodedPayload::bpp() const { return bits_per_pixel(byte_length(), width, height); }

std::vector<uint8_t> EncodedPayload::serialize() const {
  std::vector<uint8_t> out;
  out.reserve(kHeaderBytes + body.size());
  out.push_back(uint8_t(codec));
  out.push_back(quality_tag);
  put_u16(out, width);
  put_u16(out, height);
  out.push_back(channels);
  out.push_back(flags);
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

EncodedPayload EncodedPayload::parse(std::span<const uint8_t> bytes) {
  require(bytes.size() >= kHeaderBytes, Status::bad_format, "payload shorter than header");
  EncodedPayload p;
  ByteReader r(bytes);
  uint8_t codec = r.u8();
  require(codec == uint8_t(CodecId::block_dct) || codec == uint8_t(CodecId::learned_ae),
          Status::bad_format, "unknown codec id " + std::to_string(codec));
  p.codec = CodecId(codec);
  p.quality_tag = r.u8();
  p.width = r.u16();
  p.height = r.u16();
  p.channels = r.u8();
  p.flags = r.u8();
  require(p.width >= 1 && p.height >= 1, Status::bad_format, "payload with zero dimension");
  require(p.channels == 3, Status::bad_format, "unsupported channel count");
  // 64M pixel cap bounds decoder allocations on hostile input
  require(uint64_t(p.width) * p.height <= (1ull << 26), Status::bad_format,
          "payload dimensions implausibly large");
  auto rest = r.bytes(r.remaining());
  p.body.assign(rest.begin(), rest.end());
  return p;
}

int32_t quantize_value(double v, double step) {
  require(step > 0, Status::invalid_argument, "quantization step must be positive");
  double scaled = v / step;
  // round half away from zero
  return int32_t(scaled >= 0 ? std::floor(scaled + 0.5) : std::ceil(scaled - 0.5));
}

double dequantize_value(int32_t index, double step) {
  require(step > 0, Status::invalid_argument, "quantization step must be positive");
  return double(index) * step;
}

std::vector<int32_t> quantize(std::span<const double> values, double step) {
  require(step > 0, Status::invalid_argument, "quantization step must be positive");
  std::vector<int32_t> out(values.size());
  for (size_t i = 0; i < values.size(); ++i) out[i] = quantize_value(values[i], step);
  return out;
}

std::vector<double> dequantize(std::span<const int32_t> indices, double step) {
  require(step > 0, Status::invalid_argument, "quantization step must be positive");
  std::vector<double> out(indices.size());
  for (size_t i = 0; i < indices.size(); ++i) out[i] = double(indices[i]) * step;
  return out;
}

double rd_loss_vae(double mse, double bpp, double lambda) {
  require(mse >= 0 && bpp >= 0 && lambda >= 0, Status::invalid_argument,
          "rd loss inputs must be non-negative");
  return mse + lambda * bpp;
}

double rd_loss_gan(double mse, double lpips, double bpp, const RdLossConfig& cfg) {
  require(mse >= 0 && lpips >= 0 && bpp >= 0, Status::invalid_argument,
          "rd loss inputs must be non-negative");
  require(cfg.lambda >= 0 && cfg.k_m >= 0 && cfg.k_p >= 0, Status::invalid_argument,
          "rd loss weights must be non-negative");
  return cfg.k_m * mse + cfg.k_p * lpips + cfg.lambda * bpp;
}

}  // namespace rasc
