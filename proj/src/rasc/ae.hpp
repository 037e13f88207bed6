#pragma once

#include <string>
#include <vector>

#include "rasc/entropy.hpp"
#include "rasc/payload.hpp"
#include "rasc/raster.hpp"

namespace rasc {

// Channel-major 3D tensor of doubles.
struct Tensor3 {
  int c = 0, h = 0, w = 0;
  std::vector<double> v;

  Tensor3() = default;
  Tensor3(int c_, int h_, int w_) : c(c_), h(h_), w(w_), v(size_t(c_) * h_ * w_, 0.0) {}

  double& at(int ci, int y, int x) { return v[(size_t(ci) * h + y) * w + x]; }
  double at(int ci, int y, int x) const { return v[(size_t(ci) * h + y) * w + x]; }
  double* row(int ci, int y) { return v.data() + (size_t(ci) * h + y) * w; }
  const double* row(int ci, int y) const { return v.data() + (size_t(ci) * h + y) * w; }
  size_t size() const { return v.size(); }
};

// Weights of one 5x5 stride-2 convolution (or its transposed counterpart);
// w is laid out [out_c][in_c][5][5].
struct ConvParams {
  int in_c = 0, out_c = 0;
  std::vector<double> w;
  std::vector<double> b;

  ConvParams() = default;
  ConvParams(int in, int out)
      : in_c(in), out_c(out), w(size_t(out) * in * 25, 0.0), b(size_t(out), 0.0) {}
};

// Down: H -> H/2 (pad 2). Up: H -> 2H (pad 2, output offset matching).
Tensor3 conv_forward(const ConvParams& p, const Tensor3& in);
Tensor3 tconv_forward(const ConvParams& p, const Tensor3& in);
void conv_backward(const ConvParams& p, const Tensor3& in, const Tensor3& dout, Tensor3& din,
                   ConvParams& grad);
void tconv_backward(const ConvParams& p, const Tensor3& in, const Tensor3& dout, Tensor3& din,
                    ConvParams& grad);

inline constexpr double kLeakySlope = 0.2;
void leaky_relu_inplace(Tensor3& t);
// din = dout * slope-gate(pre-activation)
void leaky_relu_backward(const Tensor3& pre, const Tensor3& dout, Tensor3& din);

// Per-latent-channel statistics gathered at training time, stored with the
// checkpoint so a decoder can inspect what the encoder saw.
struct LatentChannelStats {
  int32_t offset = 0;
  std::vector<uint32_t> counts;
};

// Three stride-2 convolutions down (3 -> N -> N -> C_lat, leaky rectifier
// between), mirrored back up. Input dims must be divisible by 8.
struct AeModel {
  static constexpr int kKernel = 5;
  static constexpr int kStride = 2;

  int hidden_channels = 32;
  int latent_channels = 16;
  double q_step = 1.0;
  double lambda_tag = 0.0;  // lambda the model was trained with
  ConvParams enc1, enc2, enc3;
  ConvParams dec1, dec2, dec3;
  std::vector<LatentChannelStats> latent_stats;

  static AeModel init(int hidden, int latent, uint64_t seed);

  void save(const std::string& path) const;
  static AeModel load(const std::string& path);

  size_t parameter_count() const;
};

// Visits the 12 parameter tensors in a fixed order (checkpoint, optimizer
// and finite-difference tests all rely on the same order).
template <typename Model, typename Fn>
void for_each_tensor(Model& m, Fn&& fn) {
  fn("enc1.w", m.enc1.w);
  fn("enc1.b", m.enc1.b);
  fn("enc2.w", m.enc2.w);
  fn("enc2.b", m.enc2.b);
  fn("enc3.w", m.enc3.w);
  fn("enc3.b", m.enc3.b);
  fn("dec1.w", m.dec1.w);
  fn("dec1.b", m.dec1.b);
  fn("dec2.w", m.dec2.w);
  fn("dec2.b", m.dec2.b);
  fn("dec3.w", m.dec3.w);
  fn("dec3.b", m.dec3.b);
}

Tensor3 ae_encoder_forward(const AeModel& model, const Tensor3& x);
Tensor3 ae_decoder_forward(const AeModel& model, const Tensor3& y);

// q_scale multiplies the model's quantization step; it is the codec's
// inference-time rate knob and travels in the payload.
EncodedPayload ae_encode_image(const Image8& image, const AeModel& model, double q_scale = 1.0,
                               uint8_t quality_tag = 0);
Image8 ae_decode_image(const EncodedPayload& payload, const AeModel& model);

EncodedPayload ae_encode_grid(const NormalizedGrid& grid, const AeModel& model,
                              double q_scale = 1.0, uint8_t quality_tag = 0);
NormalizedGrid ae_decode_grid(const EncodedPayload& payload, const AeModel& model,
                              const GridConfig& angles = GridConfig{});

}  // namespace rasc
