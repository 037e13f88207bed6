#include "rasc/ae.hpp"

#include <cmath>

#include "rasc/io.hpp"
#include "rasc/rng.hpp"
#include "rasc/section.hpp"

namespace rasc {

namespace {

// valid output range for ox given ix = 2*ox + k - 2 in [0, n); needs floor
// division since n_in + 1 - k can go negative on small planes
inline int floor_div2(int a) { return a >= 0 ? a / 2 : -((-a + 1) / 2); }

inline void stride2_bounds(int k, int n_in, int n_out, int& lo, int& hi) {
  lo = std::max(0, (2 - k + 1) / 2);
  hi = std::min(n_out, floor_div2(n_in + 1 - k) + 1);
}

}  // namespace

Tensor3 conv_forward(const ConvParams& p, const Tensor3& in) {
  Tensor3 out(p.out_c, in.h / 2, in.w / 2);
  for (int oc = 0; oc < p.out_c; ++oc) {
    double bias = p.b[oc];
    double* plane = out.row(oc, 0);
    for (size_t i = 0; i < size_t(out.h) * out.w; ++i) plane[i] = bias;
  }
  for (int oc = 0; oc < p.out_c; ++oc)
    for (int ic = 0; ic < p.in_c; ++ic) {
      const double* ws = &p.w[(size_t(oc) * p.in_c + ic) * 25];
      for (int oy = 0; oy < out.h; ++oy)
        for (int ky = 0; ky < 5; ++ky) {
          int iy = oy * 2 + ky - 2;
          if (iy < 0 || iy >= in.h) continue;
          const double* in_row = in.row(ic, iy);
          double* out_row = out.row(oc, oy);
          for (int kx = 0; kx < 5; ++kx) {
            double wv = ws[ky * 5 + kx];
            int lo, hi;
            stride2_bounds(kx, in.w, out.w, lo, hi);
            const double* src = in_row + (2 * lo + kx - 2);
            for (int ox = lo; ox < hi; ++ox, src += 2) out_row[ox] += wv * *src;
          }
        }
    }
  return out;
}

void conv_backward(const ConvParams& p, const Tensor3& in, const Tensor3& dout, Tensor3& din,
                   ConvParams& grad) {
  din = Tensor3(in.c, in.h, in.w);
  for (int oc = 0; oc < p.out_c; ++oc) {
    const double* dplane = dout.row(oc, 0);
    double acc = 0;
    for (size_t i = 0; i < size_t(dout.h) * dout.w; ++i) acc += dplane[i];
    grad.b[oc] += acc;
  }
  for (int oc = 0; oc < p.out_c; ++oc)
    for (int ic = 0; ic < p.in_c; ++ic) {
      const double* ws = &p.w[(size_t(oc) * p.in_c + ic) * 25];
      double* gs = &grad.w[(size_t(oc) * p.in_c + ic) * 25];
      for (int oy = 0; oy < dout.h; ++oy)
        for (int ky = 0; ky < 5; ++ky) {
          int iy = oy * 2 + ky - 2;
          if (iy < 0 || iy >= in.h) continue;
          const double* in_row = in.row(ic, iy);
          double* din_row = din.row(ic, iy);
          const double* dout_row = dout.row(oc, oy);
          for (int kx = 0; kx < 5; ++kx) {
            double wv = ws[ky * 5 + kx];
            double gw = 0;
            int lo, hi;
            stride2_bounds(kx, in.w, dout.w, lo, hi);
            int ix = 2 * lo + kx - 2;
            for (int ox = lo; ox < hi; ++ox, ix += 2) {
              double g = dout_row[ox];
              gw += g * in_row[ix];
              din_row[ix] += g * wv;
            }
            gs[ky * 5 + kx] += gw;
          }
        }
    }
}

Tensor3 tconv_forward(const ConvParams& p, const Tensor3& in) {
  Tensor3 out(p.out_c, in.h * 2, in.w * 2);
  for (int oc = 0; oc < p.out_c; ++oc) {
    double bias = p.b[oc];
    double* plane = out.row(oc, 0);
    for (size_t i = 0; i < size_t(out.h) * out.w; ++i) plane[i] = bias;
  }
  for (int oc = 0; oc < p.out_c; ++oc)
    for (int ic = 0; ic < p.in_c; ++ic) {
      const double* ws = &p.w[(size_t(oc) * p.in_c + ic) * 25];
      for (int iy = 0; iy < in.h; ++iy)
        for (int ky = 0; ky < 5; ++ky) {
          int py = iy * 2 + ky - 2;
          if (py < 0 || py >= out.h) continue;
          const double* in_row = in.row(ic, iy);
          double* out_row = out.row(oc, py);
          for (int kx = 0; kx < 5; ++kx) {
            double wv = ws[ky * 5 + kx];
            int lo, hi;
            stride2_bounds(kx, out.w, in.w, lo, hi);
            double* dst = out_row + (2 * lo + kx - 2);
            for (int ix = lo; ix < hi; ++ix, dst += 2) *dst += wv * in_row[ix];
          }
        }
    }
  return out;
}

void tconv_backward(const ConvParams& p, const Tensor3& in, const Tensor3& dout, Tensor3& din,
                    ConvParams& grad) {
  din = Tensor3(in.c, in.h, in.w);
  for (int oc = 0; oc < p.out_c; ++oc) {
    const double* dplane = dout.row(oc, 0);
    double acc = 0;
    for (size_t i = 0; i < size_t(dout.h) * dout.w; ++i) acc += dplane[i];
    grad.b[oc] += acc;
  }
  for (int oc = 0; oc < p.out_c; ++oc)
    for (int ic = 0; ic < p.in_c; ++ic) {
      const double* ws = &p.w[(size_t(oc) * p.in_c + ic) * 25];
      double* gs = &grad.w[(size_t(oc) * p.in_c + ic) * 25];
      for (int iy = 0; iy < in.h; ++iy)
        for (int ky = 0; ky < 5; ++ky) {
          int py = iy * 2 + ky - 2;
          if (py < 0 || py >= dout.h) continue;
          const double* in_row = in.row(ic, iy);
          double* din_row = din.row(ic, iy);
          const double* dout_row = dout.row(oc, py);
          for (int kx = 0; kx < 5; ++kx) {
            double wv = ws[ky * 5 + kx];
            double gw = 0;
            int lo, hi;
            stride2_bounds(kx, dout.w, in.w, lo, hi);
            int px = 2 * lo + kx - 2;
            for (int ix = lo; ix < hi; ++ix, px += 2) {
              double g = dout_row[px];
              gw += g * in_row[ix];
              din_row[ix] += g * wv;
            }
            gs[ky * 5 + kx] += gw;
          }
        }
    }
}

void leaky_relu_inplace(Tensor3& t) {
  for (double& v : t.v)
    if (v < 0) v *= kLeakySlope;
}

void leaky_relu_backward(const Tensor3& pre, const Tensor3& dout, Tensor3& din) {
  din = Tensor3(dout.c, dout.h, dout.w);
  for (size_t i = 0; i < dout.v.size(); ++i)
    din.v[i] = pre.v[i] < 0 ? dout.v[i] * kLeakySlope : dout.v[i];
}

AeModel AeModel::init(int hidden, int latent, uint64_t seed) {
  require(hidden >= 1 && latent >= 1, Status::invalid_argument, "channel counts must be >= 1");
  AeModel m;
  m.hidden_channels = hidden;
  m.latent_channels = latent;
  m.enc1 = ConvParams(3, hidden);
  m.enc2 = ConvParams(hidden, hidden);
  m.enc3 = ConvParams(hidden, latent);
  m.dec1 = ConvParams(latent, hidden);
  m.dec2 = ConvParams(hidden, hidden);
  m.dec3 = ConvParams(hidden, 3);
  Rng rng(seed, 0x5eed);
  for_each_tensor(m, [&](const char* name, std::vector<double>& t) {
    std::string n(name);
    if (n.back() == 'b') return;  // biases start at zero
    // fan-in scaled normal init
    size_t fan_in = 0;
    if (n == "enc1.w") fan_in = 3 * 25;
    else if (n == "enc2.w" || n == "dec2.w") fan_in = size_t(hidden) * 25;
    else if (n == "enc3.w") fan_in = size_t(hidden) * 25;
    else if (n == "dec1.w") fan_in = size_t(latent) * 25;
    else fan_in = size_t(hidden) * 25;  // dec3.w
    double std_dev = std::sqrt(2.0 / double(fan_in));
    for (double& v : t) v = rng.gaussian() * std_dev;
  });
  return m;
}

size_t AeModel::parameter_count() const {
  size_t n = 0;
  for_each_tensor(*this, [&](const char*, const std::vector<double>& t) { n += t.size(); });
  return n;
}

Tensor3 ae_encoder_forward(const AeModel& m, const Tensor3& x) {
  Tensor3 a1 = conv_forward(m.enc1, x);
  leaky_relu_inplace(a1);
  Tensor3 a2 = conv_forward(m.enc2, a1);
  leaky_relu_inplace(a2);
  return conv_forward(m.enc3, a2);
}

Tensor3 ae_decoder_forward(const AeModel& m, const Tensor3& y) {
  Tensor3 a1 = tconv_forward(m.dec1, y);
  leaky_relu_inplace(a1);
  Tensor3 a2 = tconv_forward(m.dec2, a1);
  leaky_relu_inplace(a2);
  return tconv_forward(m.dec3, a2);
}

namespace {

constexpr char kCheckpointMagic[4] = {'R', 'A', 'E', 'M'};
constexpr uint32_t kCheckpointVersion = 1;

Tensor3 tensor_from_raster(const Raster& r) {
  Tensor3 t(3, int(r.h), int(r.w));
  t.v = r.v;
  return t;
}

Raster raster_from_tensor(const Tensor3& t) {
  Raster r(uint32_t(t.w), uint32_t(t.h));
  r.v = t.v;
  return r;
}

EncodedPayload ae_encode_raster(const Raster& raster, const AeModel& model, double q_scale,
                                uint8_t quality_tag, const std::vector<uint8_t>* occupancy) {
  require(raster.w >= 8 && raster.h >= 8, Status::invalid_argument, "input smaller than 8x8");
  require(raster.w % 8 == 0 && raster.h % 8 == 0, Status::invalid_argument,
          "input dims must be divisible by 8");
  require(raster.w <= 0xFFFF && raster.h <= 0xFFFF, Status::invalid_argument, "input too large");
  require(q_scale > 0 && std::isfinite(q_scale), Status::invalid_argument,
          "q_scale must be positive");
  double q_eff = model.q_step * q_scale;
  require(q_eff > 0, Status::invalid_argument, "effective quantization step must be positive");

  Tensor3 latents = ae_encoder_forward(model, tensor_from_raster(raster));

  EncodedPayload payload;
  payload.codec = CodecId::learned_ae;
  payload.quality_tag = quality_tag;
  payload.width = uint16_t(raster.w);
  payload.height = uint16_t(raster.h);
  payload.channels = 3;
  if (occupancy) {
    payload.flags |= kPayloadFlagGrid;
    write_occupancy_section(payload.body, *occupancy);
  }
  put_f32(payload.body, float(q_eff));
  put_u16(payload.body, uint16_t(model.latent_channels));
  size_t plane = size_t(latents.h) * latents.w;
  std::vector<int32_t> channel(plane);
  for (int c = 0; c < latents.c; ++c) {
    const double* src = latents.row(c, 0);
    for (size_t i = 0; i < plane; ++i) channel[i] = quantize_value(src[i], q_eff);
    write_symbol_section(payload.body, channel);
  }
  return payload;
}

Raster ae_decode_raster(const EncodedPayload& payload, const AeModel& model,
                        std::vector<uint8_t>* occupancy_out) {
  require(payload.codec == CodecId::learned_ae, Status::mismatch,
          "payload was not produced by the learned codec");
  require(payload.width % 8 == 0 && payload.height % 8 == 0, Status::bad_format,
          "payload dims not divisible by 8");
  ByteReader r(payload.body);
  if (payload.is_grid()) {
    auto occ = read_occupancy_section(r, size_t(payload.width) * payload.height);
    if (occupancy_out) *occupancy_out = std::move(occ);
  }
  double q_eff = r.f32();
  require(q_eff > 0 && std::isfinite(q_eff), Status::bad_format, "bad quantization step");
  uint16_t latent_c = r.u16();
  require(latent_c == model.latent_channels, Status::mismatch,
          "latent channel count differs from the model");
  Tensor3 latents(model.latent_channels, payload.height / 8, payload.width / 8);
  size_t plane = size_t(latents.h) * latents.w;
  for (int c = 0; c < latents.c; ++c) {
    std::vector<int32_t> symbols = read_symbol_section(r, plane);
    double* dst = latents.row(c, 0);
    for (size_t i = 0; i < plane; ++i) dst[i] = double(symbols[i]) * q_eff;
  }
  require(r.remaining() == 0, Status::bad_format, "trailing bytes in payload");
  return raster_from_tensor(ae_decoder_forward(model, latents));
}

}  // namespace

EncodedPayload ae_encode_image(const Image8& image, const AeModel& model, double q_scale,
                               uint8_t quality_tag) {
  return ae_encode_raster(raster_from_image(image), model, q_scale, quality_tag, nullptr);
}

Image8 ae_decode_image(const EncodedPayload& payload, const AeModel& model) {
  require(!payload.is_grid(), Status::mismatch, "payload holds a grid, not an image");
  return image_from_raster(ae_decode_raster(payload, model, nullptr));
}

EncodedPayload ae_encode_grid(const NormalizedGrid& grid, const AeModel& model, double q_scale,
                              uint8_t quality_tag) {
  require(grid.bins() > 0, Status::invalid_argument, "empty grid");
  return ae_encode_raster(raster_from_ngrid(grid), model, q_scale, quality_tag, &grid.occupancy);
}

NormalizedGrid ae_decode_grid(const EncodedPayload& payload, const AeModel& model,
                              const GridConfig& angles) {
  require(payload.is_grid(), Status::mismatch, "payload holds an image, not a grid");
  std::vector<uint8_t> occupancy;
  Raster raster = ae_decode_raster(payload, model, &occupancy);
  return ngrid_from_raster(raster, std::move(occupancy), angles);
}

void AeModel::save(const std::string& path) const {
  std::vector<uint8_t> bytes;
  bytes.insert(bytes.end(), kCheckpointMagic, kCheckpointMagic + 4);
  put_u32(bytes, kCheckpointVersion);
  put_f32(bytes, float(q_step));
  put_f32(bytes, float(lambda_tag));
  put_u16(bytes, uint16_t(hidden_channels));
  put_u16(bytes, uint16_t(latent_channels));
  uint16_t n_tensors = 0;
  for_each_tensor(*this, [&](const char*, const std::vector<double>&) { ++n_tensors; });
  put_u16(bytes, n_tensors);
  for_each_tensor(*this, [&](const char* name, const std::vector<double>& t) {
    std::string n(name);
    bytes.push_back(uint8_t(n.size()));
    bytes.insert(bytes.end(), n.begin(), n.end());
    put_u32(bytes, uint32_t(t.size()));
    for (double v : t) put_f32(bytes, float(v));
  });
  put_u16(bytes, uint16_t(latent_stats.size()));
  for (const LatentChannelStats& s : latent_stats) {
    put_i32(bytes, s.offset);
    put_u16(bytes, uint16_t(s.counts.size()));
    for (uint32_t c : s.counts) put_u32(bytes, c);
  }
  write_file(path, bytes);
}

AeModel AeModel::load(const std::string& path) {
  std::vector<uint8_t> bytes = read_file(path);
  ByteReader r(bytes);
  require(r.remaining() >= 4, Status::bad_format, path + ": truncated checkpoint");
  auto magic = r.bytes(4);
  require(std::memcmp(magic.data(), kCheckpointMagic, 4) == 0, Status::bad_format,
          path + ": not a model checkpoint");
  uint32_t version = r.u32();
  require(version == kCheckpointVersion, Status::bad_format,
          path + ": unsupported checkpoint version " + std::to_string(version));
  double q = r.f32();
  double lambda = r.f32();
  int hidden = r.u16();
  int latent = r.u16();
  require(q > 0 && hidden >= 1 && latent >= 1, Status::bad_format, path + ": corrupt header");
  AeModel m = AeModel::init(hidden, latent, 0);
  m.q_step = q;
  m.lambda_tag = lambda;
  uint16_t n_tensors = r.u16();
  require(n_tensors == 12, Status::bad_format, path + ": unexpected tensor count");
  for_each_tensor(m, [&](const char* name, std::vector<double>& t) {
    uint8_t len = r.u8();
    auto stored = r.bytes(len);
    require(std::string(stored.begin(), stored.end()) == name, Status::bad_format,
            path + ": tensor order mismatch");
    uint32_t n = r.u32();
    require(n == t.size(), Status::bad_format, path + ": tensor shape mismatch for " + name);
    for (uint32_t i = 0; i < n; ++i) t[i] = r.f32();
  });
  uint16_t n_stats = r.u16();
  m.latent_stats.resize(n_stats);
  for (LatentChannelStats& s : m.latent_stats) {
    s.offset = r.i32();
    uint16_t n = r.u16();
    s.counts.resize(n);
    for (uint16_t i = 0; i < n; ++i) s.counts[i] = r.u32();
  }
  require(r.remaining() == 0, Status::bad_format, path + ": trailing bytes");
  return m;
}

}  // namespace rasc
