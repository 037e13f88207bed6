#include "rasc/train.hpp"

#include <cmath>

#include "rasc/rng.hpp"

namespace rasc {

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

AeGradients::AeGradients(const AeModel& m)
    : enc1(m.enc1.in_c, m.enc1.out_c),
      enc2(m.enc2.in_c, m.enc2.out_c),
      enc3(m.enc3.in_c, m.enc3.out_c),
      dec1(m.dec1.in_c, m.dec1.out_c),
      dec2(m.dec2.in_c, m.dec2.out_c),
      dec3(m.dec3.in_c, m.dec3.out_c) {}

LatentDensity LatentDensity::build(std::span<const double> values_over_q) {
  require(!values_over_q.empty(), Status::invalid_argument, "no latent values");
  double mn = values_over_q[0], mx = values_over_q[0];
  for (double s : values_over_q) {
    mn = std::min(mn, s);
    mx = std::max(mx, s);
  }
  require(std::isfinite(mn) && std::isfinite(mx), Status::invalid_argument,
          "non-finite latent value");
  LatentDensity d;
  d.lo = int32_t(std::floor(mn)) - 2;
  int32_t hi = int32_t(std::floor(mx)) + 3;
  size_t bins = size_t(hi - d.lo) + 1;
  std::vector<double> counts(bins, 1.0);  // Laplace smoothing
  double total = double(bins);
  for (double s : values_over_q) {
    // histogram over round-half-away quantized values, like the coder sees
    int32_t r = int32_t(s >= 0 ? std::floor(s + 0.5) : std::ceil(s - 0.5));
    counts[size_t(r - d.lo)] += 1.0;
    total += 1.0;
  }
  d.pmf.resize(bins);
  for (size_t i = 0; i < bins; ++i) d.pmf[i] = counts[i] / total;
  return d;
}

double LatentDensity::density(double s) const {
  double fs = std::floor(s);
  int64_t j = int64_t(fs) - lo;
  if (j < 0) j = 0;
  if (j >= int64_t(pmf.size()) - 1) j = int64_t(pmf.size()) - 2;
  double frac = s - (double(j) + lo);
  return pmf[size_t(j)] * (1.0 - frac) + pmf[size_t(j) + 1] * frac;
}

double LatentDensity::log2_density(double s) const { return std::log2(density(s)); }

double LatentDensity::dlog2_density_ds(double s) const {
  double fs = std::floor(s);
  int64_t j = int64_t(fs) - lo;
  if (j < 0) j = 0;
  if (j >= int64_t(pmf.size()) - 1) j = int64_t(pmf.size()) - 2;
  double slope = pmf[size_t(j) + 1] - pmf[size_t(j)];
  return slope / (density(s) * kLn2);
}

namespace {

struct SampleCache {
  Tensor3 x;
  Tensor3 e1_pre, e1_act, e2_pre, e2_act, latent;
  Tensor3 noisy;  // latent + q * noise
  Tensor3 d1_pre, d1_act, d2_pre, d2_act, recon;
};

void forward_sample(const AeModel& m, SampleCache& s) {
  s.e1_pre = conv_forward(m.enc1, s.x);
  s.e1_act = s.e1_pre;
  leaky_relu_inplace(s.e1_act);
  s.e2_pre = conv_forward(m.enc2, s.e1_act);
  s.e2_act = s.e2_pre;
  leaky_relu_inplace(s.e2_act);
  s.latent = conv_forward(m.enc3, s.e2_act);
}

void forward_decoder(const AeModel& m, SampleCache& s) {
  s.d1_pre = tconv_forward(m.dec1, s.noisy);
  s.d1_act = s.d1_pre;
  leaky_relu_inplace(s.d1_act);
  s.d2_pre = tconv_forward(m.dec2, s.d1_act);
  s.d2_act = s.d2_pre;
  leaky_relu_inplace(s.d2_act);
  s.recon = tconv_forward(m.dec3, s.d2_act);
}

// dlatent flows back through the encoder; drecon through the decoder first.
void backward_sample(const AeModel& m, SampleCache& s, const Tensor3& drecon,
                     const Tensor3& dlatent_extra, AeGradients& g) {
  Tensor3 d_d2act, d_d2pre, d_d1act, d_d1pre, dnoisy;
  tconv_backward(m.dec3, s.d2_act, drecon, d_d2act, g.dec3);
  leaky_relu_backward(s.d2_pre, d_d2act, d_d2pre);
  tconv_backward(m.dec2, s.d1_act, d_d2pre, d_d1act, g.dec2);
  leaky_relu_backward(s.d1_pre, d_d1act, d_d1pre);
  tconv_backward(m.dec1, s.noisy, d_d1pre, dnoisy, g.dec1);

  // additive-noise proxy: identity gradient from noisy latent to latent
  Tensor3 dlatent = dnoisy;
  for (size_t i = 0; i < dlatent.v.size(); ++i) dlatent.v[i] += dlatent_extra.v[i];

  Tensor3 d_e2act, d_e2pre, d_e1act, d_e1pre, dx;
  conv_backward(m.enc3, s.e2_act, dlatent, d_e2act, g.enc3);
  leaky_relu_backward(s.e2_pre, d_e2act, d_e2pre);
  conv_backward(m.enc2, s.e1_act, d_e2pre, d_e1act, g.enc2);
  leaky_relu_backward(s.e1_pre, d_e1act, d_e1pre);
  conv_backward(m.enc1, s.x, d_e1pre, dx, g.enc1);
}

}  // namespace

double ae_loss_and_gradients(const AeModel& model, const std::vector<Tensor3>& batch,
                             double lambda, const std::vector<std::vector<double>>& noise,
                             AeGradients* grads, double* mse_out, double* bpp_out) {
  require(!batch.empty(), Status::invalid_argument, "empty batch");
  require(lambda >= 0, Status::invalid_argument, "lambda must be non-negative");
  require(noise.empty() || noise.size() == batch.size(), Status::invalid_argument,
          "noise/batch size mismatch");
  double q = model.q_step;
  size_t n_samples = batch.size();

  std::vector<SampleCache> caches(n_samples);
  size_t pixel_count = 0;
  for (size_t i = 0; i < n_samples; ++i) {
    caches[i].x = batch[i];
    require(batch[i].c == 3 && batch[i].h % 8 == 0 && batch[i].w % 8 == 0,
            Status::invalid_argument, "batch items must be 3-channel with dims divisible by 8");
    pixel_count += size_t(batch[i].h) * batch[i].w;
    forward_sample(model, caches[i]);
    caches[i].noisy = caches[i].latent;
    if (!noise.empty()) {
      require(noise[i].size() == caches[i].latent.v.size(), Status::invalid_argument,
              "noise tensor size mismatch");
      for (size_t k = 0; k < noise[i].size(); ++k) caches[i].noisy.v[k] += q * noise[i][k];
    }
    forward_decoder(model, caches[i]);
  }

  // distortion: mean squared error over all reconstructed elements
  double se = 0;
  size_t element_count = 0;
  for (size_t i = 0; i < n_samples; ++i) {
    const Tensor3& x = caches[i].x;
    const Tensor3& r = caches[i].recon;
    for (size_t k = 0; k < x.v.size(); ++k) {
      double d = r.v[k] - x.v[k];
      se += d * d;
    }
    element_count += x.v.size();
  }
  double mse_value = se / double(element_count);

  // rate: cross-entropy of noisy latents under per-channel histogram
  // densities built from this batch (the density itself is not
  // differentiated, matching a per-frame table rebuild)
  int latent_c = model.latent_channels;
  std::vector<LatentDensity> densities;
  double rate_bits = 0;
  if (lambda > 0) {
    densities.reserve(size_t(latent_c));
    for (int c = 0; c < latent_c; ++c) {
      std::vector<double> values;
      for (SampleCache& s : caches) {
        const double* row = s.noisy.row(c, 0);
        size_t plane = size_t(s.noisy.h) * s.noisy.w;
        values.insert(values.end(), row, row + plane);
      }
      for (double& v : values) v /= q;
      densities.push_back(LatentDensity::build(values));
    }
    for (SampleCache& s : caches) {
      size_t plane = size_t(s.noisy.h) * s.noisy.w;
      for (int c = 0; c < latent_c; ++c) {
        const double* row = s.noisy.row(c, 0);
        for (size_t k = 0; k < plane; ++k) rate_bits -= densities[size_t(c)].log2_density(row[k] / q);
      }
    }
  }
  double bpp_value = rate_bits / double(pixel_count);
  double loss = mse_value + lambda * bpp_value;
  if (mse_out) *mse_out = mse_value;
  if (bpp_out) *bpp_out = bpp_value;
  if (!grads) return loss;

  for (size_t i = 0; i < n_samples; ++i) {
    SampleCache& s = caches[i];
    Tensor3 drecon(s.recon.c, s.recon.h, s.recon.w);
    double scale = 2.0 / double(element_count);
    for (size_t k = 0; k < drecon.v.size(); ++k)
      drecon.v[k] = scale * (s.recon.v[k] - s.x.v[k]);

    Tensor3 dlatent_extra(s.latent.c, s.latent.h, s.latent.w);
    if (lambda > 0) {
      double rate_scale = lambda / double(pixel_count);
      size_t plane = size_t(s.noisy.h) * s.noisy.w;
      for (int c = 0; c < latent_c; ++c) {
        const double* row = s.noisy.row(c, 0);
        double* drow = dlatent_extra.row(c, 0);
        for (size_t k = 0; k < plane; ++k)
          drow[k] = -rate_scale * densities[size_t(c)].dlog2_density_ds(row[k] / q) / q;
      }
    }
    backward_sample(model, s, drecon, dlatent_extra, *grads);
  }
  return loss;
}

namespace {

struct AdamState {
  std::vector<std::vector<double>> m, v;
  uint64_t t = 0;
};

void adam_step(AeModel& model, const AeGradients& grads, AdamState& state, double lr) {
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  state.t += 1;
  double bias1 = 1.0 - std::pow(kBeta1, double(state.t));
  double bias2 = 1.0 - std::pow(kBeta2, double(state.t));
  size_t idx = 0;
  std::vector<const std::vector<double>*> gs;
  for_each_tensor(grads, [&](const char*, const std::vector<double>& g) { gs.push_back(&g); });
  for_each_tensor(model, [&](const char*, std::vector<double>& t) {
    const std::vector<double>& g = *gs[idx];
    std::vector<double>& m = state.m[idx];
    std::vector<double>& v = state.v[idx];
    for (size_t k = 0; k < t.size(); ++k) {
      m[k] = kBeta1 * m[k] + (1 - kBeta1) * g[k];
      v[k] = kBeta2 * v[k] + (1 - kBeta2) * g[k] * g[k];
      double mhat = m[k] / bias1;
      double vhat = v[k] / bias2;
      t[k] -= lr * mhat / (std::sqrt(vhat) + kEps);
    }
    ++idx;
  });
}

}  // namespace

double TrainResult::smoothed_initial_loss() const {
  size_t n = std::min<size_t>(20, loss_trace.size());
  double acc = 0;
  for (size_t i = 0; i < n; ++i) acc += loss_trace[i];
  return n ? acc / double(n) : 0.0;
}

double TrainResult::smoothed_final_loss() const {
  size_t n = std::min<size_t>(20, loss_trace.size());
  double acc = 0;
  for (size_t i = 0; i < n; ++i) acc += loss_trace[loss_trace.size() - 1 - i];
  return n ? acc / double(n) : 0.0;
}

TrainResult train_ae(const std::vector<Image8>& dataset, const TrainConfig& cfg) {
  require(!dataset.empty(), Status::invalid_argument, "empty training set");
  require(cfg.steps >= 1, Status::invalid_argument, "steps must be positive");
  require(cfg.lr > 0, Status::invalid_argument, "learning rate must be positive");
  require(cfg.batch >= 1, Status::invalid_argument, "batch must be positive");
  require(cfg.crop >= 8 && cfg.crop % 8 == 0, Status::invalid_argument,
          "crop must be a positive multiple of 8");
  require(cfg.q_step > 0, Status::invalid_argument, "q_step must be positive");
  require(cfg.lambda >= 0, Status::invalid_argument, "lambda must be non-negative");
  for (const Image8& img : dataset)
    require(img.width >= cfg.crop && img.height >= cfg.crop, Status::invalid_argument,
            "image smaller than the crop size");

  TrainResult result;
  result.model = AeModel::init(cfg.hidden_channels, cfg.latent_channels, cfg.seed);
  result.model.q_step = cfg.q_step;
  result.model.lambda_tag = cfg.lambda;
  AeModel& model = result.model;

  AdamState adam;
  for_each_tensor(model, [&](const char*, std::vector<double>& t) {
    adam.m.emplace_back(t.size(), 0.0);
    adam.v.emplace_back(t.size(), 0.0);
  });

  Rng rng(cfg.seed, 0x7261);
  std::vector<Raster> rasters;
  rasters.reserve(dataset.size());
  for (const Image8& img : dataset) rasters.push_back(raster_from_image(img));

  int lat_h = int(cfg.crop) / 8, lat_w = int(cfg.crop) / 8;
  size_t latent_size = size_t(cfg.latent_channels) * lat_h * lat_w;

  for (uint32_t step = 0; step < cfg.steps; ++step) {
    std::vector<Tensor3> batch;
    batch.reserve(cfg.batch);
    for (uint32_t b = 0; b < cfg.batch; ++b) {
      const Raster& src = rasters[rng.below(uint32_t(rasters.size()))];
      uint32_t max_x = src.w - cfg.crop, max_y = src.h - cfg.crop;
      uint32_t x0 = max_x ? rng.below(max_x + 1) : 0;
      uint32_t y0 = max_y ? rng.below(max_y + 1) : 0;
      Tensor3 crop(3, int(cfg.crop), int(cfg.crop));
      for (int c = 0; c < 3; ++c)
        for (uint32_t y = 0; y < cfg.crop; ++y) {
          const double* s = src.plane(c) + size_t(y0 + y) * src.w + x0;
          std::copy(s, s + cfg.crop, crop.row(c, int(y)));
        }
      batch.push_back(std::move(crop));
    }
    std::vector<std::vector<double>> noise(cfg.batch);
    for (auto& n : noise) {
      n.resize(latent_size);
      for (double& u : n) u = rng.uniform() - 0.5;
    }
    AeGradients grads(model);
    double mse_v = 0, bpp_v = 0;
    double loss = ae_loss_and_gradients(model, batch, cfg.lambda, noise, &grads, &mse_v, &bpp_v);
    adam_step(model, grads, adam, cfg.lr);
    result.loss_trace.push_back(loss);
    result.mse_trace.push_back(mse_v);
    result.bpp_trace.push_back(bpp_v);
  }

  // record the latent statistics of a final pass over one batch-worth of data
  Tensor3 probe(3, int(cfg.crop), int(cfg.crop));
  const Raster& src = rasters[0];
  for (int c = 0; c < 3; ++c)
    for (uint32_t y = 0; y < cfg.crop; ++y) {
      const double* s = src.plane(c) + size_t(y) * src.w;
      std::copy(s, s + cfg.crop, probe.row(c, int(y)));
    }
  Tensor3 latents = ae_encoder_forward(model, probe);
  model.latent_stats.resize(size_t(cfg.latent_channels));
  size_t plane = size_t(latents.h) * latents.w;
  for (int c = 0; c < cfg.latent_channels; ++c) {
    const double* row = latents.row(c, 0);
    int32_t mn = 0, mx = 0;
    std::vector<int32_t> q(plane);
    for (size_t k = 0; k < plane; ++k) {
      q[k] = quantize_value(row[k], model.q_step);
      mn = std::min(mn, q[k]);
      mx = std::max(mx, q[k]);
    }
    LatentChannelStats& st = model.latent_stats[size_t(c)];
    st.offset = mn;
    st.counts.assign(size_t(mx - mn) + 1, 1);
    for (size_t k = 0; k < plane; ++k) st.counts[size_t(q[k] - mn)] += 1;
  }
  return result;
}

}  // namespace rasc
