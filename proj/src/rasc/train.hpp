#pragma once

#include "rasc/ae.hpp"

namespace rasc {

struct TrainConfig {
  double lambda = 0.01;
  uint32_t steps = 500;
  double lr = 1e-4;
  uint32_t batch = 8;
  uint32_t crop = 64;
  uint64_t seed = 0;
  double q_step = 1.0;
  int hidden_channels = 32;
  int latent_channels = 16;
};

struct TrainResult {
  AeModel model;
  std::vector<double> loss_trace;
  std::vector<double> mse_trace;
  std::vector<double> bpp_trace;

  // mean of the first/last up-to-20 steps
  double smoothed_initial_loss() const;
  double smoothed_final_loss() const;
};

// Minimizes mse + lambda*bpp with additive uniform noise in (-q/2, q/2) as
// the quantization proxy and a Laplace-smoothed, linearly interpolated
// histogram as the differentiable rate model. Seeded and reproducible.
TrainResult train_ae(const std::vector<Image8>& dataset, const TrainConfig& cfg);

// --- pieces exposed for oracle tests ---

struct AeGradients {
  ConvParams enc1, enc2, enc3, dec1, dec2, dec3;
  explicit AeGradients(const AeModel& m);
};

// Training objective for one batch. noise holds one entry per batch sample,
// each sized like that sample's latent tensor and expressed in units of q;
// pass an empty vector for the deterministic path (finite-difference
// checks). Gradients accumulate into *grads when non-null.
double ae_loss_and_gradients(const AeModel& model, const std::vector<Tensor3>& batch,
                             double lambda, const std::vector<std::vector<double>>& noise,
                             AeGradients* grads, double* mse_out = nullptr,
                             double* bpp_out = nullptr);

// Smoothed histogram density over quantization-unit latent values.
struct LatentDensity {
  int32_t lo = 0;
  std::vector<double> pmf;

  static LatentDensity build(std::span<const double> values_over_q);
  double density(double s) const;
  double dlog2_density_ds(double s) const;
  double log2_density(double s) const;
};

}  // namespace rasc
