#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace qinit {

using Vec6 = std::array<double, 6>;

// Linear beta schedule plus the derived per-step constants.
struct NoiseSchedule {
  int T = 0;
  std::vector<double> beta;       // in (0, 1)
  std::vector<double> alpha;      // 1 - beta_t
  std::vector<double> alpha_bar;  // running product of alpha, strictly decreasing
  std::vector<double> sigma;      // sqrt(beta_t)
};

// beta_t linear from 1e-4 (t=1) to 0.02 (t=T).
NoiseSchedule build_schedule(int T);

// x_t = sqrt(abar_t) x0 + sqrt(1 - abar_t) noise, 1-indexed t.
Vec6 forward_diffuse(const Vec6& x0, int t, const NoiseSchedule& schedule,
                     const Vec6& noise);

// Noise prediction network: four fully-connected layers (6 -> 128 -> 128 ->
// 128 -> 6) with ReLU after the first three, plus one learned timestep
// embedding table per hidden layer, injected additively before each ReLU.
struct NoisePredictor {
  int T = 0;
  int in_dim = 6;
  int hidden = 128;
  // Row-major weight matrices; emb tables are T x hidden.
  std::vector<double> w1, b1, w2, b2, w3, b3, w4, b4;
  std::vector<double> emb1, emb2, emb3;

  bool operator==(const NoisePredictor&) const = default;
};

NoisePredictor init_predictor(int T, std::uint64_t seed);

// Deterministic forward pass of eps_theta(x_t, t), 1 <= t <= T.
Vec6 predict_noise(const NoisePredictor& model, const Vec6& x_t, int t);

// One training example with the corruption already applied.
struct BatchSample {
  Vec6 x_t{};
  int t = 1;
  Vec6 eps{};  // the noise the model should predict
};

// Same shapes as the trainable tensors in NoisePredictor.
struct Gradients {
  std::vector<double> w1, b1, w2, b2, w3, b3, w4, b4;
  std::vector<double> emb1, emb2, emb3;
};

// Mean over batch and components of ||eps - eps_theta(x_t, t)||^2 terms.
double batch_loss(const NoisePredictor& model, const std::vector<BatchSample>& batch);

// Loss plus analytic gradients via backprop; `grads` is (re)shaped to match.
double loss_and_gradients(const NoisePredictor& model,
                          const std::vector<BatchSample>& batch, Gradients& grads);

struct TrainConfig {
  int epochs = 100;
  int batch_size = 50;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
};

struct TrainResult {
  NoisePredictor model;
  std::vector<double> epoch_loss;  // mean batch loss per epoch
};

// Noise-prediction training: seeded shuffle per epoch, per-sample uniform t
// and standard-normal eps, one Adam step per minibatch.
TrainResult train(const std::vector<Vec6>& dataset, const NoiseSchedule& schedule,
                  const TrainConfig& cfg);

// Ancestral sampling from x_T ~ N(0, I); sigma_t = sqrt(beta_t), z = 0 at t=1.
// Outputs stay in the model's normalized space.
std::vector<Vec6> sample(const NoisePredictor& model, const NoiseSchedule& schedule,
                         int count, std::uint64_t seed);

struct Checkpoint {
  NoisePredictor model;
  NoiseSchedule schedule;
};

// Single binary file: magic, format version, dimensions, schedule betas and
// all weights as little-endian float64. save -> load -> save is byte-identical.
void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace qinit
