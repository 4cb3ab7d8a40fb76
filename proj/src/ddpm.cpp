#include "qinit/ddpm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "qinit/errors.hpp"
#include "qinit/rng.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace qinit {

namespace {

constexpr double kBetaStart = 1e-4;
constexpr double kBetaEnd = 0.02;

void check_step(int t, int T) {
  if (t < 1 || t > T) throw std::invalid_argument("ddpm: timestep out of [1, T]");
}

// y = W x + b, W row-major (rows x cols)
void affine(const std::vector<double>& w, const std::vector<double>& b, int rows,
            int cols, const double* x, double* y) {
  for (int r = 0; r < rows; ++r) {
    double acc = b[r];
    const double* row = w.data() + static_cast<std::size_t>(r) * cols;
    for (int c = 0; c < cols; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
}

struct ForwardCache {
  std::vector<double> z1, h1, z2, h2, z3, h3;
  Vec6 out{};
};

void forward(const NoisePredictor& m, const Vec6& x, int t, ForwardCache& c) {
  const int h = m.hidden;
  c.z1.resize(h); c.h1.resize(h);
  c.z2.resize(h); c.h2.resize(h);
  c.z3.resize(h); c.h3.resize(h);
  const std::size_t row = static_cast<std::size_t>(t - 1) * h;

  affine(m.w1, m.b1, h, m.in_dim, x.data(), c.z1.data());
  for (int i = 0; i < h; ++i) c.z1[i] += m.emb1[row + i];
  for (int i = 0; i < h; ++i) c.h1[i] = std::max(0.0, c.z1[i]);

  affine(m.w2, m.b2, h, h, c.h1.data(), c.z2.data());
  for (int i = 0; i < h; ++i) c.z2[i] += m.emb2[row + i];
  for (int i = 0; i < h; ++i) c.h2[i] = std::max(0.0, c.z2[i]);

  affine(m.w3, m.b3, h, h, c.h2.data(), c.z3.data());
  for (int i = 0; i < h; ++i) c.z3[i] += m.emb3[row + i];
  for (int i = 0; i < h; ++i) c.h3[i] = std::max(0.0, c.z3[i]);

  affine(m.w4, m.b4, m.in_dim, h, c.h3.data(), c.out.data());
}

void zero_like(const NoisePredictor& m, Gradients& g) {
  auto reset = [](std::vector<double>& v, std::size_t n) { v.assign(n, 0.0); };
  reset(g.w1, m.w1.size()); reset(g.b1, m.b1.size());
  reset(g.w2, m.w2.size()); reset(g.b2, m.b2.size());
  reset(g.w3, m.w3.size()); reset(g.b3, m.b3.size());
  reset(g.w4, m.w4.size()); reset(g.b4, m.b4.size());
  reset(g.emb1, m.emb1.size());
  reset(g.emb2, m.emb2.size());
  reset(g.emb3, m.emb3.size());
}

struct AdamState {
  Gradients m, v;
  int step = 0;
};

void adam_update(std::vector<double>& param, const std::vector<double>& grad,
                 std::vector<double>& m, std::vector<double>& v, double lr,
                 double bc1, double bc2) {
  constexpr double kB1 = 0.9, kB2 = 0.999, kEps = 1e-8;
  for (std::size_t i = 0; i < param.size(); ++i) {
    m[i] = kB1 * m[i] + (1.0 - kB1) * grad[i];
    v[i] = kB2 * v[i] + (1.0 - kB2) * grad[i] * grad[i];
    param[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + kEps);
  }
}

void write_bytes(std::ofstream& os, const void* p, std::size_t n) {
  os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void read_bytes(std::ifstream& is, void* p, std::size_t n) {
  is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (!is) throw IoError("checkpoint: truncated file");
}

constexpr char kMagic[8] = {'Q', 'I', 'N', 'I', 'T', 'C', 'K', 'P'};
constexpr std::uint32_t kFormatVersion = 1;

}  // namespace

NoiseSchedule build_schedule(int T) {
  if (T < 2) throw std::invalid_argument("build_schedule: T < 2");
  NoiseSchedule s;
  s.T = T;
  s.beta.resize(T);
  s.alpha.resize(T);
  s.alpha_bar.resize(T);
  s.sigma.resize(T);
  double prod = 1.0;
  for (int t = 0; t < T; ++t) {
    s.beta[t] = kBetaStart + (kBetaEnd - kBetaStart) * t / (T - 1);
    s.alpha[t] = 1.0 - s.beta[t];
    prod *= s.alpha[t];
    s.alpha_bar[t] = prod;
    s.sigma[t] = std::sqrt(s.beta[t]);
  }
  return s;
}

Vec6 forward_diffuse(const Vec6& x0, int t, const NoiseSchedule& schedule,
                     const Vec6& noise) {
  check_step(t, schedule.T);
  const double abar = schedule.alpha_bar[t - 1];
  const double a = std::sqrt(abar);
  const double b = std::sqrt(1.0 - abar);
  Vec6 out;
  for (int i = 0; i < 6; ++i) out[i] = a * x0[i] + b * noise[i];
  return out;
}

NoisePredictor init_predictor(int T, std::uint64_t seed) {
  if (T < 2) throw std::invalid_argument("init_predictor: T < 2");
  NoisePredictor m;
  m.T = T;
  const int h = m.hidden;
  Rng rng(seed);
  auto fan_in_uniform = [&](std::vector<double>& v, std::size_t n, int fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    v.resize(n);
    for (double& x : v) x = dist(rng);
  };
  fan_in_uniform(m.w1, static_cast<std::size_t>(h) * m.in_dim, m.in_dim);
  fan_in_uniform(m.b1, h, m.in_dim);
  fan_in_uniform(m.w2, static_cast<std::size_t>(h) * h, h);
  fan_in_uniform(m.b2, h, h);
  fan_in_uniform(m.w3, static_cast<std::size_t>(h) * h, h);
  fan_in_uniform(m.b3, h, h);
  fan_in_uniform(m.w4, static_cast<std::size_t>(m.in_dim) * h, h);
  fan_in_uniform(m.b4, m.in_dim, h);

  std::normal_distribution<double> emb_dist(0.0, 0.02);
  for (auto* e : {&m.emb1, &m.emb2, &m.emb3}) {
    e->resize(static_cast<std::size_t>(T) * h);
    for (double& x : *e) x = emb_dist(rng);
  }
  return m;
}

Vec6 predict_noise(const NoisePredictor& model, const Vec6& x_t, int t) {
  check_step(t, model.T);
  ForwardCache cache;
  forward(model, x_t, t, cache);
  return cache.out;
}

double batch_loss(const NoisePredictor& model, const std::vector<BatchSample>& batch) {
  if (batch.empty()) throw std::invalid_argument("batch_loss: empty batch");
  double loss = 0.0;
  ForwardCache cache;
  for (const auto& s : batch) {
    check_step(s.t, model.T);
    forward(model, s.x_t, s.t, cache);
    for (int i = 0; i < 6; ++i) {
      const double d = cache.out[i] - s.eps[i];
      loss += d * d;
    }
  }
  return loss / (static_cast<double>(batch.size()) * 6.0);
}

double loss_and_gradients(const NoisePredictor& model,
                          const std::vector<BatchSample>& batch, Gradients& grads) {
  if (batch.empty()) throw std::invalid_argument("loss_and_gradients: empty batch");
  zero_like(model, grads);
  const int h = model.hidden;
  const int d = model.in_dim;
  const double scale = 1.0 / (static_cast<double>(batch.size()) * 6.0);

  double loss = 0.0;
  ForwardCache c;
  std::vector<double> dout(d), dz3(h), dz2(h), dz1(h);
  for (const auto& s : batch) {
    check_step(s.t, model.T);
    forward(model, s.x_t, s.t, c);
    const std::size_t row = static_cast<std::size_t>(s.t - 1) * h;

    for (int i = 0; i < d; ++i) {
      const double diff = c.out[i] - s.eps[i];
      loss += diff * diff;
      dout[i] = 2.0 * diff * scale;
    }

    // out = W4 h3 + b4
    for (int i = 0; i < d; ++i) {
      const std::size_t wrow = static_cast<std::size_t>(i) * h;
      for (int j = 0; j < h; ++j) grads.w4[wrow + j] += dout[i] * c.h3[j];
      grads.b4[i] += dout[i];
    }
    for (int j = 0; j < h; ++j) {
      double acc = 0.0;
      for (int i = 0; i < d; ++i) acc += model.w4[static_cast<std::size_t>(i) * h + j] * dout[i];
      dz3[j] = (c.z3[j] > 0.0) ? acc : 0.0;
    }

    // z3 = W3 h2 + b3 + emb3[t]
    for (int i = 0; i < h; ++i) {
      const double g = dz3[i];
      if (g == 0.0) continue;
      const std::size_t wrow = static_cast<std::size_t>(i) * h;
      for (int j = 0; j < h; ++j) grads.w3[wrow + j] += g * c.h2[j];
      grads.b3[i] += g;
      grads.emb3[row + i] += g;
    }
    for (int j = 0; j < h; ++j) {
      double acc = 0.0;
      for (int i = 0; i < h; ++i) acc += model.w3[static_cast<std::size_t>(i) * h + j] * dz3[i];
      dz2[j] = (c.z2[j] > 0.0) ? acc : 0.0;
    }

    // z2 = W2 h1 + b2 + emb2[t]
    for (int i = 0; i < h; ++i) {
      const double g = dz2[i];
      if (g == 0.0) continue;
      const std::size_t wrow = static_cast<std::size_t>(i) * h;
      for (int j = 0; j < h; ++j) grads.w2[wrow + j] += g * c.h1[j];
      grads.b2[i] += g;
      grads.emb2[row + i] += g;
    }
    for (int j = 0; j < h; ++j) {
      double acc = 0.0;
      for (int i = 0; i < h; ++i) acc += model.w2[static_cast<std::size_t>(i) * h + j] * dz2[i];
      dz1[j] = (c.z1[j] > 0.0) ? acc : 0.0;
    }

    // z1 = W1 x + b1 + emb1[t]
    for (int i = 0; i < h; ++i) {
      const double g = dz1[i];
      if (g == 0.0) continue;
      const std::size_t wrow = static_cast<std::size_t>(i) * d;
      for (int j = 0; j < d; ++j) grads.w1[wrow + j] += g * s.x_t[j];
      grads.b1[i] += g;
      grads.emb1[row + i] += g;
    }
  }
  return loss * scale;
}

TrainResult train(const std::vector<Vec6>& dataset, const NoiseSchedule& schedule,
                  const TrainConfig& cfg) {
  if (dataset.empty()) throw std::invalid_argument("train: empty dataset");
  if (cfg.epochs < 1 || cfg.batch_size < 1) {
    throw std::invalid_argument("train: epochs and batch_size must be >= 1");
  }

  TrainResult result;
  result.model = init_predictor(schedule.T, derive_seed(cfg.seed, 0, "ddpm-init"));
  NoisePredictor& model = result.model;

  AdamState adam;
  zero_like(model, adam.m);
  zero_like(model, adam.v);
  Gradients grads;

  Rng rng(derive_seed(cfg.seed, 0, "ddpm-train"));
  std::uniform_int_distribution<int> t_dist(1, schedule.T);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    int batches = 0;
    for (std::size_t off = 0; off < order.size(); off += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), off + cfg.batch_size);
      std::vector<BatchSample> batch(end - off);
      for (std::size_t k = off; k < end; ++k) {
        BatchSample& s = batch[k - off];
        s.t = t_dist(rng);
        for (double& e : s.eps) e = gauss(rng);
        s.x_t = forward_diffuse(dataset[order[k]], s.t, schedule, s.eps);
      }
      const double loss = loss_and_gradients(model, batch, grads);
      if (!std::isfinite(loss)) throw std::runtime_error("train: loss diverged");

      ++adam.step;
      const double bc1 = 1.0 - std::pow(0.9, adam.step);
      const double bc2 = 1.0 - std::pow(0.999, adam.step);
      adam_update(model.w1, grads.w1, adam.m.w1, adam.v.w1, cfg.learning_rate, bc1, bc2);
      adam_update(model.b1, grads.b1, adam.m.b1, adam.v.b1, cfg.learning_rate, bc1, bc2);
      adam_update(model.w2, grads.w2, adam.m.w2, adam.v.w2, cfg.learning_rate, bc1, bc2);
      adam_update(model.b2, grads.b2, adam.m.b2, adam.v.b2, cfg.learning_rate, bc1, bc2);
      adam_update(model.w3, grads.w3, adam.m.w3, adam.v.w3, cfg.learning_rate, bc1, bc2);
      adam_update(model.b3, grads.b3, adam.m.b3, adam.v.b3, cfg.learning_rate, bc1, bc2);
      adam_update(model.w4, grads.w4, adam.m.w4, adam.v.w4, cfg.learning_rate, bc1, bc2);
      adam_update(model.b4, grads.b4, adam.m.b4, adam.v.b4, cfg.learning_rate, bc1, bc2);
      adam_update(model.emb1, grads.emb1, adam.m.emb1, adam.v.emb1, cfg.learning_rate, bc1, bc2);
      adam_update(model.emb2, grads.emb2, adam.m.emb2, adam.v.emb2, cfg.learning_rate, bc1, bc2);
      adam_update(model.emb3, grads.emb3, adam.m.emb3, adam.v.emb3, cfg.learning_rate, bc1, bc2);

      epoch_loss += loss;
      ++batches;
    }
    result.epoch_loss.push_back(epoch_loss / batches);
  }
  return result;
}

std::vector<Vec6> sample(const NoisePredictor& model, const NoiseSchedule& schedule,
                         int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample: count < 1");
  if (model.T != schedule.T) throw std::invalid_argument("sample: model/schedule T mismatch");

  std::vector<Vec6> out(count);
  for (int chain = 0; chain < count; ++chain) {
    Rng rng(derive_seed(seed, chain, "ddpm-chain"));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec6 x;
    for (double& v : x) v = gauss(rng);
    for (int t = schedule.T; t >= 1; --t) {
      const Vec6 eps = predict_noise(model, x, t);
      const double alpha = schedule.alpha[t - 1];
      const double coef = (1.0 - alpha) / std::sqrt(1.0 - schedule.alpha_bar[t - 1]);
      const double inv_sqrt_alpha = 1.0 / std::sqrt(alpha);
      for (int i = 0; i < 6; ++i) {
        double z = (t > 1) ? gauss(rng) : 0.0;
        x[i] = inv_sqrt_alpha * (x[i] - coef * eps[i]) + schedule.sigma[t - 1] * z;
      }
    }
    out[chain] = x;
  }
  return out;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  const NoisePredictor& m = ckpt.model;
  if (m.T != ckpt.schedule.T) throw std::invalid_argument("save_checkpoint: T mismatch");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("save_checkpoint: cannot open " + path);
  write_bytes(os, kMagic, sizeof(kMagic));
  const std::uint32_t header[4] = {kFormatVersion, static_cast<std::uint32_t>(m.T),
                                   static_cast<std::uint32_t>(m.in_dim),
                                   static_cast<std::uint32_t>(m.hidden)};
  write_bytes(os, header, sizeof(header));
  auto dump = [&](const std::vector<double>& v) {
    write_bytes(os, v.data(), v.size() * sizeof(double));
  };
  dump(ckpt.schedule.beta);
  dump(m.w1); dump(m.b1);
  dump(m.w2); dump(m.b2);
  dump(m.w3); dump(m.b3);
  dump(m.w4); dump(m.b4);
  dump(m.emb1); dump(m.emb2); dump(m.emb3);
  if (!os) throw IoError("save_checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("load_checkpoint: cannot open " + path);
  char magic[8];
  read_bytes(is, magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw IoError("load_checkpoint: bad magic");
  }
  std::uint32_t header[4];
  read_bytes(is, header, sizeof(header));
  if (header[0] > kFormatVersion) {
    throw IoError("load_checkpoint: unsupported format version");
  }
  const int T = static_cast<int>(header[1]);
  const int in_dim = static_cast<int>(header[2]);
  const int hidden = static_cast<int>(header[3]);
  if (T < 2 || in_dim < 1 || hidden < 1) {
    throw IoError("load_checkpoint: invalid dimensions");
  }

  Checkpoint ckpt;
  NoisePredictor& m = ckpt.model;
  m.T = T;
  m.in_dim = in_dim;
  m.hidden = hidden;
  auto slurp = [&](std::vector<double>& v, std::size_t n) {
    v.resize(n);
    read_bytes(is, v.data(), n * sizeof(double));
  };

  std::vector<double> beta;
  slurp(beta, static_cast<std::size_t>(T));
  NoiseSchedule& s = ckpt.schedule;
  s.T = T;
  s.beta = std::move(beta);
  s.alpha.resize(T);
  s.alpha_bar.resize(T);
  s.sigma.resize(T);
  double prod = 1.0;
  for (int t = 0; t < T; ++t) {
    if (!(s.beta[t] > 0.0 && s.beta[t] < 1.0)) {
      throw IoError("load_checkpoint: beta out of (0, 1)");
    }
    s.alpha[t] = 1.0 - s.beta[t];
    prod *= s.alpha[t];
    s.alpha_bar[t] = prod;
    s.sigma[t] = std::sqrt(s.beta[t]);
  }

  const std::size_t h = static_cast<std::size_t>(hidden);
  const std::size_t d = static_cast<std::size_t>(in_dim);
  slurp(m.w1, h * d); slurp(m.b1, h);
  slurp(m.w2, h * h); slurp(m.b2, h);
  slurp(m.w3, h * h); slurp(m.b3, h);
  slurp(m.w4, d * h); slurp(m.b4, d);
  slurp(m.emb1, static_cast<std::size_t>(T) * h);
  slurp(m.emb2, static_cast<std::size_t>(T) * h);
  slurp(m.emb3, static_cast<std::size_t>(T) * h);

  char extra;
  if (is.read(&extra, 1)) throw IoError("load_checkpoint: trailing bytes");
  return ckpt;
}

}  // namespace qinit
