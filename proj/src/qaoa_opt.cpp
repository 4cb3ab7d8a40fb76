#include "qinit/qaoa_opt.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qinit/rng.hpp"

namespace qinit {

ParamVector random_init(std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::array<double, 6> v;
  for (double& x : v) x = angle(rng);
  return ParamVector::from_flat(v);
}

OptimizationTrace optimize(const CostDiagonal& diag, const ParamVector& init,
                           const OptimizerConfig& cfg) {
  if (cfg.max_iters < 1) throw std::invalid_argument("optimize: max_iters < 1");
  if (!(cfg.learning_rate > 0.0)) throw std::invalid_argument("optimize: learning_rate <= 0");

  std::array<double, 6> theta = init.flat();
  std::array<double, 6> m{}, v{};

  OptimizationTrace trace;
  trace.energies.reserve(cfg.max_iters + 1);
  trace.best_energy = cost_expectation(diag, init);
  trace.best_params = init;
  trace.energies.push_back(trace.best_energy);

  for (int it = 1; it <= cfg.max_iters; ++it) {
    const auto grad = cost_gradient(diag, ParamVector::from_flat(theta));
    const double bc1 = 1.0 - std::pow(cfg.adam_beta1, it);
    const double bc2 = 1.0 - std::pow(cfg.adam_beta2, it);
    for (int i = 0; i < 6; ++i) {
      if (!std::isfinite(grad[i])) throw std::runtime_error("optimize: non-finite gradient");
      m[i] = cfg.adam_beta1 * m[i] + (1.0 - cfg.adam_beta1) * grad[i];
      v[i] = cfg.adam_beta2 * v[i] + (1.0 - cfg.adam_beta2) * grad[i] * grad[i];
      theta[i] -= cfg.learning_rate * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + cfg.adam_eps);
    }
    const ParamVector params = ParamVector::from_flat(theta);
    const double energy = cost_expectation(diag, params);
    if (!std::isfinite(energy)) throw std::runtime_error("optimize: non-finite energy");
    trace.energies.push_back(energy);
    if (energy < trace.best_energy) {
      trace.best_energy = energy;
      trace.best_params = params;
    }
  }
  return trace;
}

OptimizationTrace optimize(const Graph& g, const ParamVector& init,
                           const OptimizerConfig& cfg) {
  return optimize(build_cost_diagonal(g), init, cfg);
}

OptimizationTrace multi_start_optimize(const Graph& g, int n_starts,
                                       const OptimizerConfig& cfg) {
  if (n_starts < 1) throw std::invalid_argument("multi_start_optimize: n_starts < 1");
  const CostDiagonal diag = build_cost_diagonal(g);
  OptimizationTrace best;
  bool have = false;
  for (int s = 0; s < n_starts; ++s) {
    const ParamVector init = random_init(derive_seed(cfg.seed, s, "multi-start"));
    OptimizationTrace trace = optimize(diag, init, cfg);
    if (!have || trace.best_energy < best.best_energy) {
      best = std::move(trace);
      have = true;
    }
  }
  return best;
}

}  // namespace qinit
