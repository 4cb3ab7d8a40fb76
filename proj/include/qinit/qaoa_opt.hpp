#pragma once

#include <cstdint>
#include <vector>

#include "qinit/qsim.hpp"

namespace qinit {

struct OptimizerConfig {
  int max_iters = 500;
  double learning_rate = 0.05;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;
};

struct OptimizationTrace {
  std::vector<double> energies;  // max_iters + 1 entries, initial point included
  ParamVector best_params{};
  double best_energy = 0.0;
};

// All 6 components uniform in [-pi, pi).
ParamVector random_init(std::uint64_t seed);

// Adam descent on cost_expectation; returns the best-seen iterate.
OptimizationTrace optimize(const CostDiagonal& diag, const ParamVector& init,
                           const OptimizerConfig& cfg);
OptimizationTrace optimize(const Graph& g, const ParamVector& init,
                           const OptimizerConfig& cfg);

// n_starts independent runs from random_init with seeds derived from
// cfg.seed; lowest best_energy wins, ties broken by lowest start index.
OptimizationTrace multi_start_optimize(const Graph& g, int n_starts,
                                       const OptimizerConfig& cfg);

}  // namespace qinit
