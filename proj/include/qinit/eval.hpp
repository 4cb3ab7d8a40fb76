#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qinit/ddpm.hpp"
#include "qinit/graph.hpp"
#include "qinit/qaoa_opt.hpp"

namespace qinit {

// Head-to-head protocol: per test graph, pick the best of k candidate
// initializations per arm (diffusion samples vs. uniform random), refine each
// winner with Adam, compare the attained energies.
struct EvalConfig {
  int count = 50;
  int n_min = 4;
  int n_max = 8;
  double p_min = 0.3;
  double p_max = 0.75;
  int refine_iters = 100;
  int k_per_arm = 16;
  std::uint64_t seed = 0;
  OptimizerConfig refine;      // max_iters overridden by refine_iters
  bool self_check = false;     // diffusion arm reuses the random arm's pick
  int trace_instances = 5;     // convergence traces kept for the first few rows
};

struct EvalRow {
  int id = 0;
  int n = 0;
  int num_edges = 0;
  int ground_energy = 0;
  double best_energy_ddpm = 0.0;
  double best_energy_random = 0.0;
  bool ratio_defined = false;  // both energies strictly negative
  double ratio = 0.0;          // best_energy_ddpm / best_energy_random
};

struct ConvergenceTrace {
  int id = 0;
  std::vector<double> ddpm;    // energy per refinement iterate
  std::vector<double> random_;
};

struct EvalReport {
  EvalConfig config;
  std::vector<EvalRow> rows;
  std::map<int, double> mean_ratio_by_n;  // over rows with a defined ratio
  double mean_ratio = 0.0;
  int undefined_rows = 0;
  std::vector<ConvergenceTrace> traces;
};

using EvalProgressFn = std::function<void(int done, int total)>;

EvalReport run_evaluation(const Checkpoint& ckpt, const EvalConfig& cfg,
                          const EvalProgressFn& progress = {});

void save_report_json(const EvalReport& report, const std::string& path);
void save_per_instance_csv(const EvalReport& report, const std::string& path);
void save_convergence_csv(const EvalReport& report, const std::string& path);

}  // namespace qinit
