#include "qinit/eval.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "json.hpp"
#include "qinit/dataset.hpp"
#include "qinit/qsim.hpp"
#include "qinit/errors.hpp"
#include "qinit/rng.hpp"

namespace qinit {

namespace {

using nlohmann::json;

// Lowest-expectation candidate wins; ties by lowest index.
ParamVector pick_best(const CostDiagonal& diag, const std::vector<ParamVector>& candidates) {
  double best = std::numeric_limits<double>::infinity();
  ParamVector winner{};
  for (const auto& c : candidates) {
    const double e = cost_expectation(diag, c);
    if (e < best) {
      best = e;
      winner = c;
    }
  }
  return winner;
}

}  // namespace

EvalReport run_evaluation(const Checkpoint& ckpt, const EvalConfig& cfg,
                          const EvalProgressFn& progress) {
  if (cfg.count < 1) throw std::invalid_argument("run_evaluation: count < 1");
  if (cfg.k_per_arm < 1) throw std::invalid_argument("run_evaluation: k_per_arm < 1");

  EvalReport report;
  report.config = cfg;

  OptimizerConfig refine = cfg.refine;
  refine.max_iters = cfg.refine_iters;

  for (int i = 0; i < cfg.count; ++i) {
    const std::uint64_t seed = derive_seed(cfg.seed, i, "eval-instance");
    Rng rng(seed);
    std::uniform_int_distribution<int> n_dist(cfg.n_min, cfg.n_max);
    std::uniform_real_distribution<double> p_dist(cfg.p_min, cfg.p_max);
    const int n = n_dist(rng);
    const double p_edge = p_dist(rng);
    const Graph g = generate_random_graph(n, p_edge, derive_seed(seed, 0, "test-graph"));
    const CostDiagonal diag = build_cost_diagonal(g);

    // Random arm: k uniform draws, keep the lowest-energy candidate.
    std::vector<ParamVector> random_candidates;
    random_candidates.reserve(cfg.k_per_arm);
    for (int k = 0; k < cfg.k_per_arm; ++k) {
      random_candidates.push_back(random_init(derive_seed(seed, k, "random-arm")));
    }
    const ParamVector random_pick = pick_best(diag, random_candidates);

    // Diffusion arm: k model samples, denormalized, same selection rule.
    ParamVector ddpm_pick;
    if (cfg.self_check) {
      ddpm_pick = random_pick;
    } else {
      const auto samples = sample(ckpt.model, ckpt.schedule, cfg.k_per_arm,
                                  derive_seed(seed, 0, "ddpm-arm"));
      std::vector<ParamVector> ddpm_candidates;
      ddpm_candidates.reserve(samples.size());
      for (const auto& s : samples) ddpm_candidates.push_back(denormalize_params(s));
      ddpm_pick = pick_best(diag, ddpm_candidates);
    }

    const OptimizationTrace ddpm_trace = optimize(diag, ddpm_pick, refine);
    const OptimizationTrace random_trace = optimize(diag, random_pick, refine);

    EvalRow row;
    row.id = i;
    row.n = g.n;
    row.num_edges = g.num_edges();
    row.ground_energy = brute_force_maxcut(g).ground_energy;
    row.best_energy_ddpm = ddpm_trace.best_energy;
    row.best_energy_random = random_trace.best_energy;
    row.ratio_defined = row.best_energy_ddpm < 0.0 && row.best_energy_random < 0.0;
    if (row.ratio_defined) row.ratio = row.best_energy_ddpm / row.best_energy_random;
    report.rows.push_back(row);

    if (i < cfg.trace_instances) {
      report.traces.push_back({i, ddpm_trace.energies, random_trace.energies});
    }
    if (progress) progress(i + 1, cfg.count);
  }

  std::map<int, std::pair<double, int>> by_n;
  double sum = 0.0;
  int defined = 0;
  for (const auto& row : report.rows) {
    if (!row.ratio_defined) {
      ++report.undefined_rows;
      continue;
    }
    sum += row.ratio;
    ++defined;
    auto& [s, c] = by_n[row.n];
    s += row.ratio;
    ++c;
  }
  report.mean_ratio = defined > 0 ? sum / defined : 0.0;
  for (const auto& [n, sc] : by_n) {
    report.mean_ratio_by_n[n] = sc.first / sc.second;
  }
  return report;
}

void save_report_json(const EvalReport& report, const std::string& path) {
  json j;
  j["config"] = {{"count", report.config.count},
                 {"n_range", {report.config.n_min, report.config.n_max}},
                 {"p_range", {report.config.p_min, report.config.p_max}},
                 {"refine_iters", report.config.refine_iters},
                 {"k_per_arm", report.config.k_per_arm},
                 {"seed", report.config.seed},
                 {"self_check", report.config.self_check},
                 {"ratio_semantics",
                  "best_energy_ddpm / best_energy_random, both strictly negative; "
                  "rows failing that are flagged undefined and excluded from aggregates"}};
  j["rows"] = json::array();
  for (const auto& r : report.rows) {
    json row = {{"id", r.id},
                {"n", r.n},
                {"num_edges", r.num_edges},
                {"ground_energy", r.ground_energy},
                {"best_energy_ddpm", r.best_energy_ddpm},
                {"best_energy_random", r.best_energy_random}};
    if (r.ratio_defined) {
      row["ratio"] = r.ratio;
    } else {
      row["ratio"] = "undefined";
    }
    j["rows"].push_back(row);
  }
  json agg = json::object();
  for (const auto& [n, ratio] : report.mean_ratio_by_n) {
    agg[std::to_string(n)] = ratio;
  }
  j["mean_ratio_by_n"] = agg;
  j["mean_ratio"] = report.mean_ratio;
  j["undefined_rows"] = report.undefined_rows;

  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("save_report_json: cannot open " + path);
  os << j.dump(2) << "\n";
  if (!os) throw IoError("save_report_json: write failed for " + path);
}

void save_per_instance_csv(const EvalReport& report, const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("save_per_instance_csv: cannot open " + path);
  os << "id,n,num_edges,ground_energy,best_energy_ddpm,best_energy_random,ratio\n";
  os.precision(17);
  for (const auto& r : report.rows) {
    os << r.id << ',' << r.n << ',' << r.num_edges << ',' << r.ground_energy << ','
       << r.best_energy_ddpm << ',' << r.best_energy_random << ',';
    if (r.ratio_defined) {
      os << r.ratio;
    } else {
      os << "undefined";
    }
    os << '\n';
  }
  if (!os) throw IoError("save_per_instance_csv: write failed for " + path);
}

void save_convergence_csv(const EvalReport& report, const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("save_convergence_csv: cannot open " + path);
  os << "id,arm,iter,energy\n";
  os.precision(17);
  for (const auto& t : report.traces) {
    for (std::size_t k = 0; k < t.ddpm.size(); ++k) {
      os << t.id << ",ddpm," << k << ',' << t.ddpm[k] << '\n';
    }
    for (std::size_t k = 0; k < t.random_.size(); ++k) {
      os << t.id << ",random," << k << ',' << t.random_[k] << '\n';
    }
  }
  if (!os) throw IoError("save_convergence_csv: write failed for " + path);
}

}  // namespace qinit
