#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "qinit/ddpm.hpp"
#include "qinit/eval.hpp"

using namespace qinit;

namespace {

Checkpoint tiny_checkpoint() {
  const NoiseSchedule s = build_schedule(20);
  return {init_predictor(20, 42), s};
}

EvalConfig tiny_config() {
  EvalConfig cfg;
  cfg.count = 8;
  cfg.n_min = 4;
  cfg.n_max = 5;
  cfg.refine_iters = 15;
  cfg.k_per_arm = 3;
  cfg.seed = 17;
  return cfg;
}

std::string read_file_bytes(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(is), {});
}

}  // namespace

TEST_CASE("self-comparison yields ratio exactly 1 on every row") {
  const Checkpoint ckpt = tiny_checkpoint();
  EvalConfig cfg = tiny_config();
  cfg.self_check = true;
  const EvalReport report = run_evaluation(ckpt, cfg);
  REQUIRE(report.rows.size() == 8);
  for (const auto& row : report.rows) {
    CHECK(row.best_energy_ddpm == row.best_energy_random);
    if (row.ratio_defined) CHECK(row.ratio == 1.0);
  }
  if (report.undefined_rows < static_cast<int>(report.rows.size())) {
    CHECK(report.mean_ratio == 1.0);
  }
}

TEST_CASE("every reported energy respects the variational bound") {
  const EvalReport report = run_evaluation(tiny_checkpoint(), tiny_config());
  for (const auto& row : report.rows) {
    CHECK(row.best_energy_ddpm >= row.ground_energy - 1e-10);
    CHECK(row.best_energy_random >= row.ground_energy - 1e-10);
    CHECK(row.n >= 4);
    CHECK(row.n <= 5);
    if (row.ratio_defined) {
      CHECK(row.best_energy_ddpm < 0.0);
      CHECK(row.best_energy_random < 0.0);
    }
  }
  CHECK(report.traces.size() == 5);
  for (const auto& t : report.traces) {
    CHECK(t.ddpm.size() == 16);  // refine_iters + 1
    CHECK(t.random_.size() == 16);
  }
}

TEST_CASE("aggregates are means over defined rows only") {
  const EvalReport report = run_evaluation(tiny_checkpoint(), tiny_config());
  double sum = 0.0;
  int defined = 0;
  for (const auto& row : report.rows) {
    if (!row.ratio_defined) continue;
    sum += row.ratio;
    ++defined;
  }
  CHECK(defined + report.undefined_rows == static_cast<int>(report.rows.size()));
  if (defined > 0) CHECK(report.mean_ratio == doctest::Approx(sum / defined).epsilon(1e-15));
}

TEST_CASE("report artifacts are deterministic under a fixed seed") {
  const Checkpoint ckpt = tiny_checkpoint();
  const EvalConfig cfg = tiny_config();
  const EvalReport a = run_evaluation(ckpt, cfg);
  const EvalReport b = run_evaluation(ckpt, cfg);

  save_report_json(a, "eval_a.json");
  save_report_json(b, "eval_b.json");
  save_per_instance_csv(a, "eval_a.csv");
  save_per_instance_csv(b, "eval_b.csv");
  save_convergence_csv(a, "eval_a_conv.csv");
  save_convergence_csv(b, "eval_b_conv.csv");
  CHECK(read_file_bytes("eval_a.json") == read_file_bytes("eval_b.json"));
  CHECK(read_file_bytes("eval_a.csv") == read_file_bytes("eval_b.csv"));
  CHECK(read_file_bytes("eval_a_conv.csv") == read_file_bytes("eval_b_conv.csv"));

  const std::string csv = read_file_bytes("eval_a.csv");
  CHECK(csv.rfind("id,n,num_edges,ground_energy,best_energy_ddpm,best_energy_random,ratio",
                  0) == 0);

  for (const char* f : {"eval_a.json", "eval_b.json", "eval_a.csv", "eval_b.csv",
                        "eval_a_conv.csv", "eval_b_conv.csv"}) {
    std::remove(f);
  }
}
