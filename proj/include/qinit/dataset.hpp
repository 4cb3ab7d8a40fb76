#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qinit/ddpm.hpp"
#include "qinit/graph.hpp"
#include "qinit/qaoa_opt.hpp"
#include "qinit/qsim.hpp"

namespace qinit {

// Wraps into [-pi, pi).
double wrap_angle(double x);
ParamVector wrap_params(const ParamVector& pv);

// Reduce params to the fundamental gauge domain: gamma in [-pi/2, pi/2),
// beta in [-pi/4, pi/4), first non-zero component >= 0. Uses exact QAOA
// symmetries on unweighted graphs (gamma period pi, beta period pi/2,
// global sign flip), so the cost expectation is unchanged.
ParamVector canonicalize_params(const ParamVector& pv);

// Angle space <-> DDPM space: wrap, then scale by 1/pi.
Vec6 normalize_params(const ParamVector& pv);
ParamVector denormalize_params(const Vec6& x);

struct GenMeta {
  std::uint64_t seed = 0;
  int n_starts = 0;
  int iterations = 0;
};

// One mined row: a graph and the best parameters multi-start found for it.
struct TrainingRecord {
  Graph graph;
  ParamVector best_params{};  // wrapped to [-pi, pi)
  double best_energy = 0.0;
  int ground_energy = 0;  // brute-force audit value
  GenMeta gen_meta;
};

struct CorpusManifest {
  int version = 1;
  int count = 0;
  int n_min = 4;
  int n_max = 8;
  double p_min = 0.3;
  double p_max = 0.75;
  OptimizerConfig optimizer;  // optimizer.seed unused; per-record seeds derived
  int n_starts = 10;
  std::uint64_t master_seed = 0;
};

struct Corpus {
  CorpusManifest manifest;
  std::vector<TrainingRecord> records;
};

using ProgressFn = std::function<void(int done, int total)>;

// Mines manifest.count records deterministically from the master seed,
// streaming line-delimited JSON to `path` (manifest to the sibling file) so
// an interrupted run resumes at the next index. Pass an empty path to keep
// everything in memory.
Corpus generate_corpus(const CorpusManifest& manifest, const std::string& path = {},
                       const ProgressFn& progress = {});

void save_corpus(const Corpus& corpus, const std::string& path);
Corpus load_corpus(const std::string& path);

// corpus.jsonl -> corpus.manifest.json
std::string manifest_path_for(const std::string& corpus_path);

}  // namespace qinit
