#include "qinit/dataset.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qinit/errors.hpp"
#include "qinit/rng.hpp"

namespace qinit {

namespace {

using nlohmann::json;

json record_to_json(const TrainingRecord& r) {
  json j;
  j["graph"] = json::parse(graph_to_json(r.graph));
  j["best_params"] = r.best_params.flat();
  j["best_energy"] = r.best_energy;
  j["ground_energy"] = r.ground_energy;
  j["gen_meta"] = {{"seed", r.gen_meta.seed},
                   {"n_starts", r.gen_meta.n_starts},
                   {"iterations", r.gen_meta.iterations}};
  return j;
}

TrainingRecord record_from_json(const json& j) {
  TrainingRecord r;
  r.graph = graph_from_json(j.at("graph").dump());
  std::array<double, 6> flat{};
  const auto& params = j.at("best_params");
  if (params.size() != 6) throw IoError("corpus: best_params must have 6 entries");
  for (int i = 0; i < 6; ++i) flat[i] = params[i].get<double>();
  r.best_params = ParamVector::from_flat(flat);
  r.best_energy = j.at("best_energy").get<double>();
  r.ground_energy = j.at("ground_energy").get<int>();
  const auto& meta = j.at("gen_meta");
  r.gen_meta.seed = meta.at("seed").get<std::uint64_t>();
  r.gen_meta.n_starts = meta.at("n_starts").get<int>();
  r.gen_meta.iterations = meta.at("iterations").get<int>();
  return r;
}

void check_record(const TrainingRecord& r) {
  if (r.best_energy < r.ground_energy - 1e-9) {
    throw IoError("corpus: record violates best_energy >= ground_energy");
  }
  for (double x : r.best_params.flat()) {
    if (!(x >= -std::numbers::pi && x < std::numbers::pi)) {
      throw IoError("corpus: best_params component outside [-pi, pi)");
    }
  }
}

json manifest_to_json(const CorpusManifest& m) {
  json j;
  j["version"] = m.version;
  j["count"] = m.count;
  j["n_range"] = {m.n_min, m.n_max};
  j["p_range"] = {m.p_min, m.p_max};
  j["optimizer"] = {{"max_iters", m.optimizer.max_iters},
                    {"learning_rate", m.optimizer.learning_rate},
                    {"adam_beta1", m.optimizer.adam_beta1},
                    {"adam_beta2", m.optimizer.adam_beta2},
                    {"adam_eps", m.optimizer.adam_eps}};
  j["n_starts"] = m.n_starts;
  j["master_seed"] = m.master_seed;
  return j;
}

CorpusManifest manifest_from_json(const json& j) {
  CorpusManifest m;
  m.version = j.at("version").get<int>();
  if (m.version > 1) throw IoError("corpus: format version newer than supported");
  m.count = j.at("count").get<int>();
  m.n_min = j.at("n_range").at(0).get<int>();
  m.n_max = j.at("n_range").at(1).get<int>();
  m.p_min = j.at("p_range").at(0).get<double>();
  m.p_max = j.at("p_range").at(1).get<double>();
  const auto& opt = j.at("optimizer");
  m.optimizer.max_iters = opt.at("max_iters").get<int>();
  m.optimizer.learning_rate = opt.at("learning_rate").get<double>();
  m.optimizer.adam_beta1 = opt.at("adam_beta1").get<double>();
  m.optimizer.adam_beta2 = opt.at("adam_beta2").get<double>();
  m.optimizer.adam_eps = opt.at("adam_eps").get<double>();
  m.n_starts = j.at("n_starts").get<int>();
  m.master_seed = j.at("master_seed").get<std::uint64_t>();
  return m;
}

TrainingRecord mine_record(const CorpusManifest& m, int index) {
  const std::uint64_t seed = derive_seed(m.master_seed, index, "corpus-record");
  Rng rng(seed);
  std::uniform_int_distribution<int> n_dist(m.n_min, m.n_max);
  std::uniform_real_distribution<double> p_dist(m.p_min, m.p_max);
  const int n = n_dist(rng);
  const double p_edge = p_dist(rng);

  TrainingRecord r;
  r.graph = generate_random_graph(n, p_edge, derive_seed(seed, 0, "graph"));
  OptimizerConfig cfg = m.optimizer;
  cfg.seed = derive_seed(seed, 0, "mining");
  const OptimizationTrace trace = multi_start_optimize(r.graph, m.n_starts, cfg);
  r.best_params = canonicalize_params(trace.best_params);
  r.best_energy = trace.best_energy;
  r.ground_energy = brute_force_maxcut(r.graph).ground_energy;
  r.gen_meta = {cfg.seed, m.n_starts, cfg.max_iters};
  return r;
}

}  // namespace

double wrap_angle(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("wrap_angle: non-finite input");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = x - two_pi * std::floor((x + std::numbers::pi) / two_pi);
  if (w >= std::numbers::pi) w = -std::numbers::pi;  // fp edge at the boundary
  return w;
}

ParamVector wrap_params(const ParamVector& pv) {
  std::array<double, 6> flat = pv.flat();
  for (double& x : flat) x = wrap_angle(x);
  return ParamVector::from_flat(flat);
}

namespace {

// Reduce x into [-period/2, period/2).
double reduce_period(double x, double period) {
  if (!std::isfinite(x)) throw std::invalid_argument("canonicalize_params: non-finite input");
  double y = x - period * std::floor(x / period + 0.5);
  if (y >= period / 2.0) y = -period / 2.0;  // fp edge at the boundary
  return y;
}

}  // namespace

ParamVector canonicalize_params(const ParamVector& pv) {
  constexpr double pi = std::numbers::pi;
  ParamVector out = pv;
  for (int l = 0; l < 3; ++l) {
    out.gamma[l] = reduce_period(pv.gamma[l], pi);
    out.beta[l] = reduce_period(pv.beta[l], pi / 2.0);
  }
  for (double x : out.flat()) {
    if (std::abs(x) <= 1e-12) continue;
    if (x < 0.0) {
      for (int l = 0; l < 3; ++l) {
        out.gamma[l] = reduce_period(-out.gamma[l], pi);
        out.beta[l] = reduce_period(-out.beta[l], pi / 2.0);
      }
    }
    break;
  }
  return out;
}

Vec6 normalize_params(const ParamVector& pv) {
  Vec6 out;
  const std::array<double, 6> flat = pv.flat();
  for (int i = 0; i < 6; ++i) out[i] = wrap_angle(flat[i]) / std::numbers::pi;
  return out;
}

ParamVector denormalize_params(const Vec6& x) {
  std::array<double, 6> flat;
  for (int i = 0; i < 6; ++i) flat[i] = wrap_angle(x[i] * std::numbers::pi);
  return ParamVector::from_flat(flat);
}

std::string manifest_path_for(const std::string& corpus_path) {
  const std::string ext = ".jsonl";
  if (corpus_path.size() > ext.size() &&
      corpus_path.compare(corpus_path.size() - ext.size(), ext.size(), ext) == 0) {
    return corpus_path.substr(0, corpus_path.size() - ext.size()) + ".manifest.json";
  }
  return corpus_path + ".manifest.json";
}

Corpus generate_corpus(const CorpusManifest& manifest, const std::string& path,
                       const ProgressFn& progress) {
  if (manifest.count < 1) throw std::invalid_argument("generate_corpus: count < 1");
  if (manifest.n_min < 2 || manifest.n_min > manifest.n_max || manifest.n_max > 24) {
    throw std::invalid_argument("generate_corpus: invalid node range");
  }
  if (!(manifest.p_min > 0.0) || manifest.p_min > manifest.p_max || manifest.p_max > 1.0) {
    throw std::invalid_argument("generate_corpus: invalid edge-probability range");
  }

  Corpus corpus;
  corpus.manifest = manifest;

  std::ofstream out;
  if (!path.empty()) {
    // Resume support: keep previously completed lines, drop any partial tail.
    // A record line only counts if it is newline-terminated and parses; the
    // first bad line and everything after it is regenerated.
    std::vector<std::string> done_lines;
    {
      std::ifstream in(path, std::ios::binary);
      std::string bytes((std::istreambuf_iterator<char>(in)), {});
      const std::size_t last_nl = bytes.find_last_of('\n');
      if (last_nl != std::string::npos) bytes.resize(last_nl + 1);
      std::istringstream lines(last_nl == std::string::npos ? std::string() : bytes);
      std::string line;
      while (std::getline(lines, line)) {
        if (line.empty()) continue;
        try {
          record_from_json(json::parse(line));
        } catch (const std::exception&) {
          break;
        }
        done_lines.push_back(line);
      }
      if (static_cast<int>(done_lines.size()) > manifest.count) {
        throw IoError("generate_corpus: existing file has more records than target");
      }
    }
    {
      std::ofstream mf(manifest_path_for(path), std::ios::trunc);
      if (!mf) throw IoError("generate_corpus: cannot write manifest for " + path);
      mf << manifest_to_json(manifest).dump(2) << "\n";
    }
    out.open(path, std::ios::trunc);
    if (!out) throw IoError("generate_corpus: cannot open " + path);
    for (const auto& line : done_lines) {
      corpus.records.push_back(record_from_json(json::parse(line)));
      out << line << "\n";
    }
    out.flush();
  }

  for (int i = static_cast<int>(corpus.records.size()); i < manifest.count; ++i) {
    TrainingRecord r = mine_record(manifest, i);
    check_record(r);
    if (out.is_open()) {
      out << record_to_json(r).dump() << "\n";
      out.flush();
      if (!out) throw IoError("generate_corpus: write failed at record " +
                                         std::to_string(i));
    }
    corpus.records.push_back(std::move(r));
    if (progress) progress(i + 1, manifest.count);
  }
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  {
    std::ofstream mf(manifest_path_for(path), std::ios::trunc);
    if (!mf) throw IoError("save_corpus: cannot write manifest for " + path);
    mf << manifest_to_json(corpus.manifest).dump(2) << "\n";
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("save_corpus: cannot open " + path);
  for (const auto& r : corpus.records) {
    out << record_to_json(r).dump() << "\n";
  }
  if (!out) throw IoError("save_corpus: write failed for " + path);
}

Corpus load_corpus(const std::string& path) {
  Corpus corpus;
  {
    std::ifstream mf(manifest_path_for(path));
    if (!mf) throw IoError("load_corpus: missing manifest for " + path);
    json j;
    try {
      mf >> j;
    } catch (const json::exception& e) {
      throw IoError(std::string("load_corpus: manifest parse error: ") + e.what());
    }
    corpus.manifest = manifest_from_json(j);
  }
  std::ifstream in(path);
  if (!in) throw IoError("load_corpus: cannot open " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    TrainingRecord r;
    try {
      r = record_from_json(json::parse(line));
    } catch (const json::exception& e) {
      throw IoError("load_corpus: parse error at line " + std::to_string(line_no) +
                               ": " + e.what());
    }
    check_record(r);
    corpus.records.push_back(std::move(r));
  }
  return corpus;
}

}  // namespace qinit
