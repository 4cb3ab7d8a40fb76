#include "qinit/graph.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"
#include "qinit/rng.hpp"

namespace qinit {

Graph make_graph(int n, std::vector<std::pair<int, int>> edges) {
  if (n < 2) throw std::invalid_argument("graph: need at least 2 nodes");
  for (auto& [i, j] : edges) {
    if (i == j) throw std::invalid_argument("graph: self-loop");
    if (i < 0 || j < 0 || i >= n || j >= n) {
      throw std::invalid_argument("graph: node index out of range");
    }
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw std::invalid_argument("graph: duplicate edge");
  }
  return Graph{n, std::move(edges)};
}

Graph generate_random_graph(int n, double p_edge, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate_random_graph: n < 2");
  if (!(p_edge > 0.0) || p_edge > 1.0) {
    throw std::invalid_argument("generate_random_graph: p_edge must be in (0, 1]");
  }
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(derive_seed(seed, attempt, "graph-attempt"));
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (coin(rng) < p_edge) edges.emplace_back(i, j);
      }
    }
    if (!edges.empty()) return Graph{n, std::move(edges)};
  }
}

int cut_value(const Graph& g, const std::vector<std::uint8_t>& assignment) {
  if (static_cast<int>(assignment.size()) != g.n) {
    throw std::invalid_argument("cut_value: assignment length != n");
  }
  int cut = 0;
  for (const auto& [i, j] : g.edges) {
    cut += (assignment[i] != assignment[j]) ? 1 : 0;
  }
  return cut;
}

CutResult brute_force_maxcut(const Graph& g) {
  if (g.n > 24) throw std::invalid_argument("brute_force_maxcut: n > 24");
  const std::uint64_t half = 1ULL << (g.n - 1);  // node 0 pinned to side 0
  int best = -1;
  std::uint64_t best_mask = 0;
  for (std::uint64_t mask = 0; mask < half; ++mask) {
    const std::uint64_t full = mask << 1;  // bit 0 stays 0
    int cut = 0;
    for (const auto& [i, j] : g.edges) {
      cut += static_cast<int>(((full >> i) ^ (full >> j)) & 1ULL);
    }
    if (cut > best) {
      best = cut;
      best_mask = full;
    }
  }
  CutResult result;
  result.max_cut_value = best;
  result.witness.resize(g.n);
  for (int i = 0; i < g.n; ++i) {
    result.witness[i] = static_cast<std::uint8_t>((best_mask >> i) & 1ULL);
  }
  result.ground_energy = g.num_edges() - 2 * best;
  return result;
}

std::string graph_to_json(const Graph& g) {
  nlohmann::json j;
  j["n"] = g.n;
  j["edges"] = nlohmann::json::array();
  for (const auto& [a, b] : g.edges) {
    j["edges"].push_back({a, b});
  }
  return j.dump();
}

Graph graph_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) {
    edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  }
  return make_graph(j.at("n").get<int>(), std::move(edges));
}

}  // namespace qinit
