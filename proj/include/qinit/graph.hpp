#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qinit {

// Undirected, unweighted, simple graph. Edges are stored canonically:
// each pair as (i, j) with i < j, the whole list sorted lexicographically,
// so equal graphs serialize identically.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  int num_edges() const { return static_cast<int>(edges.size()); }
  bool operator==(const Graph&) const = default;
};

struct CutResult {
  int max_cut_value = 0;
  std::vector<std::uint8_t> witness;  // one optimal side assignment, length n
  int ground_energy = 0;              // |E| - 2 * max_cut_value
};

// Validates node indices, rejects self-loops and duplicates, canonicalizes.
Graph make_graph(int n, std::vector<std::pair<int, int>> edges);

// G(n, p): each unordered pair included independently with probability
// p_edge. Empty results are regenerated from a derived seed; p_edge must be
// strictly positive so this terminates.
Graph generate_random_graph(int n, double p_edge, std::uint64_t seed);

// Number of edges whose endpoints get different sides.
int cut_value(const Graph& g, const std::vector<std::uint8_t>& assignment);

// Exact Max-Cut by enumerating the 2^(n-1) bipartitions with node 0 pinned.
CutResult brute_force_maxcut(const Graph& g);

// {"n": int, "edges": [[i,j],...]} with i<j, lexicographically sorted.
std::string graph_to_json(const Graph& g);
Graph graph_from_json(const std::string& text);

}  // namespace qinit
