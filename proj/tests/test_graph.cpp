#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "dense_oracle.hpp"
#include "qinit/graph.hpp"
#include "qinit/rng.hpp"

using namespace qinit;

namespace {

Graph triangle() { return make_graph(3, {{0, 1}, {1, 2}, {0, 2}}); }
Graph four_cycle() { return make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}); }

// Ising energy of an assignment under spin s = 1 - 2*bit.
int spin_energy(const Graph& g, const std::vector<std::uint8_t>& a) {
  int e = 0;
  for (const auto& [i, j] : g.edges) {
    const int si = 1 - 2 * a[i];
    const int sj = 1 - 2 * a[j];
    e += si * sj;
  }
  return e;
}

}  // namespace

TEST_CASE("make_graph canonicalizes and validates") {
  const Graph g = make_graph(4, {{3, 1}, {0, 2}});
  CHECK(g.edges == std::vector<std::pair<int, int>>{{0, 2}, {1, 3}});
  CHECK_THROWS_AS(make_graph(3, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(make_graph(3, {{0, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(make_graph(3, {{0, 1}, {1, 0}}), std::invalid_argument);
}

TEST_CASE("generate_random_graph: p=1 gives the complete graph") {
  const Graph g = generate_random_graph(4, 1.0, 123);
  CHECK(g.num_edges() == 6);
}

TEST_CASE("generate_random_graph: p=0 is a parameter error") {
  CHECK_THROWS_AS(generate_random_graph(5, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_random_graph(1, 0.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_random_graph(5, 1.5, 1), std::invalid_argument);
}

TEST_CASE("generate_random_graph: edge-count statistics over 1000 seeds") {
  // |E| ~ Binomial(28, 0.5): mean 14, per-draw var 7.
  const int trials = 1000;
  double total = 0.0;
  for (int s = 0; s < trials; ++s) {
    const Graph g = generate_random_graph(8, 0.5, derive_seed(42, s, "stat"));
    CHECK(g.num_edges() > 0);
    CHECK(g.num_edges() <= 28);
    for (std::size_t e = 1; e < g.edges.size(); ++e) {
      CHECK(g.edges[e - 1] < g.edges[e]);  // canonical order
    }
    total += g.num_edges();
  }
  const double mean = total / trials;
  const double three_sigma = 3.0 * std::sqrt(7.0 / trials);
  CHECK(std::abs(mean - 14.0) < three_sigma);
}

TEST_CASE("generate_random_graph: always at least one edge even at tiny p") {
  for (int s = 0; s < 50; ++s) {
    CHECK(generate_random_graph(4, 0.01, s).num_edges() >= 1);
  }
}

TEST_CASE("cut_value on named instances") {
  CHECK(cut_value(triangle(), {0, 0, 0}) == 0);
  CHECK(cut_value(triangle(), {0, 0, 1}) == 2);
  CHECK(cut_value(four_cycle(), {0, 1, 0, 1}) == 4);
  CHECK_THROWS_AS(cut_value(triangle(), {0, 1}), std::invalid_argument);
}

TEST_CASE("brute_force_maxcut on named instances") {
  const CutResult k3 = brute_force_maxcut(triangle());
  CHECK(k3.max_cut_value == 2);
  CHECK(k3.ground_energy == -1);

  const CutResult edge = brute_force_maxcut(make_graph(2, {{0, 1}}));
  CHECK(edge.max_cut_value == 1);
  CHECK(edge.ground_energy == -1);

  const CutResult c4 = brute_force_maxcut(four_cycle());
  CHECK(c4.max_cut_value == 4);
  CHECK(c4.ground_energy == -4);

  CHECK_THROWS_AS(brute_force_maxcut(Graph{25, {{0, 1}}}), std::invalid_argument);
}

TEST_CASE("witness reproduces the maximum cut") {
  for (int s = 0; s < 20; ++s) {
    const Graph g = generate_random_graph(7, 0.4, derive_seed(7, s, "witness"));
    const CutResult r = brute_force_maxcut(g);
    CHECK(cut_value(g, r.witness) == r.max_cut_value);
    CHECK(r.ground_energy == g.num_edges() - 2 * r.max_cut_value);
  }
}

TEST_CASE("halved enumeration matches full enumeration for n <= 6") {
  for (int n = 2; n <= 6; ++n) {
    for (int s = 0; s < 10; ++s) {
      const Graph g = generate_random_graph(n, 0.5, derive_seed(99, n * 100 + s, "full"));
      CHECK(brute_force_maxcut(g).max_cut_value == oracle::full_enumeration_maxcut(g));
    }
  }
}

TEST_CASE("energy identity and complement invariance") {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const Graph g = generate_random_graph(6, 0.5, derive_seed(5, trial, "energy"));
    std::vector<std::uint8_t> a(g.n), comp(g.n);
    for (int i = 0; i < g.n; ++i) {
      a[i] = static_cast<std::uint8_t>(rng() & 1);
      comp[i] = 1 - a[i];
    }
    CHECK(spin_energy(g, a) == g.num_edges() - 2 * cut_value(g, a));
    CHECK(cut_value(g, a) == cut_value(g, comp));
  }
}

TEST_CASE("JSON round trip preserves the canonical edge set") {
  for (int s = 0; s < 20; ++s) {
    const Graph g = generate_random_graph(8, 0.5, derive_seed(11, s, "json"));
    const Graph back = graph_from_json(graph_to_json(g));
    CHECK(back == g);
    CHECK(graph_to_json(back) == graph_to_json(g));
  }
  CHECK(graph_to_json(make_graph(3, {{2, 0}, {0, 1}})) ==
        R"({"edges":[[0,1],[0,2]],"n":3})");
}
