#pragma once

#include <array>
#include <complex>
#include <vector>

#include "qinit/graph.hpp"

namespace qinit {

inline constexpr int kLayers = 3;  // fixed QAOA depth

// Depth-3 variational angles. Also the 6-dim object the diffusion model
// learns (after normalization).
struct ParamVector {
  std::array<double, kLayers> gamma{};
  std::array<double, kLayers> beta{};

  std::array<double, 6> flat() const {
    return {gamma[0], gamma[1], gamma[2], beta[0], beta[1], beta[2]};
  }
  static ParamVector from_flat(const std::array<double, 6>& v) {
    return {{v[0], v[1], v[2]}, {v[3], v[4], v[5]}};
  }
  bool operator==(const ParamVector&) const = default;
};

// Dense 2^n-amplitude state. Qubit i is bit i of the index, bit 0 least
// significant.
struct StateVector {
  int n = 0;
  std::vector<std::complex<double>> amp;

  double norm() const;
};

// Diagonal of H_c = sum over edges of sigma_z^i sigma_z^j, with spin
// s = +1 for bit 0. Entries are integers in [-|E|, |E|].
struct CostDiagonal {
  int n = 0;
  int num_edges = 0;
  std::vector<double> values;
};

StateVector prepare_plus_state(int n);  // 1 <= n <= 24
CostDiagonal build_cost_diagonal(const Graph& g);

// amp_k *= exp(-i * gamma * diag_k). Phase only, norm preserved exactly.
void apply_cost_evolution(StateVector& sv, const CostDiagonal& diag, double gamma);

// exp(-i * beta * sigma_x) on one qubit: [[cos b, -i sin b], [-i sin b, cos b]].
void apply_mixer_single_qubit(StateVector& sv, int qubit, double beta);

// Full transverse-field mixer layer: the rotation above on every qubit.
void apply_mixer_evolution(StateVector& sv, double beta);

// Alternating cost/mixer layers on the plus state.
StateVector qaoa_state(const CostDiagonal& diag, const ParamVector& params);
StateVector qaoa_state(const Graph& g, const ParamVector& params);

double cost_expectation(const StateVector& sv, const CostDiagonal& diag);
double cost_expectation(const CostDiagonal& diag, const ParamVector& params);
double cost_expectation(const Graph& g, const ParamVector& params);

// d<H_c>/d(theta) for (gamma_1..3, beta_1..3). Betas use the two-term
// parameter shift (pi/4, unit scaling) applied per qubit; gammas use central
// finite differences with step 1e-5 since H_c has a non-uniform integer
// spectrum.
std::array<double, 6> cost_gradient(const CostDiagonal& diag, const ParamVector& params);
std::array<double, 6> cost_gradient(const Graph& g, const ParamVector& params);

}  // namespace qinit
