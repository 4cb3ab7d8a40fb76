#include "qinit/qsim.hpp"

#include <cmath>
#include <stdexcept>

namespace qinit {

namespace {

constexpr double kGammaFdStep = 1e-5;
constexpr double kBetaShift = 0.78539816339744830961;  // pi/4

void check_qubit_count(int n) {
  if (n < 1 || n > 24) throw std::invalid_argument("qsim: qubit count out of [1, 24]");
}

// Mixer layer where one qubit's angle is shifted, for the parameter-shift rule.
void apply_mixer_shifted(StateVector& sv, double beta, int shifted_qubit, double delta) {
  for (int q = 0; q < sv.n; ++q) {
    apply_mixer_single_qubit(sv, q, q == shifted_qubit ? beta + delta : beta);
  }
}

}  // namespace

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amp) s += std::norm(a);
  return std::sqrt(s);
}

StateVector prepare_plus_state(int n) {
  check_qubit_count(n);
  StateVector sv;
  sv.n = n;
  const std::size_t dim = std::size_t{1} << n;
  sv.amp.assign(dim, std::complex<double>(std::pow(2.0, -0.5 * n), 0.0));
  return sv;
}

CostDiagonal build_cost_diagonal(const Graph& g) {
  check_qubit_count(g.n);
  CostDiagonal diag;
  diag.n = g.n;
  diag.num_edges = g.num_edges();
  const std::size_t dim = std::size_t{1} << g.n;
  diag.values.assign(dim, 0.0);
  for (const auto& [i, j] : g.edges) {
    const std::size_t bi = std::size_t{1} << i;
    const std::size_t bj = std::size_t{1} << j;
    for (std::size_t k = 0; k < dim; ++k) {
      // s_i s_j = +1 when bits agree, -1 when they differ
      diag.values[k] += (((k & bi) != 0) == ((k & bj) != 0)) ? 1.0 : -1.0;
    }
  }
  return diag;
}

void apply_cost_evolution(StateVector& sv, const CostDiagonal& diag, double gamma) {
  if (sv.n != diag.n) throw std::invalid_argument("apply_cost_evolution: dimension mismatch");
  // Diagonal entries are integers in [-|E|, |E|]; one phase per distinct value.
  const int m = diag.num_edges;
  std::vector<std::complex<double>> phase(2 * m + 1);
  for (int v = -m; v <= m; ++v) {
    phase[v + m] = std::complex<double>(std::cos(gamma * v), -std::sin(gamma * v));
  }
  const std::size_t dim = sv.amp.size();
  for (std::size_t k = 0; k < dim; ++k) {
    sv.amp[k] *= phase[static_cast<int>(diag.values[k]) + m];
  }
}

void apply_mixer_single_qubit(StateVector& sv, int qubit, double beta) {
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  const std::size_t bit = std::size_t{1} << qubit;
  const std::size_t dim = sv.amp.size();
  for (std::size_t base = 0; base < dim; base += 2 * bit) {
    for (std::size_t k = base; k < base + bit; ++k) {
      const std::complex<double> a = sv.amp[k];
      const std::complex<double> b = sv.amp[k | bit];
      sv.amp[k] = {c * a.real() + s * b.imag(), c * a.imag() - s * b.real()};
      sv.amp[k | bit] = {s * a.imag() + c * b.real(), -s * a.real() + c * b.imag()};
    }
  }
}

void apply_mixer_evolution(StateVector& sv, double beta) {
  for (int q = 0; q < sv.n; ++q) apply_mixer_single_qubit(sv, q, beta);
}

StateVector qaoa_state(const CostDiagonal& diag, const ParamVector& params) {
  StateVector sv = prepare_plus_state(diag.n);
  for (int layer = 0; layer < kLayers; ++layer) {
    apply_cost_evolution(sv, diag, params.gamma[layer]);
    apply_mixer_evolution(sv, params.beta[layer]);
  }
  return sv;
}

StateVector qaoa_state(const Graph& g, const ParamVector& params) {
  return qaoa_state(build_cost_diagonal(g), params);
}

double cost_expectation(const StateVector& sv, const CostDiagonal& diag) {
  if (sv.n != diag.n) throw std::invalid_argument("cost_expectation: dimension mismatch");
  double e = 0.0;
  const std::size_t dim = sv.amp.size();
  for (std::size_t k = 0; k < dim; ++k) {
    e += std::norm(sv.amp[k]) * diag.values[k];
  }
  return e;
}

double cost_expectation(const CostDiagonal& diag, const ParamVector& params) {
  return cost_expectation(qaoa_state(diag, params), diag);
}

double cost_expectation(const Graph& g, const ParamVector& params) {
  return cost_expectation(build_cost_diagonal(g), params);
}

std::array<double, 6> cost_gradient(const CostDiagonal& diag, const ParamVector& params) {
  std::array<double, 6> grad{};

  // Gammas: central finite differences.
  for (int layer = 0; layer < kLayers; ++layer) {
    ParamVector plus = params, minus = params;
    plus.gamma[layer] += kGammaFdStep;
    minus.gamma[layer] -= kGammaFdStep;
    grad[layer] = (cost_expectation(diag, plus) - cost_expectation(diag, minus)) /
                  (2.0 * kGammaFdStep);
  }

  // Betas: two-term parameter shift per qubit (each mixer term is a Pauli-x
  // rotation with unit-eigenvalue generator, so the shift is pi/4 with
  // scaling 1). Prefix states are cached per layer; only the suffix is
  // recomputed per shifted evaluation.
  for (int layer = 0; layer < kLayers; ++layer) {
    StateVector prefix = prepare_plus_state(diag.n);
    for (int l = 0; l < layer; ++l) {
      apply_cost_evolution(prefix, diag, params.gamma[l]);
      apply_mixer_evolution(prefix, params.beta[l]);
    }
    apply_cost_evolution(prefix, diag, params.gamma[layer]);

    double d = 0.0;
    for (int q = 0; q < diag.n; ++q) {
      for (double sign : {1.0, -1.0}) {
        StateVector sv = prefix;
        apply_mixer_shifted(sv, params.beta[layer], q, sign * kBetaShift);
        for (int l = layer + 1; l < kLayers; ++l) {
          apply_cost_evolution(sv, diag, params.gamma[l]);
          apply_mixer_evolution(sv, params.beta[l]);
        }
        d += sign * cost_expectation(sv, diag);
      }
    }
    grad[kLayers + layer] = d;
  }
  return grad;
}

std::array<double, 6> cost_gradient(const Graph& g, const ParamVector& params) {
  return cost_gradient(build_cost_diagonal(g), params);
}

}  // namespace qinit
