// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "nogo/circuit.hpp"
#include "nogo/qcore.hpp"
#include "nogo/rng.hpp"

namespace nogo {

inline constexpr double kVerifyTol = 1e-10;
// Full enumeration of all 2^n preparations up to this n; beyond it a seeded
// random subset is checked instead.
inline constexpr int kMaxEnumQubits = 12;
inline constexpr int kSubsetSize = 256;

struct PreparationRecord {
  std::uint64_t preparation = 0;  // x, qubit 1 = most significant bit
  std::uint64_t outcome = 0;      // forbidden outcome index (= x)
  double probability = 0.0;
};

struct NogoReport {
  double theta = 0.0;
  int n = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double solver_residual = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double tol = kVerifyTol;
  double max_forbidden_prob = 0.0;
  double closed_form_max_abs_diff = 0.0;
  std::vector<PreparationRecord> per_preparation;
  bool exhaustive = true;
  std::uint64_t seed = 0;
  bool passed = false;
};

struct VerifyOptions {
  double solver_tol = kSolverTol;
  int max_enum_qubits = kMaxEnumQubits;
  int subset_size = kSubsetSize;
  std::uint64_t seed = 0;
  int max_qubits = kDefaultMaxQubits;
};

// Outcome distributions of the circuit measurement for every preparation:
// table[x][k] = P(outcome k | preparation x). Exponential in n; used by the
// verifier, the sigma cross-checks and the ontology deviation measurements.
inline std::vector<std::vector<double>> quantum_outcome_table(
    const CircuitParams& params, int max_qubits = kDefaultMaxQubits) {
  const PreparationPair pair(params.theta);
  const std::uint64_t dim = std::uint64_t{1} << params.n;
  std::vector<std::vector<double>> table;
  table.reserve(dim);
  for (std::uint64_t x = 0; x < dim; ++x) {
    const StateVector out = apply_measurement_circuit(
        product_state(pair, x, params.n, max_qubits), params.alpha,
        params.beta);
    table.push_back(born_probabilities(out));
  }
  return table;
}

// Simulate the measurement for each product preparation and record the
// probability of its forbidden outcome, together with the deviation of the
// simulated probability from the closed-form amplitude.
inline NogoReport verify_nogo(double theta, int n, double tol = kVerifyTol,
                              const VerifyOptions& options = {}) {
  const PreparationPair pair(theta);
  const CircuitParams params = solve_params(theta, n, options.solver_tol);

  NogoReport report;
  report.theta = theta;
  report.n = n;
  report.alpha = params.alpha;
  report.beta = params.beta;
  report.solver_residual = params.residual;
  report.bracket_lo = params.bracket_lo;
  report.bracket_hi = params.bracket_hi;
  report.tol = tol;
  report.seed = options.seed;

  const std::uint64_t dim = std::uint64_t{1} << n;
  std::vector<std::uint64_t> preparations;
  if (n <= options.max_enum_qubits) {
    preparations.resize(dim);
    for (std::uint64_t x = 0; x < dim; ++x) preparations[x] = x;
  } else {
    report.exhaustive = false;
    Rng rng(options.seed);
    std::set<std::uint64_t> chosen;
    const std::uint64_t want =
        std::min<std::uint64_t>(options.subset_size, dim);
    while (chosen.size() < want) chosen.insert(rng.below(dim));
    preparations.assign(chosen.begin(), chosen.end());
  }

  const double closed_prob = std::norm(forbidden_amplitude(params));
  report.per_preparation.reserve(preparations.size());
  for (std::uint64_t x : preparations) {
    const StateVector out = apply_measurement_circuit(
        product_state(pair, x, n, options.max_qubits), params.alpha,
        params.beta);
    const double p = clamp_probability(std::norm(out.amp(x)));
    report.per_preparation.push_back({x, x, p});
    report.max_forbidden_prob = std::max(report.max_forbidden_prob, p);
    report.closed_form_max_abs_diff =
        std::max(report.closed_form_max_abs_diff, std::abs(p - closed_prob));
  }
  report.passed = report.max_forbidden_prob <= tol;
  return report;
}

// The four-outcome entangled basis of the two-system argument, in the basis
// where the preparations are |0> and |+>:
//   xi_1 = (|01> + |10>)/sqrt2          xi_2 = (|0-> + |1+>)/sqrt2
//   xi_3 = (|+1> + |-0>)/sqrt2          xi_4 = (|+-> + |-+>)/sqrt2
inline std::array<StateVector, 4> twobox_basis() {
  const double r = 1.0 / std::numbers::sqrt2;
  return {
      StateVector(2, {0.0, r, r, 0.0}),
      StateVector(2, {0.5, -0.5, 0.5, 0.5}),
      StateVector(2, {0.5, 0.5, -0.5, 0.5}),
      StateVector(2, {r, 0.0, 0.0, -r}),
  };
}

struct TwoboxReport {
  // Circuit-side verification at the equivalent theta = pi/4, n = 2.
  NogoReport circuit;
  std::array<double, 4> xi_forbidden_probs{};
  double gram_max_abs_dev = 0.0;
  // Max |p_xi(k|x) - p_circuit(k|x)| over all 16 preparation/outcome pairs
  // (the two frames differ by a local basis change, so the tables agree).
  double povm_agreement_max_abs_diff = 0.0;
  bool passed = false;
};

// Explicit check of the two-system special case: the xi basis is orthonormal,
// each xi_k has probability zero on its matching preparation from
// {|0>, |+>}^{⊗2}, and its probability table coincides with the circuit POVM
// at theta = pi/4.
inline TwoboxReport twobox_check() {
  TwoboxReport report;
  const double theta = std::numbers::pi / 4;
  report.circuit = verify_nogo(theta, 2, 1e-12);

  const auto xi = twobox_basis();

  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const cdouble g = inner_product(xi[i], xi[j]);
      const double target = (i == j) ? 1.0 : 0.0;
      report.gram_max_abs_dev =
          std::max(report.gram_max_abs_dev, std::abs(g - cdouble(target)));
    }
  }

  // Preparations in the main-frame convention: bit 0 -> |0>, bit 1 -> |+>.
  const StateVector ket0 = StateVector::basis_state(1, 0);
  const double r = 1.0 / std::numbers::sqrt2;
  const StateVector ketplus(1, {r, r});
  std::array<StateVector, 4> preps = {
      tensor_product(ket0, ket0), tensor_product(ket0, ketplus),
      tensor_product(ketplus, ket0), tensor_product(ketplus, ketplus)};

  const MeasurementSpec povm = build_povm(solve_params(theta, 2));
  const PreparationPair pair(theta);
  for (std::uint64_t x = 0; x < 4; ++x) {
    const StateVector circuit_prep = product_state(pair, x, 2);
    for (std::uint64_t k = 0; k < 4; ++k) {
      const double p_xi =
          clamp_probability(std::norm(inner_product(xi[k], preps[x])));
      const double p_circuit = povm.outcome_probability(k, circuit_prep);
      if (k == x) report.xi_forbidden_probs[x] = p_xi;
      report.povm_agreement_max_abs_diff =
          std::max(report.povm_agreement_max_abs_diff,
                   std::abs(p_xi - p_circuit));
    }
  }

  const double max_xi_forbidden = *std::max_element(
      report.xi_forbidden_probs.begin(), report.xi_forbidden_probs.end());
  report.passed = report.circuit.passed && max_xi_forbidden <= 1e-15 &&
                  report.gram_max_abs_dev <= 1e-12 &&
                  report.povm_agreement_max_abs_diff <= 1e-10;
  return report;
}

}  // namespace nogo
