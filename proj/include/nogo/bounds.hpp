// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "nogo/circuit.hpp"
#include "nogo/errors.hpp"
#include "nogo/qcore.hpp"
#include "nogo/rng.hpp"
#include "nogo/verifier.hpp"

namespace nogo {

inline constexpr double kSigmaCrosscheckTol = 1e-10;
inline constexpr int kSigmaSimulationMaxQubits = 8;
inline constexpr int kRandomSearchMaxQubits = 3;

// sigma = sum over preparations x of P(outcome x | preparation x), by full
// state-vector simulation.
inline double sigma_simulated(double theta, int n, double alpha, double beta,
                              int max_qubits = kSigmaSimulationMaxQubits) {
  if (n < 1) throw std::domain_error("sigma_simulated: need n >= 1");
  if (n > max_qubits)
    throw ResourceError("sigma_simulated: n exceeds simulation cap");
  const PreparationPair pair(theta);
  detail::KahanSum s;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    const StateVector out = apply_measurement_circuit(
        product_state(pair, x, n), alpha, beta);
    s.add(clamp_probability(std::norm(out.amp(x))));
  }
  return s.value();
}

// sigma for the parametric circuit family in closed form:
//   sigma = cos^{2n}(theta/2) |e^{i alpha} + (1 + e^{i beta} t)^n - 1|^2
// (the per-outcome probability is independent of x, and there are 2^n
// outcomes, so the 2^{-n} normalization cancels). When crosscheck is on and
// the dimension allows, the value is verified against simulation.
inline double sigma_parametric(double theta, int n, double alpha, double beta,
                               bool crosscheck = true) {
  const CircuitParams params{n, theta, alpha, beta, false,
                             std::numeric_limits<double>::quiet_NaN(), 0.0,
                             0.0};
  const double sigma =
      std::exp2(n) * std::norm(forbidden_amplitude(params));
  if (crosscheck && n <= kSigmaSimulationMaxQubits) {
    const double sim = sigma_simulated(theta, n, alpha, beta);
    if (std::abs(sigma - sim) > kSigmaCrosscheckTol)
      throw NumericalError(
          "sigma_parametric: closed form and simulation disagree: " +
          std::to_string(sigma) + " vs " + std::to_string(sim));
  }
  return sigma;
}

// Minimum of sigma over the circuit family. Zero exactly when n systems are
// feasible for theta (validated by running the solver); otherwise the
// minimizer is (alpha, beta) = (pi, 0), giving
//   sigma_min = cos^{2n}(theta/2) (2 - (1 + t)^n)^2.
// For n = 1 this is the minimum-error discrimination value 1 - sin(theta).
inline double sigma_min(double theta, int n, double solver_tol = kSolverTol) {
  if (n < 1) throw std::domain_error("sigma_min: need n >= 1");
  if (nogo_feasible(theta, n)) {
    solve_params(theta, n, solver_tol);
    return 0.0;
  }
  return sigma_parametric(theta, n, std::numbers::pi, 0.0,
                          /*crosscheck=*/n <= kSigmaSimulationMaxQubits);
}

// Grid-plus-refinement minimization of sigma over (alpha, beta) in [0, 2pi)^2.
// Corroborates sigma_min; not used on the hot path.
inline double sigma_grid_min(double theta, int n, int coarse = 64,
                             int rounds = 6, int local = 9) {
  const double two_pi = 2.0 * std::numbers::pi;
  double best = std::numeric_limits<double>::infinity();
  double best_a = 0.0;
  double best_b = 0.0;
  double span = two_pi;
  double a0 = 0.0;
  double b0 = 0.0;
  for (int round = 0; round <= rounds; ++round) {
    const int steps = (round == 0) ? coarse : local;
    for (int ia = 0; ia < steps; ++ia) {
      for (int ib = 0; ib < steps; ++ib) {
        const double a = a0 + span * ia / steps;
        const double b = b0 + span * ib / steps;
        const double s = sigma_parametric(theta, n, a, b, false);
        if (s < best) {
          best = s;
          best_a = a;
          best_b = b;
        }
      }
    }
    const double next_span = (round == 0) ? 2.0 * span / coarse
                                          : 2.0 * span / local;
    span = next_span;
    a0 = best_a - 0.5 * span;
    b0 = best_b - 0.5 * span;
  }
  return best;
}

// Upper bound on the distribution overlap implied by the measurement:
// omega(mu0, mu1) <= sigma_min^{1/n}.
inline double omega_upper_bound(double theta, int n) {
  const double sigma = sigma_min(theta, n);
  return sigma == 0.0 ? 0.0 : std::pow(sigma, 1.0 / n);
}

// One point of the overlap-vs-trace-distance region plot.
struct RegionPoint {
  double delta = 0.0;  // trace distance sin(theta)
  int n = 0;
  double omega_upper = 0.0;
};

// Region data for n = 1..n_max over a uniform delta grid in (0, 1].
inline std::vector<RegionPoint> region_data(int n_max = 4,
                                            int grid_size = 512) {
  if (n_max < 1) throw std::domain_error("region_data: need n_max >= 1");
  if (grid_size < 2) throw std::domain_error("region_data: need grid >= 2");
  std::vector<RegionPoint> points;
  points.reserve(static_cast<std::size_t>(n_max) * grid_size);
  for (int n = 1; n <= n_max; ++n) {
    for (int j = 1; j <= grid_size; ++j) {
      const double delta = static_cast<double>(j) / grid_size;
      const double theta = std::asin(delta);
      points.push_back({delta, n, omega_upper_bound(theta, n)});
    }
  }
  return points;
}

// CSV schema: header `delta,n,omega_upper`, 9 significant digits.
inline void write_region_csv(std::ostream& out,
                             const std::vector<RegionPoint>& points) {
  char buf[64];
  out << "delta,n,omega_upper\n";
  for (const RegionPoint& p : points) {
    std::snprintf(buf, sizeof buf, "%.9g,%d,%.9g", p.delta, p.n,
                  p.omega_upper);
    out << buf << "\n";
  }
}

struct RandomSearchResult {
  // +infinity when no candidate was evaluated.
  double sigma = std::numeric_limits<double>::infinity();
  bool found = false;
};

// Randomized sanity search over orthonormal measurement bases (orthogonalized
// complex Gaussian matrices): evaluates sigma with outcome j assigned to
// preparation j, returns the smallest value seen. Cannot beat sigma_min
// beyond floating-point noise.
inline RandomSearchResult random_povm_search(double theta, int n,
                                             std::uint64_t trials,
                                             std::uint64_t seed) {
  if (n < 1) throw std::domain_error("random_povm_search: need n >= 1");
  if (n > kRandomSearchMaxQubits)
    throw ResourceError("random_povm_search: n exceeds cap of " +
                        std::to_string(kRandomSearchMaxQubits));
  const PreparationPair pair(theta);
  const std::uint64_t d = std::uint64_t{1} << n;
  std::vector<std::vector<cdouble>> preps(d);
  for (std::uint64_t x = 0; x < d; ++x)
    preps[x] = product_state(pair, x, n).amps();

  Rng rng(seed);
  RandomSearchResult result;
  std::vector<std::vector<cdouble>> basis(d, std::vector<cdouble>(d));
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    for (auto& row : basis)
      for (auto& e : row) e = cdouble(rng.normal(), rng.normal());
    // Modified Gram-Schmidt with one re-orthogonalization pass.
    bool degenerate = false;
    for (std::uint64_t i = 0; i < d && !degenerate; ++i) {
      for (int pass = 0; pass < 2; ++pass) {
        for (std::uint64_t j = 0; j < i; ++j) {
          cdouble proj = 0.0;
          for (std::uint64_t k = 0; k < d; ++k)
            proj += std::conj(basis[j][k]) * basis[i][k];
          for (std::uint64_t k = 0; k < d; ++k)
            basis[i][k] -= proj * basis[j][k];
        }
      }
      double norm_sq = 0.0;
      for (std::uint64_t k = 0; k < d; ++k)
        norm_sq += std::norm(basis[i][k]);
      if (norm_sq < 1e-24) {
        degenerate = true;
        break;
      }
      const double inv = 1.0 / std::sqrt(norm_sq);
      for (std::uint64_t k = 0; k < d; ++k) basis[i][k] *= inv;
    }
    if (degenerate) continue;

    detail::KahanSum s;
    for (std::uint64_t x = 0; x < d; ++x) {
      cdouble amp = 0.0;
      for (std::uint64_t k = 0; k < d; ++k)
        amp += std::conj(basis[x][k]) * preps[x][k];
      s.add(std::norm(amp));
    }
    if (s.value() < result.sigma) result.sigma = s.value();
    result.found = true;
  }
  return result;
}

}  // namespace nogo
