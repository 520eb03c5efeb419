// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "nogo/errors.hpp"
#include "nogo/qcore.hpp"

namespace nogo {

inline constexpr double kSolverTol = 1e-12;
// Absolute slack on t = tan(theta/2) for feasibility comparisons, so that
// boundary pairs with tan(theta/2) = 2^{1/n} - 1 (exact in reals, off by a
// few ulps in doubles) land on the feasible side.
inline constexpr double kFeasibilitySlack = 1e-12;
// |f(0)| within this of the unit circle is treated as the beta = 0 boundary
// solution.
inline constexpr double kBoundaryAcceptTol = 1e-10;
inline constexpr int kMaxSolverIterations = 200;
// Dense POVM effects need 2^n-dimensional vectors per outcome; cap below the
// state-vector cap.
inline constexpr int kPovmMaxQubits = 12;

// Measurement circuit U = H^{⊗n} · R_alpha · Z_beta^{⊗n} acting on n systems
// prepared pairwise at angle theta. `solved` marks parameters returned by
// solve_params, for which |e^{i*alpha} + (1 + e^{i*beta} t)^n - 1| = residual
// is at most the solver tolerance. bracket_lo/hi record the final bisection
// bracket ([0, 0] when the beta = 0 boundary solution was taken).
struct CircuitParams {
  int n = 0;
  double theta = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  bool solved = false;
  double residual = std::numeric_limits<double>::quiet_NaN();
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

namespace detail {

// z^n by binary exponentiation; exact operation count, no exp/log detour.
inline cdouble pow_int(cdouble z, long long n) {
  cdouble result = 1.0;
  cdouble base = z;
  for (long long e = n; e > 0; e >>= 1) {
    if (e & 1) result *= base;
    base *= base;
  }
  return result;
}

}  // namespace detail

// Whether n systems suffice for theta: 2^{1/n} - 1 <= tan(theta/2).
inline bool nogo_feasible(double theta, long long n) {
  const PreparationPair pair(theta);
  if (n < 1) return false;
  return std::expm1(std::numbers::ln2 / static_cast<double>(n)) <=
         pair.t() + kFeasibilitySlack;
}

// Smallest n with 2*arctan(2^{1/n} - 1) <= theta. The search starts from an
// analytic estimate (with the same slack the feasibility test applies) and
// walks upward, so the first feasible n is the minimum.
inline long long min_n(double theta) {
  const PreparationPair pair(theta);
  const double t = pair.t();
  long long n = 1;
  if (t < 1.0) {
    const double estimate =
        std::numbers::ln2 / std::log1p(t + kFeasibilitySlack);
    n = std::max(1LL, static_cast<long long>(std::floor(estimate)) - 2);
  }
  while (!nogo_feasible(theta, n)) ++n;
  return n;
}

// f(beta) = 1 - (1 + e^{i*beta} tan(theta/2))^n. A beta with |f(beta)| = 1
// makes the forbidden-outcome amplitude vanish once alpha = arg f(beta).
inline cdouble f_beta(double beta, double theta, long long n) {
  const PreparationPair pair(theta);
  const cdouble z = 1.0 + std::polar(pair.t(), beta);
  return 1.0 - detail::pow_int(z, n);
}

// Solve |f(beta)| = 1 for beta in [0, pi] by bisection on g = |f| - 1
// (g(0) >= 0 and g(pi) <= 0 once n is feasible), then alpha = arg f(beta).
// Any root is acceptable; the bracket taken is recorded in the result.
inline CircuitParams solve_params(double theta, int n,
                                  double tol = kSolverTol) {
  const PreparationPair pair(theta);
  if (!nogo_feasible(theta, n))
    throw InfeasibleError("solve_params: n = " + std::to_string(n) +
                          " is below min_n = " + std::to_string(min_n(theta)) +
                          " for theta = " + std::to_string(theta));
  const auto g = [&](double beta) {
    return std::abs(f_beta(beta, theta, n)) - 1.0;
  };

  CircuitParams params;
  params.n = n;
  params.theta = theta;

  const double g0 = g(0.0);
  if (g0 <= std::max(tol, kBoundaryAcceptTol)) {
    // Boundary pair: f(0) sits on the unit circle to within roundoff.
    params.beta = 0.0;
    params.bracket_lo = 0.0;
    params.bracket_hi = 0.0;
  } else {
    double lo = 0.0;
    double hi = std::numbers::pi;
    if (g(hi) > 0.0)
      throw NumericalError("solve_params: no sign change on [0, pi]");
    int iter = 0;
    while (hi - lo > 1e-15 && iter < kMaxSolverIterations) {
      const double mid = 0.5 * (lo + hi);
      if (g(mid) > 0.0)
        lo = mid;
      else
        hi = mid;
      ++iter;
    }
    params.beta = 0.5 * (lo + hi);
    params.bracket_lo = lo;
    params.bracket_hi = hi;
  }

  const cdouble f = f_beta(params.beta, theta, n);
  params.alpha = std::atan2(f.imag(), f.real());
  // atan2(-0.0, x < 0) lands on -pi; keep alpha in (-pi, pi].
  if (params.alpha == -std::numbers::pi) params.alpha = std::numbers::pi;
  params.residual = std::abs(std::abs(f) - 1.0);
  if (params.residual > std::max(tol, kBoundaryAcceptTol))
    throw NumericalError("solve_params: bisection residual " +
                         std::to_string(params.residual) +
                         " above tolerance");

  if (n == 2) {
    // Closed-form cross-check: beta = arccos((1 - 4t^2 - t^4) / (4t^3)).
    // Compared through cos(beta), which stays well conditioned at the
    // beta -> 0 boundary where arccos loses half the digits.
    const double t = pair.t();
    const double c =
        (1.0 - 4.0 * t * t - t * t * t * t) / (4.0 * t * t * t);
    const double c_clamped = std::min(1.0, std::max(-1.0, c));
    if (std::abs(std::cos(params.beta) - c_clamped) > 1e-9)
      throw NumericalError(
          "solve_params: n = 2 analytic root disagrees with bisection");
  }

  params.solved = true;
  return params;
}

// Amplitude of the forbidden outcome x for preparation |Psi(x)>:
//   2^{-n/2} cos^n(theta/2) (e^{i*alpha} + (1 + e^{i*beta} t)^n - 1).
// Independent of x; zero at solved parameters.
inline cdouble forbidden_amplitude(const CircuitParams& params) {
  const PreparationPair pair(params.theta);
  const cdouble inner = std::polar(1.0, params.alpha) +
                        detail::pow_int(1.0 + std::polar(pair.t(), params.beta),
                                        params.n) -
                        1.0;
  const double scale = std::exp2(-0.5 * params.n) *
                       std::pow(std::cos(0.5 * params.theta), params.n);
  return scale * inner;
}

// Run the measurement circuit: Z_beta on every qubit, then R_alpha, then
// Hadamards.
inline StateVector apply_measurement_circuit(const StateVector& state,
                                             double alpha, double beta) {
  return apply_gate(
      apply_gate(apply_gate(state, ZBetaGate{beta}), RAlphaGate{alpha}),
      HadamardAllGate{});
}

// POVM of the circuit measurement. Effects E_x = U†|x><x|U are rank one, so
// only the unit vectors U†|x> are stored; dense matrices are materialized on
// demand (all 2^n of them at once would be 2^{3n} entries).
class MeasurementSpec {
 public:
  MeasurementSpec(int n, std::vector<StateVector> effect_vectors)
      : n_(n), vectors_(std::move(effect_vectors)) {
    if (vectors_.size() != (std::uint64_t{1} << n))
      throw std::invalid_argument("MeasurementSpec: need 2^n effects");
  }

  int qubits() const { return n_; }
  std::uint64_t outcome_count() const { return vectors_.size(); }
  const StateVector& effect_vector(std::uint64_t x) const {
    return vectors_.at(x);
  }

  // Dense row-major 2^n x 2^n effect matrix |v_x><v_x|.
  std::vector<cdouble> effect_matrix(std::uint64_t x) const {
    const auto& v = vectors_.at(x).amps();
    const std::uint64_t d = v.size();
    std::vector<cdouble> m(d * d);
    for (std::uint64_t i = 0; i < d; ++i)
      for (std::uint64_t j = 0; j < d; ++j)
        m[i * d + j] = v[i] * std::conj(v[j]);
    return m;
  }

  double outcome_probability(std::uint64_t x, const StateVector& psi) const {
    return clamp_probability(std::norm(inner_product(vectors_.at(x), psi)));
  }

 private:
  int n_;
  std::vector<StateVector> vectors_;
};

inline MeasurementSpec build_povm(const CircuitParams& params,
                                  int max_qubits = kPovmMaxQubits) {
  if (params.n < 1) throw std::domain_error("build_povm: invalid n");
  if (params.n > max_qubits)
    throw ResourceError("build_povm: n = " + std::to_string(params.n) +
                        " exceeds dense-POVM cap of " +
                        std::to_string(max_qubits));
  const std::uint64_t dim = std::uint64_t{1} << params.n;
  std::vector<StateVector> vectors;
  vectors.reserve(dim);
  for (std::uint64_t x = 0; x < dim; ++x) {
    // U† = Z_{-beta}^{⊗n} R_{-alpha} H^{⊗n}
    StateVector v = StateVector::basis_state(params.n, x);
    v = apply_gate(v, HadamardAllGate{});
    v = apply_gate(v, RAlphaGate{-params.alpha});
    v = apply_gate(v, ZBetaGate{-params.beta});
    vectors.push_back(std::move(v));
  }
  return MeasurementSpec(params.n, std::move(vectors));
}

}  // namespace nogo
