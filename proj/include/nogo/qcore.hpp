// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nogo/errors.hpp"

namespace nogo {

using cdouble = std::complex<double>;

// Resource and tolerance defaults. State vectors are dense, so the qubit cap
// bounds memory at 2^n amplitudes; 16 qubits = 65536 entries. The override
// tops out at the hard addressability cap below.
inline constexpr int kDefaultMaxQubits = 16;
inline constexpr int kHardMaxQubits = 30;
inline constexpr double kStateNormTol = 1e-12;
inline constexpr double kProbabilitySumTol = 1e-10;
inline constexpr double kProbabilityClampFloor = -1e-15;

namespace detail {

// Compensated (Kahan) summation; keeps aggregate sums deterministic and
// accurate regardless of length.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = sum_ + y;
    c_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

inline bool finite(cdouble z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace detail

// The preparation pair |psi_0>, |psi_1> in the basis where
//   |psi_0> = cos(theta/2)|0> + sin(theta/2)|1>
//   |psi_1> = cos(theta/2)|0> - sin(theta/2)|1>
// with 0 < theta <= pi/2. Orthogonal pairs sit at the theta = pi/2 boundary.
class PreparationPair {
 public:
  explicit PreparationPair(double theta) : theta_(theta) {
    if (!(theta > 0.0) || theta > std::numbers::pi / 2)
      throw std::domain_error(
          "PreparationPair: theta must lie in (0, pi/2], got " +
          std::to_string(theta));
  }

  double theta() const { return theta_; }
  // t = tan(theta/2), in (0, 1].
  double t() const { return std::tan(0.5 * theta_); }
  // |<psi_0|psi_1>| = cos(theta)
  double state_overlap() const { return std::cos(theta_); }
  // Trace distance between the pure states = sin(theta).
  double trace_distance() const { return std::sin(theta_); }

 private:
  double theta_;
};

// Dense n-qubit state vector. Basis index convention: qubit 1 is the most
// significant bit of the index, so |x1 x2 ... xn> lives at
// z = x1*2^(n-1) + ... + xn. Construction enforces unit norm (1e-12 on the
// squared norm) and finiteness of every amplitude.
class StateVector {
 public:
  StateVector(int n, std::vector<cdouble> amps,
              int max_qubits = kDefaultMaxQubits)
      : n_(n), amps_(std::move(amps)) {
    if (n < 1) throw std::domain_error("StateVector: need at least one qubit");
    if (n > std::min(max_qubits, kHardMaxQubits))
      throw ResourceError("StateVector: " + std::to_string(n) +
                          " qubits exceeds cap of " +
                          std::to_string(std::min(max_qubits, kHardMaxQubits)));
    if (amps_.size() != (std::uint64_t{1} << n))
      throw std::invalid_argument("StateVector: amplitude count must be 2^n");
    detail::KahanSum s;
    for (cdouble a : amps_) {
      if (!detail::finite(a))
        throw std::invalid_argument("StateVector: non-finite amplitude");
      s.add(std::norm(a));
    }
    if (std::abs(s.value() - 1.0) > kStateNormTol)
      throw std::invalid_argument("StateVector: not normalized, |amps|^2 = " +
                                  std::to_string(s.value()));
  }

  static StateVector basis_state(int n, std::uint64_t z,
                                 int max_qubits = kDefaultMaxQubits) {
    if (n < 1) throw std::domain_error("basis_state: need at least one qubit");
    if (n > std::min(max_qubits, kHardMaxQubits))
      throw ResourceError("basis_state: qubit cap exceeded");
    const std::uint64_t dim = std::uint64_t{1} << n;
    if (z >= dim)
      throw std::invalid_argument("basis_state: index out of range");
    std::vector<cdouble> amps(dim, 0.0);
    amps[z] = 1.0;
    return StateVector(n, std::move(amps), max_qubits);
  }

  int qubits() const { return n_; }
  std::uint64_t dim() const { return amps_.size(); }
  const std::vector<cdouble>& amps() const { return amps_; }
  cdouble amp(std::uint64_t z) const { return amps_.at(z); }

  double norm_sq() const {
    detail::KahanSum s;
    for (cdouble a : amps_) s.add(std::norm(a));
    return s.value();
  }

 private:
  int n_;
  std::vector<cdouble> amps_;
};

// Gate tags. Zbeta acts on every qubit (diagonal phase e^{i|z|beta} with |z|
// the popcount), Ralpha phases only the all-zeros state, HadamardAll is the
// n-fold Hadamard transform.
struct ZBetaGate {
  double beta;
};
struct RAlphaGate {
  double alpha;
};
struct HadamardAllGate {};

inline StateVector apply_gate(const StateVector& state, const ZBetaGate& g) {
  const int n = state.qubits();
  std::vector<cdouble> phase(n + 1);
  for (int k = 0; k <= n; ++k) phase[k] = std::polar(1.0, k * g.beta);
  std::vector<cdouble> amps = state.amps();
  for (std::uint64_t z = 0; z < amps.size(); ++z)
    amps[z] *= phase[std::popcount(z)];
  return StateVector(state.qubits(), std::move(amps), state.qubits());
}

inline StateVector apply_gate(const StateVector& state, const RAlphaGate& g) {
  std::vector<cdouble> amps = state.amps();
  amps[0] *= std::polar(1.0, g.alpha);
  return StateVector(state.qubits(), std::move(amps), state.qubits());
}

inline StateVector apply_gate(const StateVector& state, HadamardAllGate) {
  const int n = state.qubits();
  std::vector<cdouble> amps = state.amps();
  const std::uint64_t dim = amps.size();
  for (int bit = 0; bit < n; ++bit) {
    const std::uint64_t h = std::uint64_t{1} << bit;
    for (std::uint64_t base = 0; base < dim; base += 2 * h) {
      for (std::uint64_t i = base; i < base + h; ++i) {
        const cdouble a = amps[i];
        const cdouble b = amps[i + h];
        amps[i] = a + b;
        amps[i + h] = a - b;
      }
    }
  }
  const double scale = std::exp2(-0.5 * n);
  for (cdouble& a : amps) a *= scale;
  return StateVector(n, std::move(amps), n);
}

// Single-qubit |psi_0>, |psi_1> for the pair.
inline std::pair<StateVector, StateVector> prep_states(
    const PreparationPair& pair) {
  const double c = std::cos(0.5 * pair.theta());
  const double s = std::sin(0.5 * pair.theta());
  return {StateVector(1, {c, s}), StateVector(1, {c, -s})};
}

// Tensor product, left factor on the more significant bits.
inline StateVector tensor_product(const StateVector& a, const StateVector& b,
                                  int max_qubits = kDefaultMaxQubits) {
  const int n = a.qubits() + b.qubits();
  if (n > std::min(max_qubits, kHardMaxQubits))
    throw ResourceError("tensor_product: qubit cap exceeded");
  std::vector<cdouble> amps;
  amps.reserve(a.dim() * b.dim());
  for (cdouble x : a.amps())
    for (cdouble y : b.amps()) amps.push_back(x * y);
  return StateVector(n, std::move(amps), max_qubits);
}

// Product preparation |Psi(x)> = |psi_{x1}> ⊗ ... ⊗ |psi_{xn}>, where bit i
// of x (qubit 1 = most significant) selects the i-th factor.
inline StateVector product_state(const PreparationPair& pair, std::uint64_t x,
                                 int n, int max_qubits = kDefaultMaxQubits) {
  if (n < 1) throw std::domain_error("product_state: need at least one qubit");
  const int cap = std::min(max_qubits, kHardMaxQubits);
  if (n > cap)
    throw ResourceError("product_state: " + std::to_string(n) +
                        " qubits exceeds cap of " + std::to_string(cap));
  if (x >= (std::uint64_t{1} << n))
    throw std::invalid_argument("product_state: preparation bits out of range");
  const double c = std::cos(0.5 * pair.theta());
  const double s = std::sin(0.5 * pair.theta());
  std::vector<cdouble> amps{1.0};
  for (int i = 1; i <= n; ++i) {
    const int xi = static_cast<int>((x >> (n - i)) & 1u);
    const double a1 = xi ? -s : s;
    std::vector<cdouble> next;
    next.reserve(amps.size() * 2);
    for (cdouble e : amps) {
      next.push_back(e * c);
      next.push_back(e * a1);
    }
    amps = std::move(next);
  }
  return StateVector(n, std::move(amps), max_qubits);
}

// Clamp floating-point undershoot; anything below the floor is a real error.
inline double clamp_probability(double p,
                                double floor = kProbabilityClampFloor) {
  if (p < 0.0) {
    if (p < floor)
      throw NumericalError("probability " + std::to_string(p) +
                           " below clamp floor");
    return 0.0;
  }
  return p;
}

// Born-rule probabilities in the computational basis.
inline std::vector<double> born_probabilities(const StateVector& state) {
  std::vector<double> probs;
  probs.reserve(state.dim());
  for (cdouble a : state.amps()) probs.push_back(clamp_probability(std::norm(a)));
  return probs;
}

// <a|b>, conjugating a.
inline cdouble inner_product(const StateVector& a, const StateVector& b) {
  if (a.qubits() != b.qubits())
    throw std::invalid_argument("inner_product: dimension mismatch");
  detail::KahanSum re, im;
  for (std::uint64_t z = 0; z < a.dim(); ++z) {
    const cdouble term = std::conj(a.amps()[z]) * b.amps()[z];
    re.add(term.real());
    im.add(term.imag());
  }
  return {re.value(), im.value()};
}

inline bool is_probability_vector(const std::vector<double>& probs,
                                  double sum_tol = kProbabilitySumTol) {
  detail::KahanSum s;
  for (double p : probs) {
    if (p < 0.0 || p > 1.0) return false;
    s.add(p);
  }
  return std::abs(s.value() - 1.0) <= sum_tol;
}

// Bitstring rendering for reports: qubit 1 first (most significant).
inline std::string format_bits(std::uint64_t x, int n) {
  std::string out(n, '0');
  for (int i = 0; i < n; ++i)
    if ((x >> (n - 1 - i)) & 1u) out[i] = '1';
  return out;
}

}  // namespace nogo
