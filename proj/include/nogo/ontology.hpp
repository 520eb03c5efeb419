// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "nogo/circuit.hpp"
#include "nogo/errors.hpp"
#include "nogo/qcore.hpp"
#include "nogo/rng.hpp"
#include "nogo/verifier.hpp"

namespace nogo {

inline constexpr double kDistributionSumTol = 1e-12;
// Dense tables over Lambda^n are capped at this many joint ontic states.
inline constexpr std::uint64_t kMaxLambdaTable = 1'000'000;
inline constexpr std::uint64_t kDefaultMcSamples = 1'000'000;
// Slack for the theorem-level inequalities, covering floating-point
// accumulation on both sides.
inline constexpr double kBoundSlack = 1e-9;

namespace detail {

inline void validate_distribution(const std::vector<double>& mu,
                                  const char* name) {
  if (mu.empty())
    throw std::invalid_argument(std::string(name) + ": empty distribution");
  KahanSum s;
  for (double p : mu) {
    if (!(p >= 0.0))
      throw std::invalid_argument(std::string(name) +
                                  ": negative or non-finite entry");
    s.add(p);
  }
  if (std::abs(s.value() - 1.0) > kDistributionSumTol)
    throw std::invalid_argument(std::string(name) + ": sums to " +
                                std::to_string(s.value()) + ", expected 1");
}

}  // namespace detail

// A discrete ontological model: finite Lambda with one distribution per
// preparation.
class OntModel {
 public:
  OntModel(std::vector<double> mu0, std::vector<double> mu1)
      : mu0_(std::move(mu0)), mu1_(std::move(mu1)) {
    detail::validate_distribution(mu0_, "OntModel mu0");
    detail::validate_distribution(mu1_, "OntModel mu1");
    if (mu0_.size() != mu1_.size())
      throw std::invalid_argument("OntModel: mu0 and mu1 differ in length");
  }

  std::size_t lambda_count() const { return mu0_.size(); }
  const std::vector<double>& mu0() const { return mu0_; }
  const std::vector<double>& mu1() const { return mu1_; }
  const std::vector<double>& mu(int i) const { return i ? mu1_ : mu0_; }

 private:
  std::vector<double> mu0_;
  std::vector<double> mu1_;
};

// Total variation distance D = (1/2) sum |mu0 - mu1|.
inline double tv_distance(const std::vector<double>& mu0,
                          const std::vector<double>& mu1) {
  if (mu0.size() != mu1.size())
    throw std::invalid_argument("tv_distance: length mismatch");
  detail::KahanSum s;
  for (std::size_t i = 0; i < mu0.size(); ++i)
    s.add(std::abs(mu0[i] - mu1[i]));
  return 0.5 * s.value();
}

// Overlap of k distributions: sum over lambda of the pointwise minimum.
inline double overlap(const std::vector<std::vector<double>>& mus) {
  if (mus.size() < 2)
    throw std::invalid_argument("overlap: need at least two distributions");
  const std::size_t len = mus.front().size();
  for (const auto& mu : mus)
    if (mu.size() != len)
      throw std::invalid_argument("overlap: length mismatch");
  detail::KahanSum s;
  for (std::size_t i = 0; i < len; ++i) {
    double m = mus.front()[i];
    for (const auto& mu : mus) m = std::min(m, mu[i]);
    s.add(m);
  }
  return s.value();
}

inline double overlap(const std::vector<double>& mu0,
                      const std::vector<double>& mu1) {
  return overlap(std::vector<std::vector<double>>{mu0, mu1});
}

// q = min_i mu_i(Delta) where Delta = { lambda : mu0 > 0 and mu1 > 0 }.
inline double overlap_region_mass(const std::vector<double>& mu0,
                                  const std::vector<double>& mu1) {
  if (mu0.size() != mu1.size())
    throw std::invalid_argument("overlap_region_mass: length mismatch");
  detail::KahanSum m0, m1;
  for (std::size_t i = 0; i < mu0.size(); ++i) {
    if (mu0[i] > 0.0 && mu1[i] > 0.0) {
      m0.add(mu0[i]);
      m1.add(mu1[i]);
    }
  }
  return std::min(m0.value(), m1.value());
}

inline std::uint64_t pow_u64(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > kMaxLambdaTable)
      return std::numeric_limits<std::uint64_t>::max();
    r *= base;
  }
  return r;
}

// Product distribution over Lambda^n for preparation bits x:
// mu_x(l1..ln) = prod_i mu_{x_i}(l_i). Index convention matches the qubit
// one: lambda_1 is the most significant digit (base lambda_count).
inline std::vector<double> product_model(const OntModel& model,
                                         std::uint64_t x, int n,
                                         std::uint64_t max_table =
                                             kMaxLambdaTable) {
  if (n < 1) throw std::domain_error("product_model: need n >= 1");
  const std::uint64_t size = pow_u64(model.lambda_count(), n);
  if (size > max_table)
    throw ResourceError("product_model: lambda_count^n exceeds cap");
  std::vector<double> joint{1.0};
  joint.reserve(size);
  for (int i = 1; i <= n; ++i) {
    const auto& mu = model.mu(static_cast<int>((x >> (n - i)) & 1u));
    std::vector<double> next;
    next.reserve(joint.size() * mu.size());
    for (double w : joint)
      for (double p : mu) next.push_back(w * p);
    joint = std::move(next);
  }
  return joint;
}

// Response table xi: for each joint ontic state (l1..ln), a distribution over
// the 2^n measurement outcomes. Stored dense, row index in base lambda_count
// with lambda_1 most significant.
class ResponseTable {
 public:
  ResponseTable(int n, std::size_t lambda_count,
                std::vector<std::vector<double>> rows)
      : n_(n), lambda_count_(lambda_count), rows_(std::move(rows)) {
    if (n < 1) throw std::domain_error("ResponseTable: need n >= 1");
    const std::uint64_t expected_rows = pow_u64(lambda_count, n);
    if (expected_rows > kMaxLambdaTable)
      throw ResourceError("ResponseTable: lambda_count^n exceeds cap");
    if (rows_.size() != expected_rows)
      throw std::invalid_argument("ResponseTable: need lambda_count^n rows");
    const std::size_t outcomes = std::size_t{1} << n;
    for (const auto& row : rows_) {
      if (row.size() != outcomes)
        throw std::invalid_argument("ResponseTable: row needs 2^n outcomes");
      detail::validate_distribution(row, "ResponseTable row");
    }
  }

  int systems() const { return n_; }
  std::size_t lambda_count() const { return lambda_count_; }
  std::size_t row_count() const { return rows_.size(); }
  std::uint64_t outcome_count() const { return std::uint64_t{1} << n_; }
  const std::vector<double>& row(std::size_t joint_index) const {
    return rows_.at(joint_index);
  }

  // Decode a joint row index into per-system lambda values.
  std::vector<std::size_t> lambdas_of(std::size_t joint_index) const {
    std::vector<std::size_t> ls(n_);
    for (int i = n_ - 1; i >= 0; --i) {
      ls[i] = joint_index % lambda_count_;
      joint_index /= lambda_count_;
    }
    return ls;
  }

 private:
  int n_;
  std::size_t lambda_count_;
  std::vector<std::vector<double>> rows_;
};

// Operational probabilities of the model:
// p(k|x) = sum over joint lambda of xi(k|lambda) * mu_x(lambda).
inline std::vector<double> predicted_probabilities(const OntModel& model,
                                                   const ResponseTable& resp,
                                                   std::uint64_t x) {
  if (resp.lambda_count() != model.lambda_count())
    throw std::invalid_argument(
        "predicted_probabilities: lambda space mismatch");
  const std::vector<double> weights = product_model(model, x, resp.systems());
  const std::size_t outcomes = resp.outcome_count();
  std::vector<detail::KahanSum> acc(outcomes);
  for (std::size_t idx = 0; idx < weights.size(); ++idx) {
    const double w = weights[idx];
    if (w == 0.0) continue;
    const auto& row = resp.row(idx);
    for (std::size_t k = 0; k < outcomes; ++k) acc[k].add(w * row[k]);
  }
  std::vector<double> probs(outcomes);
  for (std::size_t k = 0; k < outcomes; ++k)
    probs[k] = clamp_probability(acc[k].value());
  return probs;
}

struct DeviationReport {
  int n = 0;
  // Max |p_model(k|x) - p_quantum(k|x)| over all preparations and outcomes.
  double epsilon = 0.0;
  double tv = 0.0;     // D(mu0, mu1)
  double omega = 0.0;  // overlap, = 1 - D
  double q = 0.0;      // overlap-region mass
  double bound_rhs = 0.0;  // 1 - 2 * epsilon^{1/n}
  bool bound_holds = false;
};

// Measure the model's worst-case deviation from the quantum predictions of
// the solved circuit, and evaluate D >= 1 - 2 eps^{1/n}.
inline DeviationReport max_deviation(const OntModel& model,
                                     const ResponseTable& resp,
                                     const CircuitParams& params) {
  if (!params.solved)
    throw std::invalid_argument("max_deviation: circuit params not solved");
  if (resp.systems() != params.n)
    throw std::invalid_argument("max_deviation: system count mismatch");
  const auto quantum = quantum_outcome_table(params);

  DeviationReport report;
  report.n = params.n;
  const std::uint64_t dim = std::uint64_t{1} << params.n;
  for (std::uint64_t x = 0; x < dim; ++x) {
    const std::vector<double> p_model =
        predicted_probabilities(model, resp, x);
    for (std::uint64_t k = 0; k < dim; ++k)
      report.epsilon =
          std::max(report.epsilon, std::abs(p_model[k] - quantum[x][k]));
  }
  report.tv = tv_distance(model.mu0(), model.mu1());
  report.omega = overlap(model.mu0(), model.mu1());
  report.q = overlap_region_mass(model.mu0(), model.mu1());
  report.bound_rhs =
      1.0 - 2.0 * std::pow(report.epsilon, 1.0 / params.n);
  report.bound_holds = report.tv >= report.bound_rhs - kBoundSlack;
  return report;
}

// Response table that does the best it can given only each lambda's support
// pattern: every lambda compatible with both preparations contributes the
// average of the two Born distributions for that slot. For each joint lambda
// the row is the uniform mixture of the quantum outcome distributions over
// all compatible preparations.
inline ResponseTable best_effort_response(const OntModel& model,
                                          const CircuitParams& params) {
  if (!params.solved)
    throw std::invalid_argument("best_effort_response: params not solved");
  const auto quantum = quantum_outcome_table(params);
  const int n = params.n;
  const std::size_t L = model.lambda_count();
  const std::uint64_t rows = pow_u64(L, n);
  if (rows > kMaxLambdaTable)
    throw ResourceError("best_effort_response: lambda_count^n exceeds cap");
  const std::size_t outcomes = std::size_t{1} << n;

  // Per lambda: which preparations its support allows (3 = both).
  std::vector<int> support(L);
  for (std::size_t l = 0; l < L; ++l)
    support[l] = (model.mu0()[l] > 0.0 ? 1 : 0) |
                 (model.mu1()[l] > 0.0 ? 2 : 0);

  std::vector<std::vector<double>> table(rows);
  std::vector<std::size_t> ls(n);
  for (std::uint64_t idx = 0; idx < rows; ++idx) {
    std::uint64_t rem = idx;
    for (int i = n - 1; i >= 0; --i) {
      ls[i] = rem % L;
      rem /= L;
    }
    // Enumerate compatible preparation bit patterns for this joint lambda.
    std::vector<double> row(outcomes, 0.0);
    std::vector<std::uint64_t> completions{0};
    double weight = 1.0;
    for (int i = 0; i < n; ++i) {
      const int sup = support[ls[i]] == 0 ? 3 : support[ls[i]];
      std::vector<std::uint64_t> next;
      next.reserve(completions.size() * 2);
      for (std::uint64_t c : completions) {
        if (sup & 1) next.push_back(c << 1);
        if (sup & 2) next.push_back((c << 1) | 1);
      }
      if (sup == 3) weight *= 0.5;
      completions = std::move(next);
    }
    for (std::uint64_t y : completions)
      for (std::size_t k = 0; k < outcomes; ++k)
        row[k] += weight * quantum[y][k];
    table[idx] = std::move(row);
  }
  return ResponseTable(n, L, std::move(table));
}

enum class ReferenceKind {
  // Lambda = {0, 1} mirrors the preparation; reproduces quantum theory
  // exactly, disjoint distributions (D = 1).
  kPsiOntic,
  // mu0 = mu1 uniform on {0, 1}: lambda carries no information, the forced
  // deviation is epsilon >= 2^{-n}.
  kFullyOverlapping,
  // Lambda = {0, 1, 2} with a shared state of mass q in both preparations:
  // D = 1 - q with intermediate deviation.
  kPartial,
};

inline std::pair<OntModel, ResponseTable> make_reference_model(
    ReferenceKind kind, const CircuitParams& params, double q = 0.5) {
  OntModel model = [&]() -> OntModel {
    switch (kind) {
      case ReferenceKind::kPsiOntic:
        return OntModel({1.0, 0.0}, {0.0, 1.0});
      case ReferenceKind::kFullyOverlapping:
        return OntModel({0.5, 0.5}, {0.5, 0.5});
      case ReferenceKind::kPartial:
        if (!(q >= 0.0) || q > 1.0)
          throw std::domain_error("make_reference_model: q outside [0, 1]");
        return OntModel({1.0 - q, 0.0, q}, {0.0, 1.0 - q, q});
    }
    throw std::logic_error("make_reference_model: unknown kind");
  }();
  ResponseTable resp = best_effort_response(model, params);
  return {std::move(model), std::move(resp)};
}

// Monte Carlo estimate of the probability that all n lambdas sampled from
// the product distribution mu_x land in the overlap region Delta. For the
// partial(q) model this converges to q^n.
inline double overlap_hit_rate(const OntModel& model, std::uint64_t x, int n,
                               std::uint64_t seed,
                               std::uint64_t samples = kDefaultMcSamples) {
  if (n < 1) throw std::domain_error("overlap_hit_rate: need n >= 1");
  if (samples == 0) return 0.0;
  std::vector<bool> in_delta(model.lambda_count());
  for (std::size_t l = 0; l < model.lambda_count(); ++l)
    in_delta[l] = model.mu0()[l] > 0.0 && model.mu1()[l] > 0.0;

  const CategoricalSampler sampler0(model.mu0());
  const CategoricalSampler sampler1(model.mu1());
  Rng rng(seed);
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    bool all = true;
    for (int i = 1; i <= n; ++i) {
      const bool use1 = ((x >> (n - i)) & 1u) != 0;
      const std::size_t l =
          use1 ? sampler1.sample(rng) : sampler0.sample(rng);
      all = all && in_delta[l];
    }
    hits += all ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

}  // namespace nogo
