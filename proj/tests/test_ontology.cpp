// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "nogo/ontology.hpp"
#include "test_util.hpp"

using namespace nogo;
using nogo::testing::random_distribution;

namespace {
constexpr double kPi = std::numbers::pi;

OntModel random_model(Rng& rng, std::size_t lambda_count) {
  return OntModel(random_distribution(rng, lambda_count, 0.3),
                  random_distribution(rng, lambda_count, 0.3));
}

ResponseTable random_response(Rng& rng, int n, std::size_t lambda_count) {
  const std::uint64_t rows = pow_u64(lambda_count, n);
  std::vector<std::vector<double>> table(rows);
  for (auto& row : table)
    row = random_distribution(rng, std::size_t{1} << n);
  return ResponseTable(n, lambda_count, std::move(table));
}

// Feasible theta for a given n, away from the boundary. For n = 1 the only
// feasible angle is pi/2 itself.
double random_feasible_theta(Rng& rng, int n) {
  if (n == 1) return kPi / 2;
  const double lo = 2.0 * std::atan(std::exp2(1.0 / n) - 1.0) + 1e-6;
  return rng.uniform(lo, kPi / 2);
}
}  // namespace

TEST_CASE("tv_distance examples") {
  REQUIRE(tv_distance({0.5, 0.5}, {0.5, 0.5}) == 0.0);
  REQUIRE(std::abs(tv_distance({1.0, 0.0}, {0.0, 1.0}) - 1.0) < 1e-15);
  REQUIRE(std::abs(tv_distance({0.7, 0.3, 0.0}, {0.2, 0.3, 0.5}) - 0.5) <
          1e-15);
  REQUIRE_THROWS_AS(tv_distance({1.0}, {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("overlap examples") {
  REQUIRE(std::abs(overlap({0.3, 0.7}, {0.3, 0.7}) - 1.0) < 1e-15);
  REQUIRE(std::abs(overlap({0.7, 0.3, 0.0}, {0.2, 0.3, 0.5}) - 0.5) < 1e-15);
  REQUIRE_THROWS_AS(overlap({{1.0}}), std::invalid_argument);
}

TEST_CASE("overlap equals one minus tv_distance") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t L = 2 + rng.below(8);
    const auto mu0 = random_distribution(rng, L, 0.2);
    const auto mu1 = random_distribution(rng, L, 0.2);
    REQUIRE(std::abs(overlap(mu0, mu1) - (1.0 - tv_distance(mu0, mu1))) <=
            1e-12);
  }
}

TEST_CASE("tv_distance is a metric") {
  Rng rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t L = 2 + rng.below(6);
    const auto a = random_distribution(rng, L, 0.2);
    const auto b = random_distribution(rng, L, 0.2);
    const auto c = random_distribution(rng, L, 0.2);
    REQUIRE(tv_distance(a, b) == tv_distance(b, a));
    REQUIRE(tv_distance(a, c) <= tv_distance(a, b) + tv_distance(b, c) +
                                     1e-12);
    REQUIRE(tv_distance(a, a) == 0.0);
  }
}

TEST_CASE("overlap_region_mass examples") {
  REQUIRE(overlap_region_mass({1.0, 0.0}, {0.0, 1.0}) == 0.0);
  REQUIRE(std::abs(overlap_region_mass({0.5, 0.5}, {0.5, 0.5}) - 1.0) <
          1e-15);
  REQUIRE(std::abs(overlap_region_mass({0.7, 0.3, 0.0}, {0.2, 0.3, 0.5}) -
                   0.5) < 1e-15);
}

TEST_CASE("product_model") {
  SECTION("n = 1 returns the selected distribution") {
    const OntModel model({0.25, 0.75}, {0.6, 0.4});
    REQUIRE(product_model(model, 0, 1) == model.mu0());
    REQUIRE(product_model(model, 1, 1) == model.mu1());
  }
  SECTION("weights multiply across systems") {
    const OntModel model({0.25, 0.75}, {0.6, 0.4});
    const auto joint = product_model(model, 0b01, 2);
    REQUIRE(joint.size() == 4);
    // lambda_1 most significant: index 2 = (lambda1=1, lambda2=0)
    REQUIRE(std::abs(joint[2] - 0.75 * 0.6) < 1e-15);
  }
  SECTION("resource cap") {
    const OntModel model(std::vector<double>(100, 0.01),
                         std::vector<double>(100, 0.01));
    REQUIRE_THROWS_AS(product_model(model, 0, 4), ResourceError);
  }
}

TEST_CASE("product lemma: overlap of products is the overlap power") {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t L = 2 + rng.below(5);  // <= 6
    const int n = 1 + static_cast<int>(rng.below(4));
    const OntModel model = random_model(rng, L);
    std::vector<std::vector<double>> products;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x)
      products.push_back(product_model(model, x, n));
    const double lhs = n == 1 ? overlap(products[0], products[1])
                              : overlap(products);
    const double rhs = std::pow(overlap(model.mu0(), model.mu1()), n);
    REQUIRE(std::abs(lhs - rhs) <= 1e-9);
  }
}

TEST_CASE("predicted_probabilities") {
  const CircuitParams params = solve_params(kPi / 3, 2);
  SECTION("constant response is preparation independent") {
    const OntModel model({0.3, 0.7}, {0.5, 0.5});
    std::vector<std::vector<double>> rows(4, {0.1, 0.2, 0.3, 0.4});
    const ResponseTable resp(2, 2, rows);
    const auto p0 = predicted_probabilities(model, resp, 0b00);
    for (std::uint64_t x = 1; x < 4; ++x) {
      const auto px = predicted_probabilities(model, resp, x);
      for (std::size_t k = 0; k < 4; ++k)
        REQUIRE(std::abs(p0[k] - px[k]) <= 1e-15);
    }
  }
  SECTION("psi-ontic model reproduces the Born probabilities") {
    const auto [model, resp] =
        make_reference_model(ReferenceKind::kPsiOntic, params);
    const auto quantum = quantum_outcome_table(params);
    for (std::uint64_t x = 0; x < 4; ++x) {
      const auto p = predicted_probabilities(model, resp, x);
      for (std::size_t k = 0; k < 4; ++k)
        REQUIRE(std::abs(p[k] - quantum[x][k]) <= 1e-12);
    }
  }
  SECTION("identical distributions give identical predictions") {
    Rng rng(24);
    const OntModel model({0.5, 0.5}, {0.5, 0.5});
    const ResponseTable resp = random_response(rng, 2, 2);
    const auto p0 = predicted_probabilities(model, resp, 0b00);
    for (std::uint64_t x = 1; x < 4; ++x) {
      const auto px = predicted_probabilities(model, resp, x);
      for (std::size_t k = 0; k < 4; ++k)
        REQUIRE(std::abs(p0[k] - px[k]) <= 1e-15);
    }
  }
  SECTION("outputs are normalized for random models") {
    Rng rng(25);
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t L = 2 + rng.below(4);
      const int n = 1 + static_cast<int>(rng.below(3));
      const OntModel model = random_model(rng, L);
      const ResponseTable resp = random_response(rng, n, L);
      const std::uint64_t x = rng.below(std::uint64_t{1} << n);
      REQUIRE(is_probability_vector(
          predicted_probabilities(model, resp, x), 1e-10));
    }
  }
}

TEST_CASE("max_deviation on the reference models") {
  const CircuitParams params = solve_params(kPi / 4, 2);
  SECTION("psi-ontic: exact agreement, disjoint distributions") {
    const auto [model, resp] =
        make_reference_model(ReferenceKind::kPsiOntic, params);
    const DeviationReport report = max_deviation(model, resp, params);
    REQUIRE(report.epsilon <= 1e-12);
    REQUIRE(std::abs(report.tv - 1.0) <= 1e-15);
    REQUIRE(report.q == 0.0);
    REQUIRE(report.bound_holds);
  }
  SECTION("fully overlapping: forced deviation epsilon >= 1/4") {
    const auto [model, resp] =
        make_reference_model(ReferenceKind::kFullyOverlapping, params);
    const DeviationReport report = max_deviation(model, resp, params);
    REQUIRE(report.epsilon >= 0.25 - 1e-9);
    REQUIRE(std::abs(report.omega - 1.0) <= 1e-15);
    REQUIRE(report.bound_holds);
  }
  SECTION("partial(0.4): D = 0.6 and the noise bound holds") {
    const auto [model, resp] =
        make_reference_model(ReferenceKind::kPartial, params, 0.4);
    const DeviationReport report = max_deviation(model, resp, params);
    REQUIRE(std::abs(report.tv - 0.6) <= 1e-12);
    REQUIRE(std::abs(report.q - 0.4) <= 1e-12);
    REQUIRE(report.bound_holds);
    REQUIRE(report.tv >= 1.0 - 2.0 * std::sqrt(report.epsilon) - 1e-9);
  }
  SECTION("invalid partial q") {
    REQUIRE_THROWS_AS(
        make_reference_model(ReferenceKind::kPartial, params, 1.5),
        std::domain_error);
    REQUIRE_THROWS_AS(
        make_reference_model(ReferenceKind::kPartial, params, -0.1),
        std::domain_error);
  }
}

TEST_CASE("bound chain for random models") {
  Rng rng(26);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t L = 2 + rng.below(5);
    const int n = 1 + static_cast<int>(rng.below(4));
    const double theta = random_feasible_theta(rng, n);
    const CircuitParams params = solve_params(theta, n);
    const OntModel model = random_model(rng, L);
    const ResponseTable resp = random_response(rng, n, L);
    const DeviationReport report = max_deviation(model, resp, params);
    // omega^n <= 2^n epsilon, and D >= 1 - 2 eps^{1/n}.
    REQUIRE(std::pow(report.omega, n) <=
            std::exp2(n) * report.epsilon + 1e-9);
    REQUIRE(report.bound_holds);
    REQUIRE(std::abs(report.omega - (1.0 - report.tv)) <= 1e-12);
    // On the overlap region the pointwise min is below each mu_i, so the
    // overlap never exceeds the region mass.
    REQUIRE(report.omega <= report.q + 1e-12);
    REQUIRE(report.q <= 1.0 + 1e-12);
  }
}

TEST_CASE("monte carlo joint overlap frequency approaches q^n") {
  const CircuitParams params = solve_params(kPi / 4, 2);
  for (const double q : {0.1, 0.5}) {
    const auto [model, resp] =
        make_reference_model(ReferenceKind::kPartial, params, q);
    const double estimate = overlap_hit_rate(model, 0b00, 2, 2024);
    const double expected = q * q;
    const double se = std::sqrt(expected * (1.0 - expected) / 1e6);
    REQUIRE(std::abs(estimate - expected) <= 3.0 * se);
  }
}

TEST_CASE("monte carlo estimates are reproducible given the seed") {
  const OntModel model({0.5, 0.0, 0.5}, {0.0, 0.5, 0.5});
  const double a = overlap_hit_rate(model, 0b01, 2, 7, 10'000);
  const double b = overlap_hit_rate(model, 0b01, 2, 7, 10'000);
  REQUIRE(a == b);
}

TEST_CASE("model validation") {
  REQUIRE_THROWS_AS(OntModel({0.5, 0.4}, {0.5, 0.5}), std::invalid_argument);
  REQUIRE_THROWS_AS(OntModel({-0.1, 1.1}, {0.5, 0.5}), std::invalid_argument);
  REQUIRE_THROWS_AS(OntModel({1.0}, {0.5, 0.5}), std::invalid_argument);
  REQUIRE_THROWS_AS(ResponseTable(2, 2, {{1.0, 0.0, 0.0, 0.0}}),
                    std::invalid_argument);
}
