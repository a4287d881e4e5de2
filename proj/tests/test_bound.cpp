#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "netdens/bound.hpp"
#include "netdens/rng.hpp"

using namespace netdens;

namespace {

// Parameter set used throughout: L=1, sigma^2=1, eta=0.01, F1=1, Finf=0.
BoundParams reference_params(std::uint64_t n, std::optional<std::uint64_t> k) {
  BoundParams p;
  p.lipschitz = 1.0;
  p.variance = 1.0;
  p.learning_rate = 0.01;
  p.f_initial = 1.0;
  p.f_inf = 0.0;
  p.iterations = k;
  p.node_count = n;
  return p;
}

}  // namespace

TEST_CASE("bound value at the frozen reference points") {
  const BoundParams p = reference_params(6, std::nullopt);

  SECTION("lambda = 0: the network term vanishes exactly") {
    const BoundTerms t = bound_value(p, 0.0);
    CHECK(t.network_term == 0.0);
    CHECK(t.sync_term == Catch::Approx(1.0 / 600.0).epsilon(1e-14));
    CHECK(t.total == Catch::Approx(1.6666666666666668e-3).epsilon(1e-14));
  }

  SECTION("lambda = 0.98 against frozen independent evaluation") {
    const BoundTerms t = bound_value(p, 0.98);
    CHECK(t.network_term == Catch::Approx(4.8505050505050409e-3).epsilon(1e-12));
    CHECK(t.total == Catch::Approx(6.5171717171717079e-3).epsilon(1e-12));
    // stays on the order of 1e-2 in the lambda <= 0.98 region
    CHECK(t.total < 1e-1);
    CHECK(t.total > 1e-3);
  }
}

TEST_CASE("finite K adds the vanishing synchronization term") {
  const BoundTerms inf_terms = bound_value(reference_params(6, std::nullopt), 0.5);
  const BoundTerms k1 = bound_value(reference_params(6, 1), 0.5);
  const BoundTerms k100 = bound_value(reference_params(6, 100), 0.5);
  CHECK(k1.total > k100.total);
  CHECK(k100.total > inf_terms.total);
  // 2 (F1 - Finf) / (eta K) at K=1
  CHECK(k1.sync_term - inf_terms.sync_term == Catch::Approx(200.0).epsilon(1e-12));
}

TEST_CASE("lambda domain is [0, 1)") {
  const BoundParams p = reference_params(6, std::nullopt);
  CHECK_THROWS_AS(bound_value(p, 1.0), DomainError);
  CHECK_THROWS_AS(bound_value(p, 1.5), DomainError);
  CHECK_THROWS_AS(bound_value(p, -0.1), DomainError);
  CHECK_THROWS_AS(learning_rate_feasible(p, 1.0), DomainError);
}

TEST_CASE("parameter invariants are enforced") {
  BoundParams p = reference_params(6, std::nullopt);
  p.lipschitz = 0.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = reference_params(6, std::nullopt);
  p.f_inf = 2.0;  // above f_initial
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = reference_params(0, std::nullopt);
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = reference_params(6, std::nullopt);
  p.beta = -1.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("beta is carried but does not enter the bound") {
  BoundParams a = reference_params(6, 100);
  BoundParams b = a;
  b.beta = 5.0;
  CHECK(bound_value(a, 0.7).total == bound_value(b, 0.7).total);
}

TEST_CASE("learning-rate feasibility condition") {
  BoundParams p = reference_params(6, std::nullopt);
  // 0.01 + 5e-4 * 25 = 0.0225 <= 1
  CHECK(learning_rate_feasible(p, 0.8));
  // smallest left side over lambda
  CHECK(learning_rate_feasible(p, 0.0));
  p.learning_rate = 0.5;
  // 0.5 + 125 > 1
  CHECK_FALSE(learning_rate_feasible(p, 0.9));
}

TEST_CASE("feasibility is monotone in lambda") {
  Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    BoundParams p = reference_params(4, std::nullopt);
    p.learning_rate = rng.uniform(1e-4, 0.5);
    p.lipschitz = rng.uniform(0.1, 5.0);
    const double lo = rng.uniform(0.0, 0.95);
    const double hi = lo + rng.uniform(0.0, 0.99 - lo);
    if (learning_rate_feasible(p, hi)) CHECK(learning_rate_feasible(p, lo));
  }
}

TEST_CASE("network term is zero at zero, strictly increasing and convex") {
  const BoundParams p = reference_params(6, std::nullopt);
  CHECK(bound_value(p, 0.0).network_term == 0.0);
  std::vector<double> grid;
  for (int i = 0; i <= 99; ++i) grid.push_back(static_cast<double>(i) / 100.0);
  const auto rows = lambda_sweep(p, grid);
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[i].network_term > rows[i - 1].network_term);
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    const double second_diff = rows[i + 1].network_term - 2.0 * rows[i].network_term +
                               rows[i - 1].network_term;
    CHECK(second_diff >= -1e-12);
  }
}

TEST_CASE("network term is independent of n and K") {
  const BoundTerms a = bound_value(reference_params(6, std::nullopt), 0.77);
  const BoundTerms b = bound_value(reference_params(20, 17), 0.77);
  CHECK(a.network_term == b.network_term);
}

TEST_CASE("total is exactly the sum of its two terms") {
  Rng rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    BoundParams p = reference_params(1 + rng.below(30),
                                     rng.uniform01() < 0.5
                                         ? std::optional<std::uint64_t>{}
                                         : std::optional<std::uint64_t>{1 + rng.below(1000)});
    p.learning_rate = rng.uniform(1e-4, 0.2);
    p.lipschitz = rng.uniform(0.1, 4.0);
    p.variance = rng.uniform(0.0, 3.0);
    const BoundTerms t = bound_value(p, rng.uniform(0.0, 0.999));
    CHECK(t.total == t.sync_term + t.network_term);
  }
}

TEST_CASE("lambda sweep preserves input order and matches bound_value") {
  const BoundParams p = reference_params(6, std::nullopt);

  SECTION("single point") {
    const auto rows = lambda_sweep(p, {0.0});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].network_term == 0.0);
  }

  SECTION("strictly increasing totals over a rising grid") {
    const std::vector<double> lambdas{0.0, 0.5, 0.9, 0.98, 0.999};
    const auto rows = lambda_sweep(p, lambdas);
    REQUIRE(rows.size() == lambdas.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].lambda == lambdas[i]);
      const BoundTerms t = bound_value(p, lambdas[i]);
      CHECK(rows[i].total == t.total);
      CHECK(rows[i].sync_term == t.sync_term);
      CHECK(rows[i].network_term == t.network_term);
    }
    for (std::size_t i = 1; i < rows.size(); ++i)
      CHECK(rows[i].total > rows[i - 1].total);
  }
}
