#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netdens/errors.hpp"

namespace netdens {

// Inputs of the convergence-bound evaluator. iterations == nullopt is the
// distinguished K -> infinity case: the vanishing 1/K term is exactly zero,
// not merely small. beta belongs to the bounded-variance assumption; it is
// carried for completeness but does not enter the bound formula.
struct BoundParams {
  double lipschitz = 1.0;       // L
  double variance = 1.0;        // sigma^2
  double beta = 0.0;
  double learning_rate = 0.01;  // eta
  double f_initial = 1.0;
  double f_inf = 0.0;
  std::optional<std::uint64_t> iterations;  // K; nullopt = infinity
  std::uint64_t node_count = 1;

  void validate() const {
    if (!(lipschitz > 0.0)) throw DomainError("lipschitz must be > 0");
    if (!(variance >= 0.0)) throw DomainError("variance must be >= 0");
    if (!(beta >= 0.0)) throw DomainError("beta must be >= 0");
    if (!(learning_rate > 0.0)) throw DomainError("learning rate must be > 0");
    if (!(f_initial >= f_inf)) throw DomainError("f_initial must be >= f_inf");
    if (iterations && *iterations < 1) throw DomainError("iterations must be >= 1");
    if (node_count < 1) throw DomainError("node count must be >= 1");
  }
};

struct BoundTerms {
  double total = 0.0;
  double sync_term = 0.0;     // fully-synchronized SGD component
  double network_term = 0.0;  // network-error component, grows with lambda
};

namespace detail {

inline void check_lambda_domain(double lambda) {
  if (!(lambda >= 0.0) || lambda >= 1.0)
    throw DomainError("lambda must lie in [0, 1); got " + std::to_string(lambda) +
                      " (the bound diverges as lambda -> 1)");
}

}  // namespace detail

// Upper bound on the average squared gradient norm after K iterations:
//   sync    = 2 (F1 - Finf) / (eta K) + eta L sigma^2 / n
//   network = eta^2 L^2 sigma^2 ((1 + lambda^2) / (1 - lambda^2) - 1)
inline BoundTerms bound_value(const BoundParams& p, double lambda) {
  p.validate();
  detail::check_lambda_domain(lambda);

  double sync = p.learning_rate * p.lipschitz * p.variance /
                static_cast<double>(p.node_count);
  if (p.iterations)
    sync += 2.0 * (p.f_initial - p.f_inf) /
            (p.learning_rate * static_cast<double>(*p.iterations));

  const double lam2 = lambda * lambda;
  const double network = p.learning_rate * p.learning_rate * p.lipschitz *
                         p.lipschitz * p.variance *
                         ((1.0 + lam2) / (1.0 - lam2) - 1.0);

  return BoundTerms{sync + network, sync, network};
}

// Step-size condition of the convergence analysis:
//   eta L + 5 eta^2 L^2 (1 / (1 - lambda))^2 <= 1.
inline bool learning_rate_feasible(const BoundParams& p, double lambda) {
  p.validate();
  detail::check_lambda_domain(lambda);
  const double etaL = p.learning_rate * p.lipschitz;
  const double inv = 1.0 / (1.0 - lambda);
  return etaL + 5.0 * etaL * etaL * inv * inv <= 1.0;
}

struct BoundSweepRow {
  double lambda;
  double total;
  double sync_term;
  double network_term;
};

inline std::vector<BoundSweepRow> lambda_sweep(const BoundParams& p,
                                               const std::vector<double>& lambdas) {
  std::vector<BoundSweepRow> rows;
  rows.reserve(lambdas.size());
  for (double lam : lambdas) {
    const BoundTerms t = bound_value(p, lam);
    rows.push_back({lam, t.total, t.sync_term, t.network_term});
  }
  return rows;
}

}  // namespace netdens
