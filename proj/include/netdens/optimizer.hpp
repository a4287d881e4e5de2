#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "netdens/channel.hpp"
#include "netdens/consensus.hpp"
#include "netdens/errors.hpp"

namespace netdens {

struct OptimizerConfig {
  double lambda_target = 0.8;
  std::uint64_t model_bits = 1;  // M
  bool allow_isolation = false;  // adds a "reach nobody" candidate per node
  bool mutual_links = false;     // symmetrize connectivity before the density check

  void validate() const {
    if (!(lambda_target >= 0.0) || lambda_target >= 1.0)
      throw DomainError("lambda_target must lie in [0, 1)");
    if (model_bits == 0) throw DomainError("model_bits must be > 0");
  }
};

// Result of the rate search: per-node broadcast rates plus the topology,
// density and sharing time they induce.
struct RateAssignment {
  std::vector<double> rates_bps;
  Connectivity topology = Connectivity::identity(1);
  double lambda = 0.0;
  double t_com_s = 0.0;

  std::size_t size() const { return rates_bps.size(); }
};

// Time to share one round of models under TDM: t_com = M * sum_i 1/R_i.
// Summation is left-to-right so independently computed values are bit-equal.
inline double communication_time_s(const std::vector<double>& rates_bps,
                                   std::uint64_t model_bits) {
  if (model_bits == 0) throw DomainError("model_bits must be > 0");
  double inv_sum = 0.0;
  for (double r : rates_bps) {
    if (!(r > 0.0)) throw DomainError("all rates must be > 0");
    inv_sum += 1.0 / r;
  }
  return static_cast<double>(model_bits) * inv_sum;
}

// Rate candidates for one node: the margin-adjusted capacities of its
// outgoing links, deduplicated and sorted descending. Broadcasting at
// candidate value C_ij reaches exactly the nodes whose link capacity is at
// least that value.
inline std::vector<double> candidate_rates(const ChannelMatrix& channels,
                                           std::size_t node) {
  const std::size_t n = channels.size();
  if (node >= n) throw ContractError("node id out of range");
  std::vector<double> cands;
  cands.reserve(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == node) continue;
    const double eff = channels.effective(node, j);
    if (eff > 0.0) cands.push_back(eff);
  }
  std::sort(cands.begin(), cands.end(), std::greater<>());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  return cands;
}

namespace detail {

struct RateSearch {
  const ChannelMatrix& channels;
  const OptimizerConfig& config;
  std::vector<std::vector<double>> candidates;
  std::vector<double> suffix_min_inv;  // sum over k >= i of 1/max_rate_k

  std::vector<double> current;
  std::vector<double> best_rates;
  double best_cost = std::numeric_limits<double>::infinity();
  double min_lambda_seen = std::numeric_limits<double>::infinity();
  bool found = false;

  explicit RateSearch(const ChannelMatrix& ch, const OptimizerConfig& cfg)
      : channels(ch), config(cfg) {
    const std::size_t n = channels.size();
    candidates.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      candidates[i] = candidate_rates(channels, i);
      if (config.allow_isolation)
        candidates[i].insert(candidates[i].begin(),
                             std::numeric_limits<double>::infinity());
      if (candidates[i].empty())
        throw InfeasibleError(
            "node " + std::to_string(i) +
                " has no usable rate candidates (fading margin exceeds every "
                "link capacity)",
            1.0);
    }
    suffix_min_inv.assign(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;)
      suffix_min_inv[i] = suffix_min_inv[i + 1] + 1.0 / candidates[i][0];
    current.resize(n);
  }

  void evaluate_leaf() {
    const double cost = communication_time_s(current, config.model_bits);
    if (found && cost >= best_cost) return;  // lex order keeps the first minimizer

    Connectivity conn = connectivity_from_rates(channels, current);
    if (config.mutual_links) conn = symmetrized(conn);
    const AveragingMatrix w = averaging_matrix(conn);
#ifndef NDEBUG
    // Construction sanity: rows stochastic, density within the stochastic range.
    for (Eigen::Index r = 0; r < w.w.rows(); ++r)
      assert(std::abs(w.w.row(r).sum() - 1.0) <= 1e-12);
    assert(w.lambda >= 0.0 && w.lambda <= 1.0);
#endif
    min_lambda_seen = std::min(min_lambda_seen, w.lambda);
    if (w.lambda <= config.lambda_target) {
      best_cost = cost;
      best_rates = current;
      found = true;
    }
  }

  void descend(std::size_t depth, double inv_sum) {
    const std::size_t n = channels.size();
    if (depth == n) {
      evaluate_leaf();
      return;
    }
    const double m = static_cast<double>(config.model_bits);
    for (double rate : candidates[depth]) {
      const double inv_next = inv_sum + 1.0 / rate;
      if (found) {
        // Candidates descend, so 1/rate only grows: once the optimistic
        // completion exceeds the incumbent, the rest of this level does too.
        // The relative slack keeps 1-ulp rounding from pruning a true optimum.
        const double lower_bound = m * (inv_next + suffix_min_inv[depth + 1]);
        if (lower_bound > best_cost * (1.0 + 1e-12)) break;
      }
      current[depth] = rate;
      descend(depth + 1, inv_next);
    }
  }
};

}  // namespace detail

// Exhaustive solve of the rate-selection problem: minimize t_com over one
// candidate per node, subject to spectral_lambda(W) <= lambda_target.
// Candidate tuples are scanned in lexicographic order of descending-rate
// candidate indices; cost pruning never skips an improving tuple, so the
// result is the lexicographically smallest minimizer. Every node running
// this on the same inputs reproduces the same assignment.
inline RateAssignment optimize_rates(const ChannelMatrix& channels,
                                     const OptimizerConfig& config) {
  config.validate();
  const std::size_t n = channels.size();
  if (n == 1) {
    // Single node: nothing to share. Infinite rate encodes "no broadcast".
    return RateAssignment{{std::numeric_limits<double>::infinity()},
                          Connectivity::identity(1), 0.0, 0.0};
  }

  detail::RateSearch search(channels, config);
  search.descend(0, 0.0);
  if (!search.found)
    throw InfeasibleError(
        "no rate combination reaches lambda_target = " +
            std::to_string(config.lambda_target) +
            "; minimum achievable lambda is " +
            std::to_string(search.min_lambda_seen),
        search.min_lambda_seen);

  Connectivity conn = connectivity_from_rates(channels, search.best_rates);
  if (config.mutual_links) conn = symmetrized(conn);
  const AveragingMatrix w = averaging_matrix(conn);
  return RateAssignment{std::move(search.best_rates), std::move(conn), w.lambda,
                        search.best_cost};
}

// Flat, emission-ready view of an assignment.
struct NodeRateReport {
  int node = 0;
  double rate_bps = 0.0;
  std::vector<int> reached;  // nodes this node's broadcast arrives at
};

struct AssignmentReport {
  std::vector<NodeRateReport> per_node;
  double lambda = 0.0;
  double t_com_s = 0.0;
};

inline AssignmentReport assignment_report(const RateAssignment& assignment) {
  AssignmentReport report;
  report.lambda = assignment.lambda;
  report.t_com_s = assignment.t_com_s;
  const std::size_t n = assignment.size();
  report.per_node.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    NodeRateReport row;
    row.node = static_cast<int>(i);
    row.rate_bps = assignment.rates_bps[i];
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && assignment.topology.linked(i, j))
        row.reached.push_back(static_cast<int>(j));
    report.per_node.push_back(std::move(row));
  }
  return report;
}

}  // namespace netdens
