#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "netdens/consensus.hpp"
#include "netdens/dataset.hpp"
#include "netdens/errors.hpp"
#include "netdens/layout.hpp"
#include "netdens/model.hpp"
#include "netdens/optimizer.hpp"
#include "netdens/rng.hpp"

namespace netdens {

// Per-iteration compute cost: measured wall clock of the local-update phase,
// or a configured constant so traces reproduce across machines.
enum class ComputeTimeMode { fixed, measured };

struct TrainingConfig {
  double learning_rate = 0.01;
  std::uint64_t batch_size = 1;
  std::uint64_t iterations_per_epoch = 0;  // 0: ceil(partition size / batch size)
  std::uint64_t epochs = 1;
  std::uint64_t seed = 0;
  ModelSpec model;
  LossKind loss = LossKind::cross_entropy;
  ComputeTimeMode compute_mode = ComputeTimeMode::fixed;
  double compute_s_per_iteration = 1e-3;

  void validate() const {
    if (!(learning_rate > 0.0)) throw DomainError("learning rate must be > 0");
    if (batch_size < 1) throw DomainError("batch size must be >= 1");
    if (epochs < 1) throw DomainError("epochs must be >= 1");
    if (compute_mode == ComputeTimeMode::fixed && !(compute_s_per_iteration >= 0.0))
      throw DomainError("compute seconds per iteration must be >= 0");
  }
};

struct EpochRecord {
  std::uint64_t epoch = 0;              // 1-based
  std::vector<NodeMetrics> train;       // on each node's own partition
  std::vector<NodeMetrics> eval;        // on the held-out split; empty if none
  double compute_s = 0.0;               // cumulative
  double comm_s = 0.0;                  // cumulative
  double total_s() const { return compute_s + comm_s; }
};

struct TrainingTrace {
  std::vector<EpochRecord> epochs;
  std::vector<NodeMetrics> initial;  // metrics of the shared x0, at time zero
  std::vector<int> tdm_order;        // west-to-east broadcast order (metadata)
  std::uint64_t seed = 0;
  double t_com_s = 0.0;              // sharing time per iteration
  bool has_eval = false;
};

// All nodes start from one seed-determined point.
inline std::vector<Eigen::VectorXd> initialize_models(const TrainingConfig& config,
                                                      std::size_t nodes, int dimension) {
  config.validate();
  if (nodes < 1) throw DomainError("need at least one node");
  if (dimension < 1) throw DomainError("model dimension must be positive");
  Rng rng(splitmix64(config.seed ^ 0x2c1f8db04a96e571ULL));
  Eigen::VectorXd x0(dimension);
  for (int d = 0; d < dimension; ++d) x0(d) = rng.normal(0.0, 0.01);
  return std::vector<Eigen::VectorXd>(nodes, x0);
}

// One synchronous round: x_{k+1,i} = sum_j W_ij x_{k,j} - eta * g_i, with the
// gradients already evaluated at the pre-averaging models. The j-ascending
// accumulation order is fixed so runs are bit-reproducible regardless of how
// gradient work is scheduled.
inline std::vector<Eigen::VectorXd> dpsgd_step(
    const std::vector<Eigen::VectorXd>& models, const AveragingMatrix& w,
    const std::vector<Eigen::VectorXd>& gradients, double learning_rate) {
  const std::size_t n = models.size();
  if (w.size() != n || gradients.size() != n)
    throw ContractError("dpsgd_step: models, matrix and gradients disagree in size");
  for (std::size_t i = 0; i < n; ++i)
    if (models[i].size() != models[0].size() ||
        gradients[i].size() != models[0].size())
      throw ContractError("dpsgd_step: dimension mismatch");

  std::vector<Eigen::VectorXd> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(models[0].size());
    for (std::size_t j = 0; j < n; ++j)
      acc += w.w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
             models[j];
    next[i] = acc - learning_rate * gradients[i];
  }
  return next;
}

// Same-split evaluation of every node's model.
inline std::vector<NodeMetrics> evaluate_nodes(const ModelSpec& spec, LossKind loss,
                                               const std::vector<Eigen::VectorXd>& models,
                                               const Dataset& data,
                                               const std::vector<std::size_t>& indices) {
  std::vector<NodeMetrics> out;
  out.reserve(models.size());
  for (const auto& m : models) out.push_back(evaluate_model(spec, loss, m, data, indices));
  return out;
}

// Round-synchronous D-PSGD over a fixed averaging matrix. Per iteration each
// node samples a batch from its own partition (with replacement, per-node
// stream seeded seed^node_id), computes its gradient, and the shared
// averaging step mixes the models. Elapsed time per iteration is the compute
// cost plus the assignment's t_com.
inline TrainingTrace train(const NodeLayout& layout, const RateAssignment& assignment,
                           const TrainingConfig& config, const Dataset& data,
                           const Dataset* eval_data = nullptr) {
  config.validate();
  const std::size_t n = layout.size();
  if (assignment.size() != n)
    throw ContractError("assignment size does not match layout");
  if (data.size() < n)
    throw ContractError("dataset smaller than the node count");

  const int dim = model_dimension(config.model, data.feature_dim(), data.num_classes);
  std::vector<Eigen::VectorXd> models = initialize_models(config, n, dim);
  const AveragingMatrix w = averaging_matrix(assignment.topology);
  const Partition part = partition_dataset(data.size(), n, config.seed);

  std::size_t max_part = 0;
  for (const auto& p : part.per_node) max_part = std::max(max_part, p.size());
  const std::uint64_t iters_per_epoch =
      config.iterations_per_epoch > 0
          ? config.iterations_per_epoch
          : (max_part + config.batch_size - 1) / config.batch_size;

  std::vector<Rng> streams;
  streams.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    streams.emplace_back(config.seed ^ static_cast<std::uint64_t>(i));

  std::vector<std::size_t> eval_indices;
  if (eval_data) {
    eval_indices.resize(eval_data->size());
    for (std::size_t i = 0; i < eval_indices.size(); ++i) eval_indices[i] = i;
  }

  TrainingTrace trace;
  trace.seed = config.seed;
  trace.t_com_s = assignment.t_com_s;
  trace.tdm_order = layout.tdm_order();
  trace.has_eval = eval_data != nullptr;
  trace.initial.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    trace.initial.push_back(
        evaluate_model(config.model, config.loss, models[i], data, part.per_node[i]));

  double cum_compute = 0.0;
  double cum_comm = 0.0;
  std::vector<Eigen::VectorXd> gradients(n);
  std::vector<std::size_t> batch(config.batch_size);

  for (std::uint64_t epoch = 1; epoch <= config.epochs; ++epoch) {
    for (std::uint64_t k = 0; k < iters_per_epoch; ++k) {
      const auto t_start = std::chrono::steady_clock::now();
      for (std::size_t i = 0; i < n; ++i) {
        const auto& indices = part.per_node[i];
        for (std::uint64_t b = 0; b < config.batch_size; ++b)
          batch[b] = indices[streams[i].below(indices.size())];
        gradients[i] = batch_gradient(config.model, config.loss, models[i], data,
                                      batch, static_cast<std::size_t>(k));
      }
      models = dpsgd_step(models, w, gradients, config.learning_rate);
      if (config.compute_mode == ComputeTimeMode::measured) {
        cum_compute += std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - t_start)
                           .count();
      } else {
        cum_compute += config.compute_s_per_iteration;
      }
      cum_comm += assignment.t_com_s;
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.compute_s = cum_compute;
    rec.comm_s = cum_comm;
    rec.train.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      rec.train.push_back(evaluate_model(config.model, config.loss, models[i], data,
                                         part.per_node[i]));
    if (eval_data)
      rec.eval = evaluate_nodes(config.model, config.loss, models, *eval_data,
                                eval_indices);
    trace.epochs.push_back(std::move(rec));
  }
  return trace;
}

}  // namespace netdens
