#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "netdens/dataset.hpp"
#include "netdens/errors.hpp"
#include "netdens/rng.hpp"

namespace netdens {

enum class ModelKind { logistic_regression, mlp };
enum class LossKind { cross_entropy, squared_error };

// Desk-scale models over a flat parameter vector. An mlp uses tanh hidden
// activations (smooth, so finite-difference gradient checks are exact to
// truncation error) and a linear output layer.
struct ModelSpec {
  ModelKind kind = ModelKind::logistic_regression;
  std::vector<int> hidden;  // used by mlp only

  std::vector<int> layer_dims(int features, int classes) const {
    std::vector<int> dims{features};
    if (kind == ModelKind::mlp)
      dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(classes);
    return dims;
  }
};

inline int model_dimension(const ModelSpec& spec, int features, int classes) {
  if (features < 1 || classes < 1)
    throw DomainError("model needs at least one feature and one output");
  const std::vector<int> dims = spec.layer_dims(features, classes);
  int total = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    if (dims[l + 1] < 1) throw DomainError("layer widths must be positive");
    total += (dims[l] + 1) * dims[l + 1];  // weights + bias
  }
  return total;
}

namespace detail {

// Forward pass; keeps per-layer activations when a backward pass follows.
inline Eigen::VectorXd model_forward(const ModelSpec& spec,
                                     const Eigen::VectorXd& theta,
                                     const Eigen::VectorXd& x, int classes,
                                     std::vector<Eigen::VectorXd>* activations) {
  const std::vector<int> dims = spec.layer_dims(static_cast<int>(x.size()), classes);
  Eigen::VectorXd a = x;
  if (activations) activations->push_back(a);
  int offset = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const int in = dims[l];
    const int out = dims[l + 1];
    const Eigen::Map<const Eigen::MatrixXd> w(theta.data() + offset, out, in);
    offset += out * in;
    const Eigen::Map<const Eigen::VectorXd> b(theta.data() + offset, out);
    offset += out;
    Eigen::VectorXd z = w * a + b;
    const bool last = (l + 2 == dims.size());
    a = last ? z : z.array().tanh().matrix();
    if (activations) activations->push_back(a);
  }
  return a;
}

// Loss on raw outputs plus its gradient w.r.t. the outputs.
inline double loss_on_outputs(LossKind loss, const Eigen::VectorXd& out,
                              double label, Eigen::VectorXd* grad_out) {
  const int classes = static_cast<int>(out.size());
  if (loss == LossKind::cross_entropy) {
    const int c = static_cast<int>(label);
    if (c < 0 || c >= classes)
      throw DomainError("cross_entropy label " + std::to_string(label) +
                        " outside [0, " + std::to_string(classes) + ")");
    const double zmax = out.maxCoeff();
    const double lse = zmax + std::log((out.array() - zmax).exp().sum());
    if (grad_out) {
      *grad_out = (out.array() - lse).exp().matrix();  // softmax probabilities
      (*grad_out)(c) -= 1.0;
    }
    return lse - out(c);
  }
  // squared error against a one-hot target (or the raw value for 1-d output)
  Eigen::VectorXd target = Eigen::VectorXd::Zero(classes);
  if (classes == 1) {
    target(0) = label;
  } else {
    const int c = static_cast<int>(label);
    if (c < 0 || c >= classes)
      throw DomainError("squared_error class label outside range");
    target(c) = 1.0;
  }
  const Eigen::VectorXd diff = out - target;
  if (grad_out) *grad_out = 2.0 * diff;
  return diff.squaredNorm();
}

}  // namespace detail

inline Eigen::VectorXd model_outputs(const ModelSpec& spec,
                                     const Eigen::VectorXd& theta,
                                     const Eigen::VectorXd& x, int classes) {
  return detail::model_forward(spec, theta, x, classes, nullptr);
}

// Mean loss over a batch of sample indices.
inline double batch_loss(const ModelSpec& spec, LossKind loss,
                         const Eigen::VectorXd& theta, const Dataset& data,
                         const std::vector<std::size_t>& batch) {
  if (batch.empty()) throw ContractError("batch must be non-empty");
  double total = 0.0;
  for (std::size_t idx : batch) {
    const Eigen::VectorXd out = model_outputs(
        spec, theta, data.features.row(static_cast<Eigen::Index>(idx)).transpose(),
        data.num_classes);
    total += detail::loss_on_outputs(loss, out, data.labels[idx], nullptr);
  }
  return total / static_cast<double>(batch.size());
}

// Mean gradient of the batch loss w.r.t. the flat parameter vector,
// evaluated at the node's current (pre-averaging) model.
inline Eigen::VectorXd batch_gradient(const ModelSpec& spec, LossKind loss,
                                      const Eigen::VectorXd& theta,
                                      const Dataset& data,
                                      const std::vector<std::size_t>& batch,
                                      std::size_t iteration_hint = 0) {
  if (batch.empty()) throw ContractError("batch must be non-empty");
  const int classes = data.num_classes;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(theta.size());

  for (std::size_t idx : batch) {
    std::vector<Eigen::VectorXd> acts;
    const Eigen::VectorXd x =
        data.features.row(static_cast<Eigen::Index>(idx)).transpose();
    const Eigen::VectorXd out = detail::model_forward(spec, theta, x, classes, &acts);

    Eigen::VectorXd delta;
    detail::loss_on_outputs(loss, out, data.labels[idx], &delta);

    // Backward through the packed layers.
    const std::vector<int> dims = spec.layer_dims(static_cast<int>(x.size()), classes);
    std::vector<int> offsets(dims.size() - 1);
    int offset = 0;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
      offsets[l] = offset;
      offset += (dims[l] + 1) * dims[l + 1];
    }
    for (std::size_t l = dims.size() - 1; l-- > 0;) {
      const int in = dims[l];
      const int out_dim = dims[l + 1];
      const Eigen::Map<const Eigen::MatrixXd> w(theta.data() + offsets[l], out_dim, in);
      Eigen::Map<Eigen::MatrixXd> gw(grad.data() + offsets[l], out_dim, in);
      Eigen::Map<Eigen::VectorXd> gb(grad.data() + offsets[l] + out_dim * in, out_dim);
      gw.noalias() += delta * acts[l].transpose();
      gb += delta;
      if (l > 0) {
        // tanh'(z) = 1 - a^2 with a the stored activation
        Eigen::VectorXd upstream = w.transpose() * delta;
        delta = (upstream.array() * (1.0 - acts[l].array().square())).matrix();
      }
    }
  }
  grad /= static_cast<double>(batch.size());
  if (!grad.allFinite())
    throw NumericalError("non-finite gradient at iteration " +
                         std::to_string(iteration_hint));
  return grad;
}

struct NodeMetrics {
  double accuracy = 0.0;
  double loss = 0.0;
};

// Accuracy and mean loss of one model over the given sample indices.
// Classification accuracy is argmax agreement; 1-d outputs count a hit when
// the prediction rounds to the target.
inline NodeMetrics evaluate_model(const ModelSpec& spec, LossKind loss,
                                  const Eigen::VectorXd& theta, const Dataset& data,
                                  const std::vector<std::size_t>& indices) {
  if (indices.empty()) throw ContractError("evaluation split must be non-empty");
  std::size_t hits = 0;
  double total_loss = 0.0;
  for (std::size_t idx : indices) {
    const Eigen::VectorXd out = model_outputs(
        spec, theta, data.features.row(static_cast<Eigen::Index>(idx)).transpose(),
        data.num_classes);
    total_loss += detail::loss_on_outputs(loss, out, data.labels[idx], nullptr);
    if (data.num_classes == 1) {
      if (std::abs(out(0) - data.labels[idx]) <= 0.5) ++hits;
    } else {
      Eigen::Index pred = 0;
      out.maxCoeff(&pred);
      if (static_cast<int>(pred) == data.label_class(idx)) ++hits;
    }
  }
  return NodeMetrics{static_cast<double>(hits) / static_cast<double>(indices.size()),
                     total_loss / static_cast<double>(indices.size())};
}

}  // namespace netdens
