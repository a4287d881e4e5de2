#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <limits>
#include <string>

#include "netdens/errors.hpp"
#include "netdens/layout.hpp"
#include "netdens/radio.hpp"

namespace netdens {

// Pairwise channel capacities in bit/s. capacity(i,j) is the capacity of the
// i -> j link; the diagonal holds +inf as a "self" sentinel (a node always
// has its own model at zero cost). The fading margin used downstream is
// carried along so rate candidates and connectivity agree on it.
class ChannelMatrix {
 public:
  ChannelMatrix(Eigen::MatrixXd capacity, double fading_margin_bps)
      : capacity_(std::move(capacity)), fading_margin_bps_(fading_margin_bps) {
    if (capacity_.rows() != capacity_.cols())
      throw ContractError("channel matrix must be square");
    if (!(fading_margin_bps_ >= 0.0))
      throw DomainError("fading margin must be >= 0");
  }

  std::size_t size() const { return static_cast<std::size_t>(capacity_.rows()); }

  double capacity(std::size_t i, std::size_t j) const {
    return capacity_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  // Usable rate on the i -> j link after the fading margin.
  double effective(std::size_t i, std::size_t j) const {
    if (i == j) return std::numeric_limits<double>::infinity();
    return std::max(capacity(i, j) - fading_margin_bps_, 0.0);
  }

  double fading_margin_bps() const { return fading_margin_bps_; }
  const Eigen::MatrixXd& raw() const { return capacity_; }

 private:
  Eigen::MatrixXd capacity_;
  double fading_margin_bps_;
};

inline ChannelMatrix build_channel_matrix(const NodeLayout& layout,
                                          const RadioParams& params) {
  params.validate();
  const auto n = static_cast<Eigen::Index>(layout.size());
  Eigen::MatrixXd cap(n, n);
  cap.setConstant(std::numeric_limits<double>::infinity());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = layout.distance(static_cast<std::size_t>(i),
                                       static_cast<std::size_t>(j));
      if (!(d > 0.0))
        throw DomainError("nodes " + std::to_string(i) + " and " +
                          std::to_string(j) + " coincide; capacity undefined");
      cap(i, j) = channel_capacity_bps(params, d);
    }
  }
  return ChannelMatrix(std::move(cap), params.fading_margin_bps);
}

}  // namespace netdens
