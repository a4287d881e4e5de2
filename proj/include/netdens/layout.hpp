#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "netdens/errors.hpp"
#include "netdens/rng.hpp"

namespace netdens {

struct Node {
  int id = 0;
  double x = 0.0;  // meters
  double y = 0.0;  // meters
};

// Node identities and 2-D coordinates. Ids must be unique and contiguous
// from 0, and no two nodes may share a position.
class NodeLayout {
 public:
  NodeLayout() = default;

  explicit NodeLayout(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
    validate();
  }

  std::size_t size() const { return nodes_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(std::size_t i) const { return nodes_.at(i); }

  double distance(std::size_t i, std::size_t j) const {
    const Node& a = nodes_.at(i);
    const Node& b = nodes_.at(j);
    return std::hypot(a.x - b.x, a.y - b.y);
  }

  // West-to-east broadcast order: ascending x, ties by id ascending.
  std::vector<int> tdm_order() const {
    std::vector<int> order(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) order[i] = nodes_[i].id;
    std::sort(order.begin(), order.end(), [this](int a, int b) {
      const Node& na = nodes_[static_cast<std::size_t>(a)];
      const Node& nb = nodes_[static_cast<std::size_t>(b)];
      if (na.x != nb.x) return na.x < nb.x;
      return a < b;
    });
    return order;
  }

 private:
  void validate() const {
    if (nodes_.empty()) throw DomainError("layout must contain at least one node");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].id != static_cast<int>(i))
        throw DomainError("node ids must be contiguous from 0; got id " +
                          std::to_string(nodes_[i].id) + " at position " +
                          std::to_string(i));
      if (!std::isfinite(nodes_[i].x) || !std::isfinite(nodes_[i].y))
        throw DomainError("node coordinates must be finite");
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      for (std::size_t j = i + 1; j < nodes_.size(); ++j)
        if (distance(i, j) <= 0.0)
          throw DomainError("nodes " + std::to_string(i) + " and " +
                            std::to_string(j) + " share a position");
  }

  std::vector<Node> nodes_;
};

// Uniform random placement in [0,width] x [0,height] with a minimum pairwise
// separation, for tests and synthetic scenarios.
inline NodeLayout random_layout(Rng& rng, std::size_t n, double width,
                                double height, double min_separation = 1.0) {
  std::vector<Node> nodes;
  nodes.reserve(n);
  int attempts = 0;
  while (nodes.size() < n) {
    if (++attempts > 100000)
      throw DomainError("random_layout: cannot place nodes with the requested separation");
    Node cand{static_cast<int>(nodes.size()), rng.uniform(0.0, width),
              rng.uniform(0.0, height)};
    bool ok = true;
    for (const Node& p : nodes) {
      if (std::hypot(p.x - cand.x, p.y - cand.y) < min_separation) {
        ok = false;
        break;
      }
    }
    if (ok) nodes.push_back(cand);
  }
  return NodeLayout(std::move(nodes));
}

// Six-node placement in a 200 m x 200 m area used by the shipped example
// scenario. Coordinates are approximate (read off a published deployment
// figure, not an exact data source).
inline NodeLayout example_layout6() {
  return NodeLayout({{0, 30.0, 170.0},
                     {1, 110.0, 185.0},
                     {2, 180.0, 150.0},
                     {3, 25.0, 60.0},
                     {4, 95.0, 30.0},
                     {5, 175.0, 75.0}});
}

}  // namespace netdens
