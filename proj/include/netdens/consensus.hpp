#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "netdens/channel.hpp"
#include "netdens/errors.hpp"

namespace netdens {

// Directed 0/1 adjacency with a mandatory self-loop on every node, so that
// averaging rows are never empty.
class Connectivity {
 public:
  explicit Connectivity(Eigen::MatrixXd adjacency)
      : adjacency_(std::move(adjacency)) {
    if (adjacency_.rows() != adjacency_.cols())
      throw ContractError("adjacency must be square");
    for (Eigen::Index i = 0; i < adjacency_.rows(); ++i) {
      for (Eigen::Index j = 0; j < adjacency_.cols(); ++j) {
        const double a = adjacency_(i, j);
        if (a != 0.0 && a != 1.0)
          throw ContractError("adjacency entries must be 0 or 1");
      }
      if (adjacency_(i, i) != 1.0)
        throw ContractError("adjacency diagonal must be 1 (self-loop)");
    }
  }

  static Connectivity complete(std::size_t n) {
    return Connectivity(Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n)));
  }

  static Connectivity identity(std::size_t n) {
    return Connectivity(Eigen::MatrixXd::Identity(
        static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
  }

  std::size_t size() const { return static_cast<std::size_t>(adjacency_.rows()); }

  bool linked(std::size_t i, std::size_t j) const {
    return adjacency_(static_cast<Eigen::Index>(i),
                      static_cast<Eigen::Index>(j)) != 0.0;
  }

  const Eigen::MatrixXd& matrix() const { return adjacency_; }

  bool operator==(const Connectivity& other) const {
    return adjacency_ == other.adjacency_;
  }

 private:
  Eigen::MatrixXd adjacency_;
};

// Row-stochastic gossip matrix together with its density parameter lambda.
struct AveragingMatrix {
  Eigen::MatrixXd w;
  double lambda = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(w.rows()); }
};

// A_ij = 1 iff node i's broadcast rate fits the (margin-adjusted) i -> j
// capacity; the self entry is always 1. Rates below every capacity give the
// complete graph, rates above every capacity leave only self-loops.
inline Connectivity connectivity_from_rates(const ChannelMatrix& channels,
                                            const std::vector<double>& rates) {
  const std::size_t n = channels.size();
  if (rates.size() != n)
    throw ContractError("rate vector size " + std::to_string(rates.size()) +
                        " does not match channel matrix size " + std::to_string(n));
  for (double r : rates)
    if (!(r > 0.0)) throw DomainError("all rates must be > 0");

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (channels.effective(i, j) >= rates[i])
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
    }
  }
  return Connectivity(std::move(a));
}

// Keep only mutual links: A_ij <- A_ij * A_ji. Matches the symmetric-matrix
// regime assumed by the convergence theory.
inline Connectivity symmetrized(const Connectivity& conn) {
  const Eigen::MatrixXd& a = conn.matrix();
  Eigen::MatrixXd sym = a.cwiseProduct(a.transpose());
  return Connectivity(std::move(sym));
}

namespace detail {

inline std::string dump_matrix(const Eigen::MatrixXd& m) {
  std::ostringstream os;
  os << m;
  return os.str();
}

}  // namespace detail

// Density parameter: the largest eigenvalue magnitude after removing exactly
// one Perron eigenvalue (the eigenvalue at 1 guaranteed by row stochasticity).
// Connectivity can be asymmetric, so eigenvalues may be complex; ordering is
// by magnitude.
inline double spectral_lambda(const Eigen::MatrixXd& w) {
  if (w.rows() != w.cols()) throw ContractError("averaging matrix must be square");
  const Eigen::Index n = w.rows();
  if (n == 1) return 0.0;

  Eigen::EigenSolver<Eigen::MatrixXd> solver(w, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eigensolver failed to converge on matrix:\n" +
                         detail::dump_matrix(w));

  std::vector<std::complex<double>> evs(solver.eigenvalues().data(),
                                        solver.eigenvalues().data() + n);
  Eigen::Index perron = 0;
  double best = std::abs(evs[0] - std::complex<double>(1.0, 0.0));
  for (Eigen::Index k = 1; k < n; ++k) {
    const double dist = std::abs(evs[static_cast<std::size_t>(k)] -
                                 std::complex<double>(1.0, 0.0));
    if (dist < best) {
      best = dist;
      perron = k;
    }
  }
  if (best > 1e-8)
    throw NumericalError(
        "no eigenvalue within 1e-8 of 1; matrix is not row-stochastic:\n" +
        detail::dump_matrix(w));
  evs.erase(evs.begin() + perron);

  double lambda = 0.0;
  for (const auto& ev : evs) lambda = std::max(lambda, std::abs(ev));
  // Row-stochastic spectral radius is exactly 1; trim numerical overshoot.
  return std::clamp(lambda, 0.0, 1.0);
}

// Degree-normalized averaging: W_ij = A_ij / (row degree of i). The self-loop
// guarantees a positive row sum.
inline AveragingMatrix averaging_matrix(const Connectivity& conn) {
  const Eigen::MatrixXd& a = conn.matrix();
  Eigen::MatrixXd w = a.array().colwise() / a.rowwise().sum().array();
  AveragingMatrix result{std::move(w), 0.0};
  result.lambda = spectral_lambda(result.w);
  return result;
}

}  // namespace netdens
