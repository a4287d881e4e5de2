#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "netdens/errors.hpp"
#include "netdens/rng.hpp"

namespace netdens {

// Labeled samples, one feature row per sample. Labels are class indices for
// classification; with num_classes == 1 the label column is treated as a
// scalar regression target.
struct Dataset {
  Eigen::MatrixXd features;  // samples x feature_dim
  std::vector<double> labels;
  int num_classes = 1;

  std::size_t size() const { return static_cast<std::size_t>(features.rows()); }
  int feature_dim() const { return static_cast<int>(features.cols()); }

  int label_class(std::size_t i) const { return static_cast<int>(labels[i]); }
};

struct SyntheticSpec {
  int classes = 10;
  int features = 16;
  std::size_t samples = 6000;
  double cluster_std = 0.6;
  double mean_range = 1.0;  // class means drawn uniformly in [-range, range]^d
  std::uint64_t seed = 0;
};

// Gaussian class clusters with balanced labels, shuffled deterministically.
inline Dataset make_synthetic(const SyntheticSpec& spec) {
  if (spec.classes < 1 || spec.features < 1 || spec.samples < 1)
    throw DomainError("synthetic spec must have positive classes/features/samples");
  Rng rng(splitmix64(spec.seed ^ 0x5917a3d4c1b2e6f0ULL));

  Eigen::MatrixXd means(spec.classes, spec.features);
  for (int c = 0; c < spec.classes; ++c)
    for (int f = 0; f < spec.features; ++f)
      means(c, f) = rng.uniform(-spec.mean_range, spec.mean_range);

  Dataset data;
  data.num_classes = spec.classes;
  data.features.resize(static_cast<Eigen::Index>(spec.samples), spec.features);
  data.labels.resize(spec.samples);
  for (std::size_t s = 0; s < spec.samples; ++s) {
    const int c = static_cast<int>(s % static_cast<std::size_t>(spec.classes));
    for (int f = 0; f < spec.features; ++f)
      data.features(static_cast<Eigen::Index>(s), f) =
          means(c, f) + rng.normal(0.0, spec.cluster_std);
    data.labels[s] = c;
  }

  // Fisher-Yates over rows.
  for (std::size_t s = spec.samples; s-- > 1;) {
    const std::size_t k = rng.below(s + 1);
    if (k != s) {
      data.features.row(static_cast<Eigen::Index>(s))
          .swap(data.features.row(static_cast<Eigen::Index>(k)));
      std::swap(data.labels[s], data.labels[k]);
    }
  }
  return data;
}

// CSV ingestion: one sample per row, numeric cells, the designated column is
// the label and the remaining columns are features in order. Lines starting
// with '#' are skipped; a non-numeric first row is accepted as a header.
inline Dataset load_csv_dataset(const std::string& path, int label_column = 0) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open dataset file");

  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> cells;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used])))
          ++used;
        if (used != cell.size()) throw std::invalid_argument(cell);
        cells.push_back(v);
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      throw ParseError(path, line_no, "non-numeric cell in data row");
    }
    header_allowed = false;
    if (!rows.empty() && cells.size() != rows.front().size())
      throw ParseError(path, line_no, "inconsistent column count");
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw ParseError(path, line_no, "dataset contains no samples");

  const int cols = static_cast<int>(rows.front().size());
  if (label_column < 0 || label_column >= cols)
    throw ParseError(path, 0, "label column " + std::to_string(label_column) +
                                  " out of range for " + std::to_string(cols) +
                                  " columns");
  if (cols < 2) throw ParseError(path, 0, "need at least one feature column");

  Dataset data;
  data.features.resize(static_cast<Eigen::Index>(rows.size()), cols - 1);
  data.labels.resize(rows.size());
  bool integral = true;
  double max_label = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    int f = 0;
    for (int c = 0; c < cols; ++c) {
      if (c == label_column) {
        data.labels[r] = rows[r][static_cast<std::size_t>(c)];
        if (data.labels[r] != std::floor(data.labels[r]) || data.labels[r] < 0.0)
          integral = false;
        max_label = std::max(max_label, data.labels[r]);
      } else {
        data.features(static_cast<Eigen::Index>(r), f++) =
            rows[r][static_cast<std::size_t>(c)];
      }
    }
  }
  // Integer labels are class ids; anything else is a regression target.
  data.num_classes = integral ? static_cast<int>(max_label) + 1 : 1;
  return data;
}

// Disjoint, covering, near-equal per-node index lists; the shuffle is fully
// determined by the seed.
struct Partition {
  std::vector<std::vector<std::size_t>> per_node;

  std::size_t nodes() const { return per_node.size(); }
};

inline Partition partition_dataset(std::size_t total, std::size_t nodes,
                                   std::uint64_t seed) {
  if (nodes == 0) throw DomainError("partition needs at least one node");
  if (total < nodes)
    throw DomainError("cannot partition " + std::to_string(total) +
                      " samples across " + std::to_string(nodes) + " nodes");
  std::vector<std::size_t> indices(total);
  for (std::size_t i = 0; i < total; ++i) indices[i] = i;
  Rng rng(splitmix64(seed ^ 0x7bd5c9a81e3f6402ULL));
  for (std::size_t i = total; i-- > 1;) {
    const std::size_t k = rng.below(i + 1);
    std::swap(indices[i], indices[k]);
  }

  Partition part;
  part.per_node.resize(nodes);
  const std::size_t base = total / nodes;
  const std::size_t extra = total % nodes;
  std::size_t pos = 0;
  for (std::size_t nidx = 0; nidx < nodes; ++nidx) {
    const std::size_t take = base + (nidx < extra ? 1 : 0);
    part.per_node[nidx].assign(indices.begin() + static_cast<std::ptrdiff_t>(pos),
                               indices.begin() + static_cast<std::ptrdiff_t>(pos + take));
    pos += take;
  }
  return part;
}

}  // namespace netdens
