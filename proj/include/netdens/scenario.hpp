#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "netdens/bound.hpp"
#include "netdens/channel.hpp"
#include "netdens/config.hpp"
#include "netdens/csv.hpp"
#include "netdens/dataset.hpp"
#include "netdens/dpsgd.hpp"
#include "netdens/errors.hpp"
#include "netdens/layout.hpp"
#include "netdens/model.hpp"
#include "netdens/optimizer.hpp"
#include "netdens/radio.hpp"
#include "netdens/version.hpp"

namespace netdens {

// ---------------------------------------------------------------------------
// layout file io
// ---------------------------------------------------------------------------

// Layout files are CSV with header `id,x,y`, one node per row.
inline NodeLayout load_layout_csv(const std::string& path) {
  const CsvTable table = read_csv(path);
  if (table.header != std::vector<std::string>{"id", "x", "y"})
    throw ParseError(path, 0, "layout file must have header `id,x,y`");
  std::vector<Node> nodes;
  nodes.reserve(table.rows.size());
  for (const auto& row : table.rows)
    nodes.push_back(Node{std::stoi(row[0]), std::stod(row[1]), std::stod(row[2])});
  return NodeLayout(std::move(nodes));
}

inline void save_layout_csv(const NodeLayout& layout, const std::string& path) {
  CsvWriter out(path);
  out.row({"id", "x", "y"});
  for (const Node& n : layout.nodes())
    out.row({std::to_string(n.id), format_number(n.x), format_number(n.y)});
}

// ---------------------------------------------------------------------------
// scenario configuration
// ---------------------------------------------------------------------------

enum class DataSource { synthetic, csv };

struct DataConfig {
  DataSource source = DataSource::synthetic;
  // synthetic
  int classes = 10;
  int features = 16;
  std::uint64_t samples_per_node = 1000;
  double cluster_std = 0.6;
  double mean_range = 1.0;
  std::optional<std::uint64_t> seed;  // defaults to the training seed
  std::uint64_t eval_samples = 0;     // held-out synthetic split; 0 = none
  // csv
  std::string file;
  int label_column = 0;
};

struct SweepSpec {
  std::vector<double> lambda_targets;
  std::vector<double> epsilons;
};

struct ScenarioConfig {
  NodeLayout layout;
  RadioParams radio;
  OptimizerConfig optimizer;  // model_bits == 0 means "derive as 32 * N"
  TrainingConfig training;
  DataConfig data;
  BoundParams bound;
  std::vector<double> bound_lambdas;
  SweepSpec sweep;
  std::string output_dir = "out";
  double accuracy_threshold = 0.8;
};

namespace detail {

[[noreturn]] inline void config_fail(const KeyValueConfig& cfg,
                                     const std::string& section,
                                     const std::string& key,
                                     const std::string& message) {
  throw ParseError(cfg.path(), cfg.line_of(section, key), message);
}

inline ModelSpec parse_model_spec(const KeyValueConfig& cfg, const std::string& value) {
  std::istringstream ss(value);
  std::string kind;
  ss >> kind;
  ModelSpec spec;
  if (kind == "logistic_regression") {
    spec.kind = ModelKind::logistic_regression;
    int extra;
    if (ss >> extra)
      config_fail(cfg, "training", "model", "logistic_regression takes no sizes");
  } else if (kind == "mlp") {
    spec.kind = ModelKind::mlp;
    int width;
    while (ss >> width) {
      if (width < 1)
        config_fail(cfg, "training", "model", "hidden widths must be positive");
      spec.hidden.push_back(width);
    }
    if (spec.hidden.empty())
      config_fail(cfg, "training", "model", "mlp needs at least one hidden width");
  } else {
    config_fail(cfg, "training", "model",
                "unknown model `" + kind + "` (expected logistic_regression or mlp)");
  }
  return spec;
}

inline std::vector<double> default_bound_lambdas() {
  std::vector<double> lambdas;
  lambdas.reserve(100);
  for (int i = 0; i < 100; ++i) lambdas.push_back(static_cast<double>(i) / 100.0);
  return lambdas;
}

}  // namespace detail

inline ScenarioConfig load_scenario(const std::string& path) {
  const KeyValueConfig cfg = KeyValueConfig::parse_file(path);
  cfg.require_known({
      "layout.file", "layout.node",
      "radio.tx_power_dbm", "radio.bandwidth_hz", "radio.noise_density_dbm_hz",
      "radio.path_loss_index", "radio.fading_margin_bps",
      "optimizer.lambda_target", "optimizer.model_bits", "optimizer.allow_isolation",
      "optimizer.mutual_links",
      "training.learning_rate", "training.batch_size", "training.iterations_per_epoch",
      "training.epochs", "training.seed", "training.model", "training.loss",
      "training.compute_time_mode", "training.compute_s_per_iteration",
      "data.source", "data.classes", "data.features", "data.samples_per_node",
      "data.cluster_std", "data.mean_range", "data.seed", "data.eval_samples",
      "data.file", "data.label_column",
      "sweep.lambda_targets", "sweep.epsilons",
      "bound.lipschitz", "bound.variance", "bound.beta", "bound.learning_rate",
      "bound.f_initial", "bound.f_inf", "bound.iterations", "bound.node_count",
      "bound.lambdas",
      "output.dir", "output.accuracy_threshold",
  });

  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  ScenarioConfig sc;

  // layout: inline nodes or a referenced file (config-relative path)
  const auto inline_nodes = cfg.values("layout", "node");
  if (cfg.has("layout", "file") && !inline_nodes.empty())
    detail::config_fail(cfg, "layout", "file", "give either `file` or `node` lines, not both");
  if (cfg.has("layout", "file")) {
    const std::filesystem::path ref = cfg.get_string("layout", "file");
    const std::filesystem::path resolved = ref.is_absolute() ? ref : base / ref;
    if (!std::filesystem::exists(resolved))
      detail::config_fail(cfg, "layout", "file",
                          "layout file does not exist: " + resolved.string());
    sc.layout = load_layout_csv(resolved.string());
  } else if (!inline_nodes.empty()) {
    std::vector<Node> nodes;
    for (const auto& entry : inline_nodes) {
      std::istringstream ss(entry.value);
      Node n;
      if (!(ss >> n.id >> n.x >> n.y))
        throw ParseError(path, entry.line, "node line must be `<id> <x> <y>`");
      nodes.push_back(n);
    }
    try {
      sc.layout = NodeLayout(std::move(nodes));
    } catch (const DomainError& e) {
      detail::config_fail(cfg, "layout", "node", e.what());
    }
  } else {
    throw ParseError(path, 0, "section [layout] needs `file` or `node` lines");
  }

  sc.radio.tx_power_dbm = cfg.get_double("radio", "tx_power_dbm", 0.0);
  sc.radio.bandwidth_hz = cfg.get_double("radio", "bandwidth_hz", 20e6);
  sc.radio.noise_density_dbm_hz = cfg.get_double("radio", "noise_density_dbm_hz", -172.0);
  sc.radio.path_loss_index = cfg.get_double("radio", "path_loss_index", 3.0);
  sc.radio.fading_margin_bps = cfg.get_double("radio", "fading_margin_bps", 0.0);
  if (!(sc.radio.bandwidth_hz > 0.0))
    detail::config_fail(cfg, "radio", "bandwidth_hz", "bandwidth must be > 0");
  if (!(sc.radio.path_loss_index > 0.0))
    detail::config_fail(cfg, "radio", "path_loss_index", "path loss index must be > 0");
  if (!(sc.radio.fading_margin_bps >= 0.0))
    detail::config_fail(cfg, "radio", "fading_margin_bps", "fading margin must be >= 0");

  sc.optimizer.lambda_target = cfg.get_double("optimizer", "lambda_target", 0.8);
  sc.optimizer.model_bits = cfg.get_u64("optimizer", "model_bits", 0);
  sc.optimizer.allow_isolation = cfg.get_bool("optimizer", "allow_isolation", false);
  sc.optimizer.mutual_links = cfg.get_bool("optimizer", "mutual_links", false);
  if (!(sc.optimizer.lambda_target >= 0.0 && sc.optimizer.lambda_target < 1.0))
    detail::config_fail(cfg, "optimizer", "lambda_target",
                        "lambda_target must lie in [0, 1)");

  sc.training.learning_rate = cfg.get_double("training", "learning_rate", 0.01);
  sc.training.batch_size = cfg.get_u64("training", "batch_size", 1);
  sc.training.iterations_per_epoch = cfg.get_u64("training", "iterations_per_epoch", 0);
  sc.training.epochs = cfg.get_u64("training", "epochs", 10);
  sc.training.seed = cfg.get_u64("training", "seed", 0);
  sc.training.model =
      detail::parse_model_spec(cfg, cfg.get_string("training", "model",
                                                   "logistic_regression"));
  const std::string loss = cfg.get_string("training", "loss", "cross_entropy");
  if (loss == "cross_entropy") sc.training.loss = LossKind::cross_entropy;
  else if (loss == "squared_error") sc.training.loss = LossKind::squared_error;
  else detail::config_fail(cfg, "training", "loss", "unknown loss `" + loss + "`");
  const std::string mode = cfg.get_string("training", "compute_time_mode", "fixed");
  if (mode == "fixed") sc.training.compute_mode = ComputeTimeMode::fixed;
  else if (mode == "measured") sc.training.compute_mode = ComputeTimeMode::measured;
  else detail::config_fail(cfg, "training", "compute_time_mode",
                           "expected `fixed` or `measured`, got `" + mode + "`");
  sc.training.compute_s_per_iteration =
      cfg.get_double("training", "compute_s_per_iteration", 1e-3);
  if (!(sc.training.learning_rate > 0.0))
    detail::config_fail(cfg, "training", "learning_rate", "learning rate must be > 0");
  if (sc.training.batch_size < 1)
    detail::config_fail(cfg, "training", "batch_size", "batch size must be >= 1");
  if (sc.training.epochs < 1)
    detail::config_fail(cfg, "training", "epochs", "epochs must be >= 1");

  const std::string source = cfg.get_string("data", "source", "synthetic");
  if (source == "synthetic") sc.data.source = DataSource::synthetic;
  else if (source == "csv") sc.data.source = DataSource::csv;
  else detail::config_fail(cfg, "data", "source", "unknown data source `" + source + "`");
  sc.data.classes = static_cast<int>(cfg.get_u64("data", "classes", 10));
  sc.data.features = static_cast<int>(cfg.get_u64("data", "features", 16));
  sc.data.samples_per_node = cfg.get_u64("data", "samples_per_node", 1000);
  sc.data.cluster_std = cfg.get_double("data", "cluster_std", 0.6);
  sc.data.mean_range = cfg.get_double("data", "mean_range", 1.0);
  if (cfg.has("data", "seed")) sc.data.seed = cfg.get_u64("data", "seed");
  sc.data.eval_samples = cfg.get_u64("data", "eval_samples", 0);
  sc.data.label_column = static_cast<int>(cfg.get_u64("data", "label_column", 0));
  if (sc.data.source == DataSource::csv) {
    const std::filesystem::path ref = cfg.get_string("data", "file");
    const std::filesystem::path resolved = ref.is_absolute() ? ref : base / ref;
    if (!std::filesystem::exists(resolved))
      detail::config_fail(cfg, "data", "file",
                          "dataset file does not exist: " + resolved.string());
    sc.data.file = resolved.string();
  } else {
    if (sc.data.classes < 1 || sc.data.features < 1 || sc.data.samples_per_node < 1)
      detail::config_fail(cfg, "data", "classes",
                          "synthetic data needs positive classes/features/samples");
  }

  if (cfg.has("sweep", "lambda_targets")) {
    sc.sweep.lambda_targets = cfg.get_double_list("sweep", "lambda_targets");
    for (double lt : sc.sweep.lambda_targets)
      if (!(lt >= 0.0 && lt < 1.0))
        detail::config_fail(cfg, "sweep", "lambda_targets",
                            "every lambda target must lie in [0, 1)");
  }
  if (cfg.has("sweep", "epsilons")) {
    sc.sweep.epsilons = cfg.get_double_list("sweep", "epsilons");
    for (double e : sc.sweep.epsilons)
      if (!(e > 0.0))
        detail::config_fail(cfg, "sweep", "epsilons", "every epsilon must be > 0");
  }

  sc.bound.lipschitz = cfg.get_double("bound", "lipschitz", 1.0);
  sc.bound.variance = cfg.get_double("bound", "variance", 1.0);
  sc.bound.beta = cfg.get_double("bound", "beta", 0.0);
  sc.bound.learning_rate = cfg.get_double("bound", "learning_rate", 0.01);
  sc.bound.f_initial = cfg.get_double("bound", "f_initial", 1.0);
  sc.bound.f_inf = cfg.get_double("bound", "f_inf", 0.0);
  if (cfg.has("bound", "iterations")) {
    const double k = cfg.get_double("bound", "iterations");
    if (!std::isinf(k)) {
      if (!(k >= 1.0))
        detail::config_fail(cfg, "bound", "iterations", "iterations must be >= 1 or inf");
      sc.bound.iterations = static_cast<std::uint64_t>(k);
    }
  }
  sc.bound.node_count = cfg.get_u64("bound", "node_count", sc.layout.size());
  sc.bound_lambdas = cfg.has("bound", "lambdas") ? cfg.get_double_list("bound", "lambdas")
                                                 : detail::default_bound_lambdas();
  for (double lam : sc.bound_lambdas)
    if (!(lam >= 0.0 && lam < 1.0))
      detail::config_fail(cfg, "bound", "lambdas", "bound lambdas must lie in [0, 1)");

  sc.output_dir = cfg.get_string("output", "dir", "out");
  sc.accuracy_threshold = cfg.get_double("output", "accuracy_threshold", 0.8);
  if (!(sc.accuracy_threshold > 0.0 && sc.accuracy_threshold <= 1.0))
    detail::config_fail(cfg, "output", "accuracy_threshold",
                        "accuracy threshold must lie in (0, 1]");

  try {
    sc.radio.validate();
    sc.training.validate();
    sc.bound.validate();
  } catch (const DomainError& e) {
    throw ParseError(path, 0, e.what());
  }
  return sc;
}

// ---------------------------------------------------------------------------
// result emission
// ---------------------------------------------------------------------------

inline void write_trace_csv(const TrainingTrace& trace, const std::string& path,
                            bool eval_metrics = false) {
  if (eval_metrics && !trace.has_eval)
    throw ContractError("trace has no held-out metrics to write");
  CsvWriter out(path);
  out.comment(std::string("netdens trace") + (eval_metrics ? " (held-out split)" : ""));
  out.comment("seed = " + std::to_string(trace.seed));
  out.comment("t_com_s = " + format_number(trace.t_com_s));
  std::string order;
  for (std::size_t i = 0; i < trace.tdm_order.size(); ++i) {
    if (i) order += " ";
    order += std::to_string(trace.tdm_order[i]);
  }
  out.comment("tdm_order = " + order);
  out.row({"epoch", "node", "accuracy", "loss", "compute_s", "comm_s", "total_s"});
  for (const EpochRecord& rec : trace.epochs) {
    const auto& metrics = eval_metrics ? rec.eval : rec.train;
    for (std::size_t node = 0; node < metrics.size(); ++node)
      out.row({std::to_string(rec.epoch), std::to_string(node),
               format_number(metrics[node].accuracy), format_number(metrics[node].loss),
               format_number(rec.compute_s), format_number(rec.comm_s),
               format_number(rec.total_s())});
  }
}

inline void write_assignment_csv(const AssignmentReport& report, const std::string& path) {
  CsvWriter out(path);
  out.comment("netdens rate assignment");
  out.comment("lambda = " + format_number(report.lambda));
  out.comment("t_com_s = " + format_number(report.t_com_s));
  out.row({"node", "rate_bps", "degree", "reached"});
  for (const NodeRateReport& row : report.per_node) {
    std::string reached;
    for (std::size_t i = 0; i < row.reached.size(); ++i) {
      if (i) reached += "|";
      reached += std::to_string(row.reached[i]);
    }
    out.row({std::to_string(row.node), format_number(row.rate_bps),
             std::to_string(row.reached.size()), reached});
  }
}

inline nlohmann::json assignment_to_json(const AssignmentReport& report) {
  nlohmann::json j;
  j["lambda"] = report.lambda;
  j["t_com_s"] = report.t_com_s;
  j["nodes"] = nlohmann::json::array();
  for (const NodeRateReport& row : report.per_node) {
    nlohmann::json node;
    node["node"] = row.node;
    node["rate_bps"] = row.rate_bps;
    node["reached"] = row.reached;
    j["nodes"].push_back(node);
  }
  return j;
}

inline void emit_bound_sweep(const BoundParams& params, const std::vector<double>& lambdas,
                             const std::string& path) {
  if (lambdas.empty()) throw DomainError("bound sweep needs at least one lambda");
  const auto rows = lambda_sweep(params, lambdas);
  CsvWriter out(path);
  out.comment("netdens bound sweep");
  out.row({"lambda", "total", "sync", "network"});
  for (const BoundSweepRow& row : rows)
    out.row({format_number(row.lambda), format_number(row.total),
             format_number(row.sync_term), format_number(row.network_term)});
}

inline void write_channel_csv(const NodeLayout& layout, const ChannelMatrix& channels,
                              const std::string& path) {
  CsvWriter out(path);
  out.comment("netdens channel capacities");
  out.row({"i", "j", "distance_m", "capacity_bps", "effective_bps"});
  for (std::size_t i = 0; i < channels.size(); ++i)
    for (std::size_t j = 0; j < channels.size(); ++j) {
      if (i == j) continue;
      out.row({std::to_string(i), std::to_string(j),
               format_number(layout.distance(i, j)),
               format_number(channels.capacity(i, j)),
               format_number(channels.effective(i, j))});
    }
}

// ---------------------------------------------------------------------------
// plan execution
// ---------------------------------------------------------------------------

enum class PlanMode { optimize_only, full };

struct CellResult {
  double lambda_target = 0.0;
  double epsilon = 0.0;
  bool feasible = false;
  double min_lambda = std::numeric_limits<double>::quiet_NaN();  // when infeasible
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double t_com_s = std::numeric_limits<double>::quiet_NaN();
  double time_to_threshold_s = std::numeric_limits<double>::quiet_NaN();
  double final_accuracy_node1 = std::numeric_limits<double>::quiet_NaN();
  std::optional<TrainingTrace> trace;
  std::optional<RateAssignment> assignment;
};

struct PlanResult {
  std::vector<CellResult> cells;
  std::vector<std::string> files;
};

// First modeled time at which Node 1 (node index 0) reaches the accuracy
// threshold, interpolated linearly in cumulative time between epoch
// boundaries (the initial model anchors time zero). NaN when never reached.
inline double time_to_threshold_s(const TrainingTrace& trace, double threshold) {
  double prev_time = 0.0;
  double prev_acc = trace.initial.empty() ? 0.0 : trace.initial[0].accuracy;
  if (prev_acc >= threshold) return 0.0;
  for (const EpochRecord& rec : trace.epochs) {
    const double acc = rec.train[0].accuracy;
    const double time = rec.total_s();
    if (acc >= threshold)
      return prev_time + (time - prev_time) * (threshold - prev_acc) / (acc - prev_acc);
    prev_time = time;
    prev_acc = acc;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

namespace detail {

inline Dataset build_dataset(const ScenarioConfig& sc, bool eval_split) {
  if (sc.data.source == DataSource::csv) {
    if (eval_split) throw ContractError("csv datasets have no synthetic eval split");
    return load_csv_dataset(sc.data.file, sc.data.label_column);
  }
  SyntheticSpec spec;
  spec.classes = sc.data.classes;
  spec.features = sc.data.features;
  spec.samples = eval_split
                     ? sc.data.eval_samples
                     : sc.data.samples_per_node * sc.layout.size();
  spec.cluster_std = sc.data.cluster_std;
  spec.mean_range = sc.data.mean_range;
  // The eval split shares the class means (same base seed) but draws its own
  // noise; offsetting the stream tag keeps the two sample sets disjoint.
  spec.seed = sc.data.seed.value_or(sc.training.seed) + (eval_split ? 1 : 0);
  return make_synthetic(spec);
}

inline std::string cell_suffix(double lambda_target, double epsilon) {
  return "_lt" + format_number(lambda_target) + "_eps" + format_number(epsilon);
}

inline nlohmann::json config_to_json(const ScenarioConfig& sc) {
  nlohmann::json j;
  for (const Node& n : sc.layout.nodes())
    j["layout"]["nodes"].push_back({{"id", n.id}, {"x", n.x}, {"y", n.y}});
  j["radio"] = {{"tx_power_dbm", sc.radio.tx_power_dbm},
                {"bandwidth_hz", sc.radio.bandwidth_hz},
                {"noise_density_dbm_hz", sc.radio.noise_density_dbm_hz},
                {"path_loss_index", sc.radio.path_loss_index},
                {"fading_margin_bps", sc.radio.fading_margin_bps}};
  j["optimizer"] = {{"lambda_target", sc.optimizer.lambda_target},
                    {"model_bits", sc.optimizer.model_bits},
                    {"allow_isolation", sc.optimizer.allow_isolation},
                    {"mutual_links", sc.optimizer.mutual_links}};
  j["training"] = {{"learning_rate", sc.training.learning_rate},
                   {"batch_size", sc.training.batch_size},
                   {"iterations_per_epoch", sc.training.iterations_per_epoch},
                   {"epochs", sc.training.epochs},
                   {"seed", sc.training.seed},
                   {"loss", sc.training.loss == LossKind::cross_entropy
                                ? "cross_entropy"
                                : "squared_error"},
                   {"compute_time_mode",
                    sc.training.compute_mode == ComputeTimeMode::fixed ? "fixed"
                                                                       : "measured"},
                   {"compute_s_per_iteration", sc.training.compute_s_per_iteration}};
  j["training"]["model"] =
      sc.training.model.kind == ModelKind::logistic_regression ? "logistic_regression"
                                                               : "mlp";
  if (sc.training.model.kind == ModelKind::mlp)
    j["training"]["hidden"] = sc.training.model.hidden;
  j["data"]["source"] = sc.data.source == DataSource::synthetic ? "synthetic" : "csv";
  if (sc.data.source == DataSource::synthetic) {
    j["data"]["classes"] = sc.data.classes;
    j["data"]["features"] = sc.data.features;
    j["data"]["samples_per_node"] = sc.data.samples_per_node;
    j["data"]["cluster_std"] = sc.data.cluster_std;
    j["data"]["mean_range"] = sc.data.mean_range;
    j["data"]["eval_samples"] = sc.data.eval_samples;
  } else {
    j["data"]["file"] = sc.data.file;
    j["data"]["label_column"] = sc.data.label_column;
  }
  j["sweep"] = {{"lambda_targets", sc.sweep.lambda_targets},
                {"epsilons", sc.sweep.epsilons}};
  j["output"] = {{"dir", sc.output_dir},
                 {"accuracy_threshold", sc.accuracy_threshold}};
  return j;
}

}  // namespace detail

// Runs the (lambda_target x epsilon) grid: per cell a rate assignment, an
// optional training trace, and a summary row. Infeasible cells are recorded
// and the plan continues. All emitted CSV bodies are deterministic for a
// fixed config and seed.
inline PlanResult run_plan(const ScenarioConfig& sc, PlanMode mode = PlanMode::full) {
  namespace fs = std::filesystem;
  fs::create_directories(sc.output_dir);

  std::vector<double> lambda_targets = sc.sweep.lambda_targets;
  if (lambda_targets.empty()) lambda_targets = {sc.optimizer.lambda_target};
  std::vector<double> epsilons = sc.sweep.epsilons;
  if (epsilons.empty()) epsilons = {sc.radio.path_loss_index};

  Dataset data;
  std::optional<Dataset> eval_data;
  std::uint64_t model_bits = sc.optimizer.model_bits;
  if (mode == PlanMode::full) {
    data = detail::build_dataset(sc, false);
    if (sc.data.source == DataSource::synthetic && sc.data.eval_samples > 0)
      eval_data = detail::build_dataset(sc, true);
    if (model_bits == 0) {
      // One 32-bit word per parameter.
      model_bits = 32ull * static_cast<std::uint64_t>(model_dimension(
                               sc.training.model, data.feature_dim(), data.num_classes));
    }
  } else if (model_bits == 0) {
    if (sc.data.source == DataSource::synthetic) {
      model_bits = 32ull * static_cast<std::uint64_t>(model_dimension(
                               sc.training.model, sc.data.features, sc.data.classes));
    } else {
      const Dataset probe = detail::build_dataset(sc, false);
      model_bits = 32ull * static_cast<std::uint64_t>(model_dimension(
                               sc.training.model, probe.feature_dim(), probe.num_classes));
    }
  }

  PlanResult result;
  for (double eps : epsilons) {
    RadioParams radio = sc.radio;
    radio.path_loss_index = eps;
    const ChannelMatrix channels = build_channel_matrix(sc.layout, radio);
    for (double lt : lambda_targets) {
      CellResult cell;
      cell.lambda_target = lt;
      cell.epsilon = eps;

      OptimizerConfig opt = sc.optimizer;
      opt.lambda_target = lt;
      opt.model_bits = model_bits;
      try {
        cell.assignment = optimize_rates(channels, opt);
      } catch (const InfeasibleError& e) {
        cell.feasible = false;
        cell.min_lambda = e.min_lambda();
        result.cells.push_back(std::move(cell));
        continue;
      }
      cell.feasible = true;
      cell.lambda = cell.assignment->lambda;
      cell.t_com_s = cell.assignment->t_com_s;

      const std::string suffix = detail::cell_suffix(lt, eps);
      const AssignmentReport report = assignment_report(*cell.assignment);
      const std::string assignment_path =
          (fs::path(sc.output_dir) / ("assignment" + suffix + ".csv")).string();
      write_assignment_csv(report, assignment_path);
      result.files.push_back(assignment_path);
      const std::string assignment_json_path =
          (fs::path(sc.output_dir) / ("assignment" + suffix + ".json")).string();
      {
        std::ofstream jout(assignment_json_path);
        jout << assignment_to_json(report).dump(2) << "\n";
      }
      result.files.push_back(assignment_json_path);

      if (mode == PlanMode::full) {
        cell.trace = train(sc.layout, *cell.assignment, sc.training, data,
                           eval_data ? &*eval_data : nullptr);
        const std::string trace_path =
            (fs::path(sc.output_dir) / ("trace" + suffix + ".csv")).string();
        write_trace_csv(*cell.trace, trace_path);
        result.files.push_back(trace_path);
        if (cell.trace->has_eval) {
          const std::string eval_path =
              (fs::path(sc.output_dir) / ("trace_eval" + suffix + ".csv")).string();
          write_trace_csv(*cell.trace, eval_path, /*eval_metrics=*/true);
          result.files.push_back(eval_path);
        }
        cell.time_to_threshold_s = time_to_threshold_s(*cell.trace, sc.accuracy_threshold);
        cell.final_accuracy_node1 = cell.trace->epochs.back().train[0].accuracy;
      }
      result.cells.push_back(std::move(cell));
    }
  }

  // summary
  const std::string summary_path = (fs::path(sc.output_dir) / "summary.csv").string();
  {
    CsvWriter out(summary_path);
    out.comment("netdens summary");
    out.comment("accuracy_threshold = " + format_number(sc.accuracy_threshold));
    out.row({"lambda_target", "epsilon", "status", "lambda", "t_com_s",
             "time_to_accuracy_s", "final_accuracy_node1"});
    for (const CellResult& cell : result.cells) {
      if (cell.feasible) {
        out.row({format_number(cell.lambda_target), format_number(cell.epsilon), "ok",
                 format_number(cell.lambda), format_number(cell.t_com_s),
                 format_number(cell.time_to_threshold_s),
                 format_number(cell.final_accuracy_node1)});
      } else {
        out.row({format_number(cell.lambda_target), format_number(cell.epsilon),
                 "infeasible", format_number(cell.min_lambda), "nan", "nan", "nan"});
      }
    }
  }
  result.files.push_back(summary_path);

  // manifest: config echo, versions, seeds; no timestamps so reruns are
  // byte-identical
  const std::string manifest_path = (fs::path(sc.output_dir) / "manifest.json").string();
  {
    nlohmann::json manifest;
    manifest["tool"] = "netdens";
    manifest["version"] = version();
    manifest["seed"] = sc.training.seed;
    manifest["data_seed"] = sc.data.seed.value_or(sc.training.seed);
    manifest["model_bits"] = model_bits;
    manifest["mode"] = mode == PlanMode::full ? "full" : "optimize_only";
    manifest["config"] = detail::config_to_json(sc);
    manifest["tdm_order"] = sc.layout.tdm_order();
    manifest["files"] = result.files;
    std::ofstream mout(manifest_path);
    mout << manifest.dump(2) << "\n";
  }
  result.files.push_back(manifest_path);
  return result;
}

}  // namespace netdens
