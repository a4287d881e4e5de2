#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "netdens/netdens.hpp"

using namespace netdens;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("netdens_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path);
  out << body;
  return path.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kMinimalConfig = R"(
[layout]
node = 0 0 0
node = 1 50 0
node = 2 25 40

[training]
epochs = 1
iterations_per_epoch = 20
seed = 3

[data]
source = synthetic
classes = 3
features = 4
samples_per_node = 60
)";

}  // namespace

TEST_CASE("minimal config picks up the documented defaults") {
  const fs::path dir = temp_dir("minimal");
  const std::string path = write_file(dir / "min.cfg", kMinimalConfig);
  const ScenarioConfig sc = load_scenario(path);
  CHECK(sc.layout.size() == 3);
  CHECK(sc.radio.fading_margin_bps == 0.0);        // default margin
  CHECK(sc.training.batch_size == 1);              // default batch
  CHECK(sc.optimizer.mutual_links == false);       // default mode
  CHECK(sc.optimizer.model_bits == 0);             // derive from the model
  CHECK(sc.accuracy_threshold == 0.8);
  CHECK(sc.sweep.lambda_targets.empty());
  CHECK(sc.sweep.epsilons.empty());
  CHECK(sc.bound_lambdas.size() == 100);
}

TEST_CASE("epsilon list parses into a four-point sweep") {
  const fs::path dir = temp_dir("eps");
  const std::string path = write_file(dir / "eps.cfg", std::string(kMinimalConfig) +
                                                           "\n[sweep]\nepsilons = 3 4 5 6\n");
  const ScenarioConfig sc = load_scenario(path);
  CHECK(sc.sweep.epsilons == std::vector<double>{3.0, 4.0, 5.0, 6.0});
}

TEST_CASE("invalid configs are rejected with the violated rule named") {
  const fs::path dir = temp_dir("bad");

  SECTION("negative bandwidth") {
    const std::string path = write_file(
        dir / "a.cfg", std::string(kMinimalConfig) + "\n[radio]\nbandwidth_hz = -5\n");
    try {
      load_scenario(path);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("bandwidth must be > 0") != std::string::npos);
      CHECK(e.line() > 0);
    }
  }

  SECTION("unknown key") {
    const std::string path = write_file(
        dir / "b.cfg", std::string(kMinimalConfig) + "\n[radio]\nbandwith = 5\n");
    CHECK_THROWS_AS(load_scenario(path), ParseError);
  }

  SECTION("missing layout") {
    const std::string path = write_file(dir / "c.cfg", "[radio]\npath_loss_index = 3\n");
    CHECK_THROWS_AS(load_scenario(path), ParseError);
  }

  SECTION("malformed node line") {
    const std::string path =
        write_file(dir / "d.cfg", "[layout]\nnode = 0 only\n");
    CHECK_THROWS_AS(load_scenario(path), ParseError);
  }

  SECTION("nonexistent layout file") {
    const std::string path =
        write_file(dir / "e.cfg", "[layout]\nfile = nowhere.csv\n");
    CHECK_THROWS_AS(load_scenario(path), ParseError);
  }

  SECTION("lambda target out of range") {
    const std::string path = write_file(
        dir / "f.cfg",
        std::string(kMinimalConfig) + "\n[optimizer]\nlambda_target = 1.5\n");
    CHECK_THROWS_AS(load_scenario(path), ParseError);
  }
}

TEST_CASE("layout csv round-trips") {
  const fs::path dir = temp_dir("layout");
  const NodeLayout layout = example_layout6();
  const std::string path = (dir / "layout.csv").string();
  save_layout_csv(layout, path);
  const NodeLayout loaded = load_layout_csv(path);
  REQUIRE(loaded.size() == layout.size());
  for (std::size_t i = 0; i < layout.size(); ++i) {
    CHECK(loaded.node(i).x == layout.node(i).x);
    CHECK(loaded.node(i).y == layout.node(i).y);
  }
}

TEST_CASE("single-cell plan emits assignment, trace, summary and manifest") {
  const fs::path dir = temp_dir("plan1");
  const std::string path = write_file(dir / "plan.cfg", kMinimalConfig);
  ScenarioConfig sc = load_scenario(path);
  sc.output_dir = (dir / "out").string();

  const PlanResult result = run_plan(sc);
  REQUIRE(result.cells.size() == 1);
  CHECK(result.cells[0].feasible);
  CHECK(result.cells[0].lambda <= sc.optimizer.lambda_target + 1e-9);

  bool has_assignment = false, has_trace = false, has_summary = false,
       has_manifest = false;
  for (const std::string& f : result.files) {
    CHECK(fs::exists(f));
    if (f.find("assignment") != std::string::npos && f.ends_with(".csv"))
      has_assignment = true;
    if (f.find("trace") != std::string::npos) has_trace = true;
    if (f.ends_with("summary.csv")) has_summary = true;
    if (f.ends_with("manifest.json")) has_manifest = true;
  }
  CHECK(has_assignment);
  CHECK(has_trace);
  CHECK(has_summary);
  CHECK(has_manifest);

  // emitted files parse back with our own readers
  for (const std::string& f : result.files) {
    if (f.ends_with(".csv")) {
      const CsvTable table = read_csv(f);
      CHECK_FALSE(table.header.empty());
      CHECK_FALSE(table.rows.empty());
    }
  }
  const CsvTable summary = read_csv((fs::path(sc.output_dir) / "summary.csv").string());
  CHECK(summary.number_at(0, "lambda") <= sc.optimizer.lambda_target + 1e-9);
  CHECK(summary.number_at(0, "t_com_s") > 0.0);
}

TEST_CASE("plans rerun byte-identically under one seed") {
  const fs::path dir = temp_dir("rerun");
  const std::string path = write_file(dir / "plan.cfg", kMinimalConfig);
  ScenarioConfig sc = load_scenario(path);

  sc.output_dir = (dir / "a").string();
  const PlanResult first = run_plan(sc);
  sc.output_dir = (dir / "b").string();
  const PlanResult second = run_plan(sc);
  REQUIRE(first.files.size() == second.files.size());
  for (std::size_t i = 0; i < first.files.size(); ++i) {
    if (!first.files[i].ends_with(".csv")) continue;
    CHECK(slurp(first.files[i]) == slurp(second.files[i]));
  }
}

TEST_CASE("infeasible cells are recorded and the plan continues") {
  const fs::path dir = temp_dir("infeasible");
  // margin kills the cross-pair links: lambda cannot go below 1
  const char* body = R"(
[layout]
node = 0 0 0
node = 1 2 0
node = 2 5000 0
node = 3 5002 0

[radio]
path_loss_index = 4
fading_margin_bps = 2e5

[optimizer]
lambda_target = 0.5

[training]
epochs = 1
iterations_per_epoch = 5
seed = 3

[data]
source = synthetic
classes = 2
features = 3
samples_per_node = 30

[sweep]
lambda_targets = 0.5 0.95
)";
  const std::string path = write_file(dir / "plan.cfg", body);
  ScenarioConfig sc = load_scenario(path);
  sc.output_dir = (dir / "out").string();
  const PlanResult result = run_plan(sc);
  REQUIRE(result.cells.size() == 2);
  CHECK_FALSE(result.cells[0].feasible);
  CHECK(result.cells[0].min_lambda > 0.95);
  CHECK_FALSE(result.cells[1].feasible);

  const CsvTable summary = read_csv((fs::path(sc.output_dir) / "summary.csv").string());
  REQUIRE(summary.rows.size() == 2);
  CHECK(summary.rows[0][2] == "infeasible");
}

TEST_CASE("bound sweep file reproduces the curve shapes") {
  const fs::path dir = temp_dir("bound");
  BoundParams params;
  params.node_count = 6;  // K unset: infinity

  SECTION("100-point sweep with increasing totals") {
    std::vector<double> lambdas;
    for (int i = 0; i < 100; ++i) lambdas.push_back(static_cast<double>(i) / 100.0);
    const std::string path = (dir / "bound.csv").string();
    emit_bound_sweep(params, lambdas, path);
    const CsvTable table = read_csv(path);
    REQUIRE(table.rows.size() == 100);
    CHECK(table.header == std::vector<std::string>{"lambda", "total", "sync", "network"});
    for (std::size_t i = 1; i < table.rows.size(); ++i)
      CHECK(table.number_at(i, "total") > table.number_at(i - 1, "total"));
  }

  SECTION("larger n lowers the synchronized term") {
    BoundParams p20 = params;
    p20.node_count = 20;
    const std::string p6_path = (dir / "n6.csv").string();
    const std::string p20_path = (dir / "n20.csv").string();
    emit_bound_sweep(params, {0.5}, p6_path);
    emit_bound_sweep(p20, {0.5}, p20_path);
    CHECK(read_csv(p20_path).number_at(0, "sync") < read_csv(p6_path).number_at(0, "sync"));
  }

  SECTION("empty lambda list is rejected") {
    CHECK_THROWS_AS(emit_bound_sweep(params, {}, (dir / "x.csv").string()), DomainError);
  }
}

TEST_CASE("time to threshold interpolates between epoch boundaries") {
  TrainingTrace trace;
  trace.initial = {NodeMetrics{0.1, 1.0}};
  EpochRecord e1;
  e1.epoch = 1;
  e1.train = {NodeMetrics{0.5, 0.5}};
  e1.compute_s = 1.0;
  e1.comm_s = 1.0;  // total 2.0
  EpochRecord e2;
  e2.epoch = 2;
  e2.train = {NodeMetrics{0.9, 0.2}};
  e2.compute_s = 2.0;
  e2.comm_s = 2.0;  // total 4.0
  trace.epochs = {e1, e2};

  // crossing 0.8 happens inside epoch 2: 2 + 2 * (0.8-0.5)/(0.9-0.5) = 3.5
  CHECK(time_to_threshold_s(trace, 0.8) == Catch::Approx(3.5).epsilon(1e-12));
  // crossing 0.3 happens inside epoch 1: 0 + 2 * (0.3-0.1)/(0.5-0.1) = 1.0
  CHECK(time_to_threshold_s(trace, 0.3) == Catch::Approx(1.0).epsilon(1e-12));
  // already above at time zero
  CHECK(time_to_threshold_s(trace, 0.05) == 0.0);
  // never reached
  CHECK(std::isnan(time_to_threshold_s(trace, 0.95)));
}

TEST_CASE("dataset csv loader handles headers, labels and errors") {
  const fs::path dir = temp_dir("csvdata");

  SECTION("header row plus integer labels") {
    const std::string path = write_file(dir / "d.csv",
                                        "label,f1,f2\n"
                                        "0,1.0,2.0\n"
                                        "1,3.0,4.0\n"
                                        "1,5.0,6.0\n");
    const Dataset d = load_csv_dataset(path, 0);
    CHECK(d.size() == 3);
    CHECK(d.feature_dim() == 2);
    CHECK(d.num_classes == 2);
    CHECK(d.features(2, 1) == 6.0);
  }

  SECTION("label column out of range") {
    const std::string path = write_file(dir / "e.csv", "0,1.0\n1,2.0\n");
    CHECK_THROWS_AS(load_csv_dataset(path, 5), ParseError);
  }

  SECTION("ragged rows are rejected") {
    const std::string path = write_file(dir / "f.csv", "0,1.0,2.0\n1,3.0\n");
    CHECK_THROWS_AS(load_csv_dataset(path, 0), ParseError);
  }
}

TEST_CASE("eval split adds the held-out trace file") {
  const fs::path dir = temp_dir("eval");
  const std::string path = write_file(
      dir / "plan.cfg", std::string(kMinimalConfig) + "\n[data]\neval_samples = 90\n");
  ScenarioConfig sc = load_scenario(path);
  sc.output_dir = (dir / "out").string();
  const PlanResult result = run_plan(sc);
  bool has_eval_trace = false;
  for (const std::string& f : result.files)
    if (f.find("trace_eval") != std::string::npos) has_eval_trace = true;
  CHECK(has_eval_trace);
  REQUIRE(result.cells[0].trace.has_value());
  CHECK(result.cells[0].trace->has_eval);
  CHECK(result.cells[0].trace->epochs[0].eval.size() == 3);
}
