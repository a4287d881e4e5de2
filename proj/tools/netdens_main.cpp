// Command-line front end: optimize / train / sweep / bound / channel.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netdens/netdens.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::vector<double> lambda_targets;
  std::vector<double> epsilons;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_lists = true) {
  cmd->add_option("--config", args.config_path, "scenario config file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out_dir, "output directory (overrides [output] dir)");
  cmd->add_option("--seed", args.seed, "seed override for training and data")
      ->each([&args](const std::string&) { args.seed_set = true; });
  if (with_lists) {
    cmd->add_option("--lambda-target", args.lambda_targets,
                    "lambda target list, comma separated (overrides [sweep])")
        ->delimiter(',');
    cmd->add_option("--epsilon", args.epsilons,
                    "path loss index list, comma separated (overrides [sweep])")
        ->delimiter(',');
  }
}

netdens::ScenarioConfig load_with_overrides(const CommonArgs& args) {
  netdens::ScenarioConfig sc = netdens::load_scenario(args.config_path);
  if (!args.out_dir.empty()) sc.output_dir = args.out_dir;
  if (args.seed_set) {
    sc.training.seed = args.seed;
    // data seed follows the training seed unless the config pinned one
  }
  if (!args.lambda_targets.empty()) {
    for (double lt : args.lambda_targets)
      if (!(lt >= 0.0 && lt < 1.0))
        throw netdens::DomainError("--lambda-target values must lie in [0, 1)");
    sc.sweep.lambda_targets = args.lambda_targets;
  }
  if (!args.epsilons.empty()) {
    for (double e : args.epsilons)
      if (!(e > 0.0)) throw netdens::DomainError("--epsilon values must be > 0");
    sc.sweep.epsilons = args.epsilons;
  }
  return sc;
}

void print_plan(const netdens::PlanResult& result) {
  for (const netdens::CellResult& cell : result.cells) {
    std::cout << "lambda_target=" << cell.lambda_target << " epsilon=" << cell.epsilon;
    if (!cell.feasible) {
      std::cout << "  INFEASIBLE (min achievable lambda " << cell.min_lambda << ")\n";
      continue;
    }
    std::cout << "  lambda=" << cell.lambda << "  t_com=" << cell.t_com_s << " s";
    if (cell.trace) {
      std::cout << "  final_acc(node1)=" << cell.final_accuracy_node1
                << "  time_to_threshold=" << cell.time_to_threshold_s << " s";
    }
    std::cout << "\n";
  }
  std::cout << result.files.size() << " files written\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"netdens: rate planning and training simulation for decentralized "
               "SGD over wireless networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", NETDENS_VERSION_STRING);

  CommonArgs optimize_args, train_args, sweep_args, bound_args, channel_args;

  CLI::App* optimize = app.add_subcommand(
      "optimize", "solve the rate assignment for each (lambda_target, epsilon) cell");
  add_common(optimize, optimize_args);

  CLI::App* train = app.add_subcommand(
      "train", "optimize rates and run one full training simulation");
  add_common(train, train_args);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "run the full (lambda_target x epsilon) grid with training");
  add_common(sweep, sweep_args);

  CLI::App* bound = app.add_subcommand(
      "bound", "emit the convergence-bound sweep over lambda");
  add_common(bound, bound_args, /*with_lists=*/false);

  CLI::App* channel = app.add_subcommand(
      "channel", "dump the pairwise channel-capacity matrix");
  add_common(channel, channel_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (optimize->parsed()) {
      const auto sc = load_with_overrides(optimize_args);
      print_plan(netdens::run_plan(sc, netdens::PlanMode::optimize_only));
    } else if (train->parsed()) {
      auto sc = load_with_overrides(train_args);
      if (sc.sweep.lambda_targets.size() > 1 || sc.sweep.epsilons.size() > 1)
        throw netdens::DomainError(
            "train runs a single cell; pass one --lambda-target and one --epsilon, "
            "or use `sweep`");
      if (sc.sweep.lambda_targets.size() == 1)
        sc.optimizer.lambda_target = sc.sweep.lambda_targets[0];
      if (sc.sweep.epsilons.size() == 1)
        sc.radio.path_loss_index = sc.sweep.epsilons[0];
      sc.sweep.lambda_targets.clear();
      sc.sweep.epsilons.clear();
      print_plan(netdens::run_plan(sc, netdens::PlanMode::full));
    } else if (sweep->parsed()) {
      const auto sc = load_with_overrides(sweep_args);
      print_plan(netdens::run_plan(sc, netdens::PlanMode::full));
    } else if (bound->parsed()) {
      const auto sc = load_with_overrides(bound_args);
      std::filesystem::create_directories(sc.output_dir);
      const std::string path =
          (std::filesystem::path(sc.output_dir) / "bound.csv").string();
      netdens::emit_bound_sweep(sc.bound, sc.bound_lambdas, path);
      std::cout << "bound sweep (" << sc.bound_lambdas.size() << " points) -> " << path
                << "\n";
    } else if (channel->parsed()) {
      const auto sc = load_with_overrides(channel_args);
      std::filesystem::create_directories(sc.output_dir);
      std::vector<double> epsilons = sc.sweep.epsilons;
      if (epsilons.empty()) epsilons = {sc.radio.path_loss_index};
      for (double eps : epsilons) {
        netdens::RadioParams radio = sc.radio;
        radio.path_loss_index = eps;
        const auto channels = netdens::build_channel_matrix(sc.layout, radio);
        const std::string path =
            (std::filesystem::path(sc.output_dir) /
             ("channel_eps" + netdens::format_number(eps) + ".csv"))
                .string();
        netdens::write_channel_csv(sc.layout, channels, path);
        std::cout << "channel matrix (epsilon=" << eps << ") -> " << path << "\n";
      }
    }
  } catch (const netdens::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
