// quasistat: sample, plan and verify quasi-static equilibrium manifolds.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "quasistat/commands.hpp"

using namespace quasistat;

int main(int argc, char** argv) {
  CLI::App app{"Quasi-static equilibrium sampling and multi-branch planning"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::string> grid;
  bool diagonals = false;
  std::optional<double> switch_penalty;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--grid", grid, "bottom grid resolution, NxM");
  app.add_flag("--diagonals", diagonals, "connect diagonal grid neighbours");
  app.add_option("--switch-penalty", switch_penalty, "extra cost per branch switch");

  auto* sample = app.add_subcommand("sample", "solve every fiber of the grid");
  auto* plan = app.add_subcommand("plan", "shortest multi-branch path between two controls");
  auto* analytic = app.add_subcommand("pendulum-analytic", "closed-form optimal pendulum curve");
  auto* check = app.add_subcommand("check", "derivative and metric verification table");
  auto* exporter = app.add_subcommand("export-graph", "write the lifted top graph");
  for (auto* sub : {sample, plan, analytic, check, exporter}) sub->fallthrough();

  std::string start_text;
  std::string goal_text;
  plan->add_option("--start", start_text, "ux,uy[,alpha]")->required();
  plan->add_option("--goal", goal_text, "ux,uy[,alpha]")->required();

  std::optional<double> alpha1, alpha2, lambda1, lambda2;
  std::optional<int> samples;
  analytic->add_option("--alpha1", alpha1);
  analytic->add_option("--alpha2", alpha2);
  analytic->add_option("--lambda1", lambda1);
  analytic->add_option("--lambda2", lambda2);
  analytic->add_option("--samples", samples);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kValidationError;
  }

  RunConfig config;
  cli::Endpoint start;
  cli::Endpoint goal;
  try {
    if (!config_path.empty()) config = load_config(config_path);
    if (out_dir) config.out_dir = *out_dir;
    if (grid) config.grid = parse_grid(*grid);
    if (diagonals) config.diagonals = true;
    if (switch_penalty) config.switch_penalty = *switch_penalty;
    if (alpha1) config.alpha1 = *alpha1;
    if (alpha2) config.alpha2 = *alpha2;
    if (lambda1) config.lambda1 = *lambda1;
    if (lambda2) config.lambda2 = *lambda2;
    if (samples) config.samples = *samples;
    if (*plan) {
      start = cli::parse_endpoint(start_text);
      goal = cli::parse_endpoint(goal_text);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kValidationError;
  }

  if (*sample) return cli::cmd_sample(config, std::cerr);
  if (*plan) return cli::cmd_plan(config, start, goal, std::cerr);
  if (*analytic) return cli::cmd_pendulum_analytic(config, std::cerr);
  if (*check) return cli::cmd_check(config, std::cout);
  return cli::cmd_export_graph(config, std::cerr);
}
