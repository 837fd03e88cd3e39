#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "saddle/experiment.hpp"
#include "saddle/scenario.hpp"

namespace {

saddle::CommMode resolve_mode(const CLI::App* sub, const std::string& flag,
                              const saddle::ScenarioSpec& spec) {
  if (sub->count("--mode") == 0) return spec.params.mode;
  return (flag == "continuous") ? saddle::CommMode::continuous
                                : saddle::CommMode::event_triggered;
}

void print_header(const saddle::ScenarioSpec& spec) {
  std::cout << "scenario " << spec.name << ": " << spec.agent_count() << " agents, "
            << spec.constraint_rows() << " constraint row(s), hash "
            << saddle::scenario_hash(spec) << "\n";
  std::cout << "  K_f = " << spec.K_f << ", K_g = " << spec.K_g
            << ", K_mu = " << spec.params.K_mu << (spec.k_mu_auto ? " (auto)" : "")
            << ", T = " << spec.horizon << ", h = " << spec.step << "\n";
  for (const auto& w : spec.warnings) std::cerr << "warning: " << w << "\n";
}

void print_metrics(const char* label, const saddle::ExperimentResult& r) {
  const auto& m = r.metrics;
  std::cout << "  " << label << ": final regret " << m.final_regret
            << " (guarantee " << m.regret_bound[0] << "), final fit " << m.final_fit
            << " (guarantee " << m.fit_bound[m.fit_bound.size() - 1]
            << "), broadcasts " << r.trajectory.broadcasts << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed projected saddle-point flow simulator for multi-agent "
               "online optimization under coupled time-varying constraints"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string mode_flag = "continuous";
  std::string plot_flag = "on";
  std::uint64_t seed = 42;
  std::string out_dir = "out";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("scenario", scenario_path, "scenario file (JSON)")->required();
    sub->add_option("--seed", seed, "initial-state seed (default 42)");
    sub->add_option("--out", out_dir, "output directory (default ./out)");
    sub->add_option("--plot", plot_flag, "emit SVG plots")
        ->check(CLI::IsMember({"on", "off"}));
  };

  CLI::App* validate = app.add_subcommand("validate", "load and check a scenario");
  validate->add_option("scenario", scenario_path, "scenario file (JSON)")->required();

  CLI::App* run_cmd = app.add_subcommand("run", "simulate one communication mode");
  add_common(run_cmd);
  run_cmd->add_option("--mode", mode_flag, "communication mode")
      ->check(CLI::IsMember({"continuous", "event"}));

  CLI::App* compare = app.add_subcommand("compare", "run both modes on one seed");
  add_common(compare);

  CLI::App* sweep = app.add_subcommand("sweep", "event-mode sigma sweep");
  add_common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const saddle::ScenarioSpec spec = saddle::load_scenario(scenario_path);
    print_header(spec);
    if (validate->parsed()) {
      std::cout << "  valid\n";
      return 0;
    }

    saddle::ExperimentOptions opt;
    opt.seed = seed;
    opt.out_dir = out_dir;
    opt.plots = (plot_flag == "on");

    if (run_cmd->parsed()) {
      const saddle::CommMode mode = resolve_mode(run_cmd, mode_flag, spec);
      const auto result = saddle::run_experiment(spec, mode, opt);
      print_metrics(mode == saddle::CommMode::continuous ? "continuous" : "event",
                    result);
      std::cout << "  wrote " << out_dir << "\n";
    } else if (compare->parsed()) {
      const auto cmp = saddle::compare_modes(spec, opt);
      print_metrics("continuous", cmp.continuous_run);
      print_metrics("event", cmp.triggered_run);
      std::cout << "  broadcast ratio (event/continuous): " << cmp.savings_ratio
                << "\n  wrote " << out_dir << "\n";
    } else if (sweep->parsed()) {
      saddle::sweep_sigma(spec, opt);
      std::cout << "  wrote " << out_dir << "/sweep.csv\n";
    }
    return 0;
  } catch (const saddle::ScenarioError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
