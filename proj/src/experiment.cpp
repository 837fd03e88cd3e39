#include "saddle/experiment.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "saddle/plot.hpp"

namespace saddle {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("experiment: cannot write " + path.string());
  return out;
}

void write_trajectory_csv(const fs::path& path, const Trajectory& traj,
                          const ScenarioSpec& spec) {
  auto out = open_out(path);
  out << "t";
  for (int i = 0; i < spec.agent_count(); ++i) {
    for (int k = 0; k < spec.agents[i].output_dim(); ++k) {
      out << ",y" << i << "_" << k;
    }
  }
  for (int i = 0; i < spec.agent_count(); ++i) {
    for (int j = 0; j < spec.constraint_rows(); ++j) out << ",mu" << i << "_" << j;
  }
  for (int j = 0; j < spec.constraint_rows(); ++j) out << ",g_agg_" << j;
  out << ",cost,disagreement\n";
  for (int row = 0; row < traj.times.size(); ++row) {
    out << num(traj.times[row]);
    for (const AgentTrack& a : traj.agents) {
      for (int k = 0; k < a.outputs.cols(); ++k) out << "," << num(a.outputs(row, k));
    }
    for (const AgentTrack& a : traj.agents) {
      for (int j = 0; j < a.multipliers.cols(); ++j) {
        out << "," << num(a.multipliers(row, j));
      }
    }
    for (int j = 0; j < traj.aggregate_constraint.cols(); ++j) {
      out << "," << num(traj.aggregate_constraint(row, j));
    }
    out << "," << num(traj.instant_cost[row]) << "," << num(traj.disagreement[row])
        << "\n";
  }
}

void write_metrics_csv(const fs::path& path, const MetricsReport& met) {
  auto out = open_out(path);
  out << "t,regret,fit";
  for (int j = 0; j < met.fit_components.cols(); ++j) out << ",fit_component_" << j;
  out << ",regret_guarantee,fit_guarantee,energy\n";
  for (int row = 0; row < met.times.size(); ++row) {
    out << num(met.times[row]) << "," << num(met.regret_curve[row]) << ","
        << num(met.fit_curve[row]);
    for (int j = 0; j < met.fit_components.cols(); ++j) {
      out << "," << num(met.fit_components(row, j));
    }
    out << "," << num(met.regret_bound[row]) << "," << num(met.fit_bound[row]) << ","
        << num(met.energy[row]) << "\n";
  }
}

void write_triggers_csv(const fs::path& path, const Trajectory& traj) {
  auto out = open_out(path);
  out << "agent,t\n";
  for (std::size_t i = 0; i < traj.agents.size(); ++i) {
    for (double t : traj.agents[i].trigger_times) {
      out << i << "," << num(t) << "\n";
    }
  }
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

void write_plots(const fs::path& dir, const Trajectory& traj, const MetricsReport& met) {
  std::vector<double> times = to_std(met.times);
  std::vector<double> fit_rate(times.size(), 0.0);
  for (std::size_t k = 1; k < times.size(); ++k) {
    fit_rate[k] = met.fit_curve[static_cast<int>(k)] / times[k];
  }
  write_line_plot((dir / "regret_fit.svg").string(),
                  "Running regret and constraint-fit rate", "time [s]", "value",
                  {{"regret", times, to_std(met.regret_curve), ""},
                   {"regret guarantee", times, to_std(met.regret_bound), ""},
                   {"fit / T", times, fit_rate, ""}});
  write_line_plot((dir / "fit.svg").string(), "Constraint fit and its guarantee",
                  "time [s]", "fit",
                  {{"fit", times, to_std(met.fit_curve), ""},
                   {"fit guarantee", times, to_std(met.fit_bound), ""}});
  if (traj.mode == CommMode::event_triggered) {
    std::vector<std::vector<double>> events;
    for (const AgentTrack& a : traj.agents) events.push_back(a.trigger_times);
    write_event_raster((dir / "triggers.svg").string(), "Broadcast instants", events,
                       traj.times[traj.times.size() - 1]);
  }
}

void write_manifest(const fs::path& dir, const ScenarioSpec& spec, CommMode mode,
                    const ExperimentOptions& opt, const std::vector<std::string>& files) {
  {
    auto out = open_out(dir / "scenario_echo.json");
    out << canonical_text(spec);
  }
  json m;
  m["name"] = spec.name;
  m["scenario_hash"] = scenario_hash(spec);
  m["scenario_file"] = "scenario_echo.json";
  m["seed"] = opt.seed;
  m["mode"] = (mode == CommMode::continuous) ? "continuous" : "event_triggered";
  m["params"] = {{"epsilon", spec.params.epsilon}, {"K_mu", spec.params.K_mu},
                 {"sigma", spec.params.sigma},     {"iota", spec.params.iota},
                 {"T", spec.horizon},              {"h", spec.step},
                 {"K_f", spec.K_f},                {"K_g", spec.K_g}};
  m["files"] = files;
  m["warnings"] = spec.warnings;
  auto out = open_out(dir / "manifest.json");
  out << m.dump(2) << "\n";
}

}  // namespace

SampledProgram scenario_program(const ScenarioSpec& spec) {
  std::vector<QuadraticCost> costs;
  std::vector<AffineConstraint> constraints;
  std::vector<BoxSet> boxes;
  for (const AgentSpec& a : spec.agents) {
    costs.push_back(a.cost);
    constraints.push_back(a.constraint);
    boxes.push_back(a.box);
  }
  const int samples =
      spec.oracle.samples == 0 ? spec.step_count() + 1 : spec.oracle.samples;
  return build_sampled_program(costs, constraints, boxes, spec.horizon, samples);
}

OracleResult clairvoyant_for(const ScenarioSpec& spec, const std::string& cache_dir) {
  const std::string hash = scenario_hash(spec);
  const fs::path cache_path =
      cache_dir.empty() ? fs::path() : fs::path(cache_dir) / ("oracle_" + hash + ".json");

  const SampledProgram prog = scenario_program(spec);
  if (!cache_path.empty() && fs::exists(cache_path)) {
    try {
      std::ifstream in(cache_path);
      json c = json::parse(in);
      if (c.at("scenario_hash").get<std::string>() == hash &&
          static_cast<int>(c.at("y_star").size()) == prog.dim()) {
        OracleResult r;
        r.y_star.resize(prog.dim());
        for (int k = 0; k < prog.dim(); ++k) r.y_star[k] = c.at("y_star")[k].get<double>();
        r.objective = c.at("objective").get<double>();
        r.max_violation = c.at("max_violation").get<double>();
        r.feasible = c.at("feasible").get<bool>();
        r.dual_certificate = Eigen::VectorXd::Zero(prog.rows());
        for (const json& pair : c.at("dual_nonzero")) {
          const int idx = pair.at(0).get<int>();
          if (idx >= 0 && idx < prog.rows()) r.dual_certificate[idx] = pair.at(1).get<double>();
        }
        return r;
      }
    } catch (const std::exception&) {
      // fall through to a fresh solve on any cache damage
    }
  }

  OracleResult r = solve_clairvoyant(prog, spec.oracle.iters, fnv1a64(canonical_text(spec)));
  if (!cache_path.empty()) {
    fs::create_directories(cache_path.parent_path());
    json c;
    c["scenario_hash"] = hash;
    c["y_star"] = json::array();
    for (int k = 0; k < r.y_star.size(); ++k) c["y_star"].push_back(r.y_star[k]);
    c["objective"] = r.objective;
    c["max_violation"] = r.max_violation;
    c["feasible"] = r.feasible;
    c["dual_nonzero"] = json::array();
    for (int k = 0; k < r.dual_certificate.size(); ++k) {
      if (r.dual_certificate[k] != 0.0) {
        c["dual_nonzero"].push_back(json::array({k, r.dual_certificate[k]}));
      }
    }
    auto out = open_out(cache_path);
    out << c.dump() << "\n";
  }
  return r;
}

ExperimentResult run_experiment(const ScenarioSpec& spec, CommMode mode,
                                const ExperimentOptions& opt) {
  fs::create_directories(opt.out_dir);
  ExperimentResult result;
  result.oracle = clairvoyant_for(spec, opt.out_dir);
  if (!result.oracle.feasible) {
    throw std::runtime_error(
        "experiment: clairvoyant program infeasible (max violation " +
        num(result.oracle.max_violation) + ")");
  }
  result.trajectory = run(spec, mode, opt.seed);
  result.metrics = compute_metrics(result.trajectory, result.oracle.y_star, spec);

  const fs::path dir(opt.out_dir);
  std::vector<std::string> files{"trajectory.csv", "metrics.csv"};
  write_trajectory_csv(dir / "trajectory.csv", result.trajectory, spec);
  write_metrics_csv(dir / "metrics.csv", result.metrics);
  if (mode == CommMode::event_triggered) {
    write_triggers_csv(dir / "triggers.csv", result.trajectory);
    files.push_back("triggers.csv");
  }
  if (opt.plots) {
    write_plots(dir, result.trajectory, result.metrics);
    files.push_back("regret_fit.svg");
    files.push_back("fit.svg");
    if (mode == CommMode::event_triggered) files.push_back("triggers.svg");
  }
  write_manifest(dir, spec, mode, opt, files);
  return result;
}

ModeComparison compare_modes(const ScenarioSpec& spec, const ExperimentOptions& opt) {
  ModeComparison cmp;
  // Solve the clairvoyant program once and seed both per-mode caches with it.
  fs::create_directories(opt.out_dir);
  clairvoyant_for(spec, opt.out_dir);
  const std::string cache_name = "oracle_" + scenario_hash(spec) + ".json";
  for (const char* sub_name : {"continuous", "event_triggered"}) {
    fs::create_directories(fs::path(opt.out_dir) / sub_name);
    fs::copy_file(fs::path(opt.out_dir) / cache_name,
                  fs::path(opt.out_dir) / sub_name / cache_name,
                  fs::copy_options::overwrite_existing);
  }
  ExperimentOptions sub = opt;
  sub.out_dir = (fs::path(opt.out_dir) / "continuous").string();
  cmp.continuous_run = run_experiment(spec, CommMode::continuous, sub);
  sub.out_dir = (fs::path(opt.out_dir) / "event_triggered").string();
  cmp.triggered_run = run_experiment(spec, CommMode::event_triggered, sub);

  const double denom = static_cast<double>(cmp.continuous_run.trajectory.broadcasts);
  cmp.savings_ratio =
      denom > 0.0 ? cmp.triggered_run.trajectory.broadcasts / denom : 0.0;

  auto out = open_out(fs::path(opt.out_dir) / "comparison.csv");
  out << "metric,continuous,event_triggered\n";
  out << "final_regret," << num(cmp.continuous_run.metrics.final_regret) << ","
      << num(cmp.triggered_run.metrics.final_regret) << "\n";
  out << "final_fit," << num(cmp.continuous_run.metrics.final_fit) << ","
      << num(cmp.triggered_run.metrics.final_fit) << "\n";
  out << "regret_guarantee," << num(cmp.continuous_run.metrics.regret_bound[0]) << ","
      << num(cmp.triggered_run.metrics.regret_bound[0]) << "\n";
  out << "broadcasts," << cmp.continuous_run.trajectory.broadcasts << ","
      << cmp.triggered_run.trajectory.broadcasts << "\n";
  out << "broadcast_ratio,1," << num(cmp.savings_ratio) << "\n";
  return cmp;
}

void sweep_sigma(const ScenarioSpec& spec, const ExperimentOptions& opt) {
  fs::create_directories(opt.out_dir);
  const OracleResult oracle = clairvoyant_for(spec, opt.out_dir);
  if (!oracle.feasible) {
    throw std::runtime_error("experiment: clairvoyant program infeasible");
  }
  auto out = open_out(fs::path(opt.out_dir) / "sweep.csv");
  out << "sigma,broadcasts,final_regret,final_fit,regret_guarantee,fit_guarantee\n";
  std::vector<double> sigmas, broadcasts;
  for (double factor : {0.2, 1.0, 4.0}) {
    ScenarioSpec variant = spec;
    variant.params.sigma = spec.params.sigma * factor;
    const Trajectory traj = run(variant, CommMode::event_triggered, opt.seed);
    const MetricsReport met = compute_metrics(traj, oracle.y_star, variant);
    out << num(variant.params.sigma) << "," << traj.broadcasts << ","
        << num(met.final_regret) << "," << num(met.final_fit) << ","
        << num(met.regret_bound[0]) << ","
        << num(met.fit_bound[met.fit_bound.size() - 1]) << "\n";
    sigmas.push_back(variant.params.sigma);
    broadcasts.push_back(static_cast<double>(traj.broadcasts));
  }
  if (opt.plots) {
    write_line_plot((fs::path(opt.out_dir) / "sweep.svg").string(),
                    "Broadcast count against trigger offset", "sigma", "broadcasts",
                    {{"broadcasts", sigmas, broadcasts, ""}});
  }
}

}  // namespace saddle
