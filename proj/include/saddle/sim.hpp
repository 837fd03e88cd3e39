#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "saddle/controller.hpp"
#include "saddle/scenario.hpp"

namespace saddle {

/// Everything recorded for one agent over the run. Row k holds the value at
/// time k*h. Recorded outputs are clamped to the agent's box; raw outputs keep
/// the plain C*x so the output-tracking identity can be checked downstream.
struct AgentTrack {
  Eigen::MatrixXd outputs;      // (steps+1) x p_i, clamped
  Eigen::MatrixXd raw_outputs;  // (steps+1) x p_i
  Eigen::MatrixXd multipliers;  // (steps+1) x q
  Eigen::MatrixXd primal_dirs;  // steps x p_i, the direction applied on step k
  std::vector<double> trigger_times;  // strictly increasing broadcast instants
};

struct Trajectory {
  Eigen::VectorXd times;  // steps+1 grid points
  std::vector<AgentTrack> agents;
  Eigen::MatrixXd aggregate_constraint;  // (steps+1) x q, sum_i g_i at clamped y
  Eigen::VectorXd instant_cost;          // total cost f(t, y(t)) at clamped y
  Eigen::VectorXd disagreement;          // sum_i sum_j a_ij ||mu_i - mu_j||_1
  CommMode mode = CommMode::continuous;
  double step = 0.0;
  long long broadcasts = 0;  // continuous: one per agent per step
};

struct MetricsReport {
  Eigen::VectorXd times;
  Eigen::VectorXd regret_curve;     // running cost gap against y*
  Eigen::VectorXd fit_curve;        // norm of the positive part of the integrals
  Eigen::MatrixXd fit_components;   // running per-row integrals, pre-projection
  Eigen::VectorXd regret_bound;     // guarantee right-hand side on the grid
  Eigen::VectorXd fit_bound;
  Eigen::VectorXd energy;           // (||y - y*||^2 + ||mu||^2) / 2
  std::vector<int> trigger_counts;
  std::vector<double> min_gaps;     // min inter-broadcast gap, +inf when < 2 events
  double y0_distance = 0.0;         // ||y(0) - y*||
  double final_regret = 0.0;
  double final_fit = 0.0;
};

struct ZenoStats {
  int count = 0;
  double min_gap = 0.0;   // 0 when fewer than two events
  double mean_gap = 0.0;
  bool saturated = false; // fired on every step: indistinguishable from continuous
};

// Integrates all agents' closed loops over the scenario horizon with
// synchronous-round snapshot semantics. The mode argument overrides the
// scenario's mode; the seed drives only the initial-state draw.
Trajectory run(const ScenarioSpec& spec, CommMode mode, std::uint64_t seed);

// Regret/fit integrals (trapezoid rule on the step grid) plus the guarantee
// overlays evaluated with the scenario constants.
MetricsReport compute_metrics(const Trajectory& traj, const Eigen::VectorXd& y_star,
                              const ScenarioSpec& spec);

// Inter-broadcast gap statistics per agent.
std::vector<ZenoStats> zeno_report(const Trajectory& traj);

}  // namespace saddle
