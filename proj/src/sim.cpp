#include "saddle/sim.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "saddle/plant.hpp"

namespace saddle {

namespace {

// Gathers the values neighbors of i expose, in neighbor-list order.
std::vector<Eigen::VectorXd> gather(const std::vector<Eigen::VectorXd>& all,
                                    const std::vector<int>& neighbors) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(neighbors.size());
  for (int j : neighbors) out.push_back(all[j]);
  return out;
}

double total_disagreement(const CommGraph& g, const std::vector<Eigen::VectorXd>& mus) {
  double total = 0.0;
  for (int i = 0; i < g.node_count; ++i) {
    for (int j : g.neighbors[i]) total += (mus[i] - mus[j]).lpNorm<1>();
  }
  return total;
}

}  // namespace

Trajectory run(const ScenarioSpec& spec, CommMode mode, std::uint64_t seed) {
  const int n = spec.agent_count();
  const int q = spec.constraint_rows();
  const int steps = spec.step_count();
  const double h = spec.step;
  const AlgorithmParams& prm = spec.params;

  const std::vector<Eigen::VectorXd> x0 = draw_initial_states(spec, seed);
  std::vector<AgentPlant> plants;
  std::vector<GainPair> gains;
  plants.reserve(n);
  gains.reserve(n);
  for (int i = 0; i < n; ++i) {
    const AgentSpec& a = spec.agents[i];
    plants.push_back(make_plant(a.A, a.B, a.C, x0[i]));
    gains.push_back(synthesize_gains(plants.back()));
  }

  std::vector<MultiplierState> duals(n);
  for (int i = 0; i < n; ++i) {
    duals[i].mu = Eigen::VectorXd::Zero(q);
    duals[i].mu_hat = Eigen::VectorXd::Zero(q);
  }

  Trajectory traj;
  traj.mode = mode;
  traj.step = h;
  traj.times = Eigen::VectorXd::LinSpaced(steps + 1, 0.0, steps * h);
  traj.agents.resize(n);
  for (int i = 0; i < n; ++i) {
    const int p = spec.agents[i].output_dim();
    traj.agents[i].outputs.resize(steps + 1, p);
    traj.agents[i].raw_outputs.resize(steps + 1, p);
    traj.agents[i].multipliers.resize(steps + 1, q);
    traj.agents[i].primal_dirs.resize(steps, p);
  }
  traj.aggregate_constraint = Eigen::MatrixXd::Zero(steps + 1, q);
  traj.instant_cost = Eigen::VectorXd::Zero(steps + 1);
  traj.disagreement = Eigen::VectorXd::Zero(steps + 1);

  // Records row `row` and refreshes `clamped`, the box-projected outputs the
  // controllers read on the following step.
  std::vector<Eigen::VectorXd> clamped(n);
  auto record = [&](int row, double t) {
    double cost_total = 0.0;
    Eigen::VectorXd agg = Eigen::VectorXd::Zero(q);
    std::vector<Eigen::VectorXd> mus(n);
    for (int i = 0; i < n; ++i) {
      const AgentSpec& a = spec.agents[i];
      const Eigen::VectorXd raw = plants[i].output();
      clamped[i] = project_box(a.box, raw);
      traj.agents[i].raw_outputs.row(row) = raw.transpose();
      traj.agents[i].outputs.row(row) = clamped[i].transpose();
      traj.agents[i].multipliers.row(row) = duals[i].mu.transpose();
      cost_total += a.cost.value(t, clamped[i]);
      agg += a.constraint.value(t, clamped[i]);
      mus[i] = duals[i].mu;
    }
    traj.instant_cost[row] = cost_total;
    traj.aggregate_constraint.row(row) = agg.transpose();
    traj.disagreement[row] = total_disagreement(spec.graph, mus);
  };
  record(0, 0.0);

  std::vector<Eigen::VectorXd> snapshot(n);
  std::vector<Eigen::VectorXd> primal(n), dual_dir(n);
  std::vector<double> thresholds(n);
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;

    // Phase 1: immutable read snapshot of what agents expose this round.
    for (int i = 0; i < n; ++i) {
      snapshot[i] = (mode == CommMode::continuous) ? duals[i].mu : duals[i].mu_hat;
    }

    // Phase 2: direction computations against the snapshot.
    for (int i = 0; i < n; ++i) {
      const AgentSpec& a = spec.agents[i];
      const auto neighbor_vals = gather(snapshot, spec.graph.neighbors[i]);
      primal[i] = primal_direction(a.cost, a.constraint, a.box, prm.epsilon, t,
                                   clamped[i], duals[i].mu);
      if (mode == CommMode::continuous) {
        dual_dir[i] = dual_direction_continuous(a.constraint, prm.epsilon, prm.K_mu, t,
                                                clamped[i], duals[i].mu, neighbor_vals);
      } else {
        dual_dir[i] = dual_direction_triggered(a.constraint, prm.epsilon, prm.K_mu, t,
                                               clamped[i], duals[i].mu, snapshot[i],
                                               neighbor_vals);
      }
      traj.agents[i].primal_dirs.row(k) = primal[i].transpose();
    }

    // Phase 3: apply the Euler updates; multipliers get an exact orthant clamp.
    for (int i = 0; i < n; ++i) {
      step_state(plants[i], gains[i], primal[i], h);
      duals[i].mu = (duals[i].mu + h * dual_dir[i]).cwiseMax(0.0);
      if (!duals[i].mu.allFinite()) {
        throw std::runtime_error("sim: non-finite multiplier (numerical blow-up)");
      }
    }

    const double t_next = (k + 1) * h;
    // Phase 4: broadcast supervision at the step boundary. All decisions are
    // made against the pre-reset snapshot, then applied in index order.
    if (mode == CommMode::event_triggered) {
      for (int i = 0; i < n; ++i) {
        snapshot[i] = duals[i].mu_hat;
      }
      for (int i = 0; i < n; ++i) {
        thresholds[i] = trigger_threshold(
            t_next, snapshot[i], gather(snapshot, spec.graph.neighbors[i]), prm,
            spec.graph.node_count);
      }
      for (int i = 0; i < n; ++i) {
        if (maybe_trigger(duals[i], thresholds[i], t_next)) {
          traj.agents[i].trigger_times.push_back(t_next);
          ++traj.broadcasts;
        }
      }
    } else {
      traj.broadcasts += n;
    }

    record(k + 1, t_next);
  }
  return traj;
}

MetricsReport compute_metrics(const Trajectory& traj, const Eigen::VectorXd& y_star,
                              const ScenarioSpec& spec) {
  const int n = spec.agent_count();
  const int q = spec.constraint_rows();
  const int rows = static_cast<int>(traj.times.size());
  const double h = traj.step;
  if (y_star.size() != spec.total_output_dim()) {
    throw std::invalid_argument("metrics: clairvoyant output has the wrong dimension");
  }

  // Split y* into per-agent blocks and precompute its running cost.
  std::vector<Eigen::VectorXd> star(n);
  {
    int off = 0;
    for (int i = 0; i < n; ++i) {
      const int p = spec.agents[i].output_dim();
      star[i] = y_star.segment(off, p);
      off += p;
    }
  }

  MetricsReport rep;
  rep.times = traj.times;
  rep.regret_curve = Eigen::VectorXd::Zero(rows);
  rep.fit_curve = Eigen::VectorXd::Zero(rows);
  rep.fit_components = Eigen::MatrixXd::Zero(rows, q);
  rep.energy = Eigen::VectorXd::Zero(rows);

  Eigen::VectorXd gap(rows);  // instantaneous f(t, y(t)) - f(t, y*)
  for (int k = 0; k < rows; ++k) {
    const double t = traj.times[k];
    double fstar = 0.0;
    for (int i = 0; i < n; ++i) fstar += spec.agents[i].cost.value(t, star[i]);
    gap[k] = traj.instant_cost[k] - fstar;

    double dist_sq = 0.0, mu_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      dist_sq += (traj.agents[i].outputs.row(k).transpose() - star[i]).squaredNorm();
      mu_sq += traj.agents[i].multipliers.row(k).squaredNorm();
    }
    rep.energy[k] = 0.5 * (dist_sq + mu_sq);
    if (k == 0) rep.y0_distance = std::sqrt(dist_sq);
  }

  // Trapezoid running integrals.
  for (int k = 1; k < rows; ++k) {
    rep.regret_curve[k] = rep.regret_curve[k - 1] + 0.5 * h * (gap[k - 1] + gap[k]);
    rep.fit_components.row(k) =
        rep.fit_components.row(k - 1) +
        0.5 * h * (traj.aggregate_constraint.row(k - 1) + traj.aggregate_constraint.row(k));
    rep.fit_curve[k] = rep.fit_components.row(k).cwiseMax(0.0).norm();
  }

  // Guarantee overlays with the scenario constants.
  const bool event = traj.mode == CommMode::event_triggered;
  const double eps = spec.params.epsilon;
  const double regret_rhs = rep.y0_distance * rep.y0_distance / (2.0 * eps) +
                            (event ? spec.params.sigma / spec.params.iota : 0.0);
  const double fit_base =
      std::sqrt(static_cast<double>(n)) * rep.y0_distance / eps +
      (event ? std::sqrt(2.0 * n * spec.params.sigma / (eps * spec.params.iota)) : 0.0);
  rep.regret_bound = Eigen::VectorXd::Constant(rows, regret_rhs);
  rep.fit_bound = Eigen::VectorXd::Zero(rows);
  for (int k = 0; k < rows; ++k) {
    rep.fit_bound[k] =
        fit_base + 2.0 * n * std::sqrt(spec.K_f / eps) * std::sqrt(traj.times[k]);
  }

  for (const AgentTrack& a : traj.agents) {
    rep.trigger_counts.push_back(static_cast<int>(a.trigger_times.size()));
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t e = 1; e < a.trigger_times.size(); ++e) {
      min_gap = std::min(min_gap, a.trigger_times[e] - a.trigger_times[e - 1]);
    }
    rep.min_gaps.push_back(min_gap);
  }
  rep.final_regret = rep.regret_curve[rows - 1];
  rep.final_fit = rep.fit_curve[rows - 1];
  return rep;
}

std::vector<ZenoStats> zeno_report(const Trajectory& traj) {
  const int steps = static_cast<int>(traj.times.size()) - 1;
  std::vector<ZenoStats> out;
  out.reserve(traj.agents.size());
  for (const AgentTrack& a : traj.agents) {
    ZenoStats z;
    z.count = static_cast<int>(a.trigger_times.size());
    z.saturated = (z.count == steps);
    if (z.count >= 2) {
      double min_gap = std::numeric_limits<double>::infinity();
      double total = 0.0;
      for (std::size_t e = 1; e < a.trigger_times.size(); ++e) {
        const double gap = a.trigger_times[e] - a.trigger_times[e - 1];
        min_gap = std::min(min_gap, gap);
        total += gap;
      }
      z.min_gap = min_gap;
      z.mean_gap = total / (z.count - 1);
    }
    out.push_back(z);
  }
  return out;
}

}  // namespace saddle
