#pragma once

#include <vector>

#include <Eigen/Dense>

#include "saddle/convex.hpp"

namespace saddle {

enum class CommMode { continuous, event_triggered };

/// Per-agent multiplier bookkeeping. mu is the live value; mu_hat is the copy
/// neighbors currently hold (equal to mu right after a broadcast).
struct MultiplierState {
  Eigen::VectorXd mu;
  Eigen::VectorXd mu_hat;
  double last_trigger_time = 0.0;
};

struct AlgorithmParams {
  double epsilon = 1.0;  // step size of both flows
  double K_mu = 0.0;     // consensus penalty; guarantees need K_mu >= N * K_g
  double sigma = 0.5;    // trigger offset (event mode only)
  double iota = 0.1;     // trigger offset decay rate (event mode only)
  CommMode mode = CommMode::continuous;
};

// f + mu'g - K_mu * sum_j ||mu - mu_j||_1 over neighbors. Diagnostic only;
// the flows use its partial derivatives, never this value.
double lagrangian_value(const QuadraticCost& cost, const AffineConstraint& constraint,
                        double K_mu, double t, const Eigen::VectorXd& y,
                        const Eigen::VectorXd& mu,
                        const std::vector<Eigen::VectorXd>& neighbor_mus);

// Output flow: box-projected -epsilon * (grad f + Jac g' mu). Shared by both
// communication modes.
Eigen::VectorXd primal_direction(const QuadraticCost& cost,
                                 const AffineConstraint& constraint, const BoxSet& box,
                                 double epsilon, double t, const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& mu);

// Multiplier flow against live neighbor multipliers:
// orthant-projected epsilon * (g - K_mu * sum_j sign(mu - mu_j)).
Eigen::VectorXd dual_direction_continuous(const AffineConstraint& constraint,
                                          double epsilon, double K_mu, double t,
                                          const Eigen::VectorXd& y,
                                          const Eigen::VectorXd& mu,
                                          const std::vector<Eigen::VectorXd>& neighbor_mus);

// Multiplier flow against broadcast copies; the consensus gain doubles and
// both sign arguments are broadcast values, including the agent's own.
Eigen::VectorXd dual_direction_triggered(
    const AffineConstraint& constraint, double epsilon, double K_mu, double t,
    const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
    const Eigen::VectorXd& mu_hat, const std::vector<Eigen::VectorXd>& neighbor_mu_hats);

// Right-hand side of the broadcast test at time t:
//   sum_j ||mu_hat - mu_hat_j||_1 / (6 N sqrt(q))
//   + sigma e^{-iota t} / (3 N^2 K_mu sqrt(q)).
double trigger_threshold(double t, const Eigen::VectorXd& mu_hat,
                         const std::vector<Eigen::VectorXd>& neighbor_mu_hats,
                         const AlgorithmParams& params, int node_count);

// Fires iff ||mu_hat - mu||_2 >= threshold (closed inequality). On fire the
// broadcast copy is refreshed, so the error is exactly zero afterwards.
bool maybe_trigger(MultiplierState& state, double threshold, double t);

}  // namespace saddle
