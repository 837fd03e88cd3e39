#include "saddle/controller.hpp"

#include <cmath>

namespace saddle {

namespace {

// sum_j sign(center - nb_j), the consensus subgradient selection.
Eigen::VectorXd sign_sum(const Eigen::VectorXd& center,
                         const std::vector<Eigen::VectorXd>& others) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(center.size());
  for (const auto& other : others) s += sign_vec(center - other);
  return s;
}

}  // namespace

double lagrangian_value(const QuadraticCost& cost, const AffineConstraint& constraint,
                        double K_mu, double t, const Eigen::VectorXd& y,
                        const Eigen::VectorXd& mu,
                        const std::vector<Eigen::VectorXd>& neighbor_mus) {
  double disagreement = 0.0;
  for (const auto& other : neighbor_mus) disagreement += (mu - other).lpNorm<1>();
  return cost.value(t, y) + mu.dot(constraint.value(t, y)) - K_mu * disagreement;
}

Eigen::VectorXd primal_direction(const QuadraticCost& cost,
                                 const AffineConstraint& constraint, const BoxSet& box,
                                 double epsilon, double t, const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& mu) {
  const Eigen::VectorXd grad =
      cost.gradient(t, y) + constraint.coefficients(t).transpose() * mu;
  return dir_project_box(box, y, -epsilon * grad);
}

Eigen::VectorXd dual_direction_continuous(const AffineConstraint& constraint,
                                          double epsilon, double K_mu, double t,
                                          const Eigen::VectorXd& y,
                                          const Eigen::VectorXd& mu,
                                          const std::vector<Eigen::VectorXd>& neighbor_mus) {
  const Eigen::VectorXd v =
      epsilon * (constraint.value(t, y) - K_mu * sign_sum(mu, neighbor_mus));
  return dir_project_orthant(mu, v);
}

Eigen::VectorXd dual_direction_triggered(
    const AffineConstraint& constraint, double epsilon, double K_mu, double t,
    const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
    const Eigen::VectorXd& mu_hat, const std::vector<Eigen::VectorXd>& neighbor_mu_hats) {
  const Eigen::VectorXd v = epsilon * constraint.value(t, y) -
                            2.0 * epsilon * K_mu * sign_sum(mu_hat, neighbor_mu_hats);
  return dir_project_orthant(mu, v);
}

double trigger_threshold(double t, const Eigen::VectorXd& mu_hat,
                         const std::vector<Eigen::VectorXd>& neighbor_mu_hats,
                         const AlgorithmParams& params, int node_count) {
  const double n = static_cast<double>(node_count);
  const double sqrt_q = std::sqrt(static_cast<double>(mu_hat.size()));
  double disagreement = 0.0;
  for (const auto& other : neighbor_mu_hats) {
    disagreement += (mu_hat - other).lpNorm<1>();
  }
  return disagreement / (6.0 * n * sqrt_q) +
         params.sigma * std::exp(-params.iota * t) / (3.0 * n * n * params.K_mu * sqrt_q);
}

bool maybe_trigger(MultiplierState& state, double threshold, double t) {
  if ((state.mu_hat - state.mu).norm() < threshold) return false;
  state.mu_hat = state.mu;
  state.last_trigger_time = t;
  return true;
}

}  // namespace saddle
