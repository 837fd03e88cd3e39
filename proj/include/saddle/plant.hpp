#pragma once

#include <Eigen/Dense>

namespace saddle {

// Relative singular-value threshold for all rank decisions.
inline constexpr double kRankTol = 1e-9;

/// One agent's linear dynamics xdot = A x + B u, y = C x.
struct AgentPlant {
  Eigen::MatrixXd A;  // n x n
  Eigen::MatrixXd B;  // n x m
  Eigen::MatrixXd C;  // p x n
  Eigen::VectorXd x;  // current state

  int state_dim() const { return static_cast<int>(A.rows()); }
  int input_dim() const { return static_cast<int>(B.cols()); }
  int output_dim() const { return static_cast<int>(C.rows()); }
  Eigen::VectorXd output() const { return C * x; }
};

// Validates mutual dimension consistency. Throws std::invalid_argument.
AgentPlant make_plant(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                      const Eigen::MatrixXd& C, const Eigen::VectorXd& x0);

/// Output-feedback gains solving C B K_alpha = C A and C B K_beta = I.
struct GainPair {
  Eigen::MatrixXd K_alpha;  // m x n
  Eigen::MatrixXd K_beta;   // m x p
};

// True iff rank(C B) = p and the Kalman controllability matrix has full rank.
bool check_assumption4(const AgentPlant& plant);

// Minimum-Frobenius-norm solutions via the Moore-Penrose pseudoinverse:
// K_alpha = (CB)^+ (CA), K_beta = (CB)^+. Throws when rank(CB) < p.
GainPair synthesize_gains(const AgentPlant& plant);

// One forward-Euler step of the closed loop
//   x <- x + h ((A - B K_alpha) x + B K_beta v),
// where v is the projected output-flow direction. Throws on non-finite state.
void step_state(AgentPlant& plant, const GainPair& gains, const Eigen::VectorXd& v,
                double h);

}  // namespace saddle
