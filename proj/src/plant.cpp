#include "saddle/plant.hpp"

#include <cmath>
#include <stdexcept>

namespace saddle {

namespace {

int numeric_rank(const Eigen::MatrixXd& M) {
  if (M.rows() == 0 || M.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  const double thresh = kRankTol * s[0];
  int r = 0;
  for (int i = 0; i < s.size(); ++i) {
    if (s[i] > thresh) ++r;
  }
  return r;
}

Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& M) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double thresh = (s.size() > 0) ? kRankTol * s[0] : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (int i = 0; i < s.size(); ++i) {
    if (s[i] > thresh) inv[i] = 1.0 / s[i];
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Eigen::MatrixXd controllability_matrix(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  const int n = static_cast<int>(A.rows());
  const int m = static_cast<int>(B.cols());
  Eigen::MatrixXd K(n, n * m);
  Eigen::MatrixXd block = B;
  for (int i = 0; i < n; ++i) {
    K.middleCols(i * m, m) = block;
    block = A * block;
  }
  return K;
}

}  // namespace

AgentPlant make_plant(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                      const Eigen::MatrixXd& C, const Eigen::VectorXd& x0) {
  if (A.rows() != A.cols()) throw std::invalid_argument("plant: A must be square");
  if (B.rows() != A.rows()) throw std::invalid_argument("plant: B row count != state dim");
  if (C.cols() != A.rows()) throw std::invalid_argument("plant: C col count != state dim");
  if (x0.size() != A.rows()) throw std::invalid_argument("plant: x0 size != state dim");
  return AgentPlant{A, B, C, x0};
}

bool check_assumption4(const AgentPlant& plant) {
  const int p = plant.output_dim();
  if (numeric_rank(plant.C * plant.B) != p) return false;
  return numeric_rank(controllability_matrix(plant.A, plant.B)) == plant.state_dim();
}

GainPair synthesize_gains(const AgentPlant& plant) {
  const Eigen::MatrixXd CB = plant.C * plant.B;
  if (numeric_rank(CB) < plant.output_dim()) {
    throw std::invalid_argument("plant: rank(CB) < p, gain equations unsolvable (Assumption 4)");
  }
  const Eigen::MatrixXd CB_pinv = pseudoinverse(CB);
  return GainPair{CB_pinv * (plant.C * plant.A), CB_pinv};
}

void step_state(AgentPlant& plant, const GainPair& gains, const Eigen::VectorXd& v,
                double h) {
  plant.x += h * ((plant.A - plant.B * gains.K_alpha) * plant.x +
                  plant.B * (gains.K_beta * v));
  if (!plant.x.allFinite()) {
    throw std::runtime_error("plant: non-finite state after step (numerical blow-up)");
  }
}

}  // namespace saddle
