#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "saddle/convex.hpp"

namespace saddle {

// A candidate counts as feasible when every sampled row is below this.
inline constexpr double kOracleFeasTol = 1e-6;

/// Time-sampled relaxation of the best-fixed-output problem:
///   minimize  sum_m w_m f(t_m, y)   over the product box
///   s.t.      per sample m, aggregated constraint rows sum_i g_i(t_m, y_i) <= 0.
/// The quadrature collapses the objective into one separable quadratic
///   sum_k (quad_a_k y_k^2 - 2 quad_b_k y_k) + obj_const.
struct SampledProgram {
  Eigen::VectorXd sample_times;    // strictly increasing, first 0, last = horizon
  Eigen::VectorXd sample_weights;  // trapezoid weights, sum = horizon
  BoxSet box;                      // product of the agent boxes
  Eigen::VectorXd quad_a;
  Eigen::VectorXd quad_b;
  double obj_const = 0.0;
  Eigen::MatrixXd con_coef;        // (M*q) x p; row m*q + j is row j at sample m
  Eigen::VectorXd con_rhs;         // aggregated offsets, same row order

  int dim() const { return box.dim(); }
  int rows() const { return static_cast<int>(con_rhs.size()); }
  double objective(const Eigen::VectorXd& y) const;
  Eigen::VectorXd objective_gradient(const Eigen::VectorXd& y) const;
  // con_coef * y - con_rhs, the per-row slack (positive = violated).
  Eigen::VectorXd violations(const Eigen::VectorXd& y) const;
};

struct OracleResult {
  Eigen::VectorXd y_star;
  Eigen::VectorXd dual_certificate;  // one multiplier per sampled row
  double objective = 0.0;
  double max_violation = 0.0;
  bool feasible = false;             // max_violation <= kOracleFeasTol
};

// Assembles the sampled program on a uniform grid of `samples` >= 2 points
// over [0, horizon]. All agents must share the constraint row count q.
SampledProgram build_sampled_program(const std::vector<QuadraticCost>& costs,
                                     const std::vector<AffineConstraint>& constraints,
                                     const std::vector<BoxSet>& boxes, double horizon,
                                     int samples);

// Projected primal-dual subgradient solve with diminishing steps c/sqrt(k),
// c = box diameter / sqrt(iters). Because most sampled rows are slack, the
// subgradient iteration runs on a growing working set of rows: after each
// inner pass the most violated remaining rows join, until the candidate
// satisfies every row within kOracleFeasTol or the working set stops helping.
// Deterministic given the seed (which fixes only the start point).
OracleResult solve_clairvoyant(const SampledProgram& prog, int iters,
                               std::uint64_t seed);

// Exhaustive lattice search from the lower corner at the given spacing,
// keeping the feasible point of least objective. Guarded to dim <= 4.
OracleResult grid_oracle(const SampledProgram& prog, double resolution);

// First-order bound on the objective gap a lattice of the given spacing can
// leave: sup-norm of the objective gradient over the box times the lattice
// cell diagonal, plus the second-order term. Used as the agreement tolerance
// between the two oracles.
double resolution_gap(const SampledProgram& prog, double resolution);

}  // namespace saddle
