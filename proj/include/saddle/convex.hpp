#pragma once

#include <Eigen/Dense>

namespace saddle {

// Boundary-equality tolerance for directional projections. Post-step clamping
// places points exactly on faces, so this only guards rounding.
inline constexpr double kFaceTol = 1e-12;

/// Axis-aligned compact box {y : lower <= y <= upper}.
struct BoxSet {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int dim() const { return static_cast<int>(lower.size()); }
  double diameter() const { return (upper - lower).norm(); }
  bool contains(const Eigen::VectorXd& x, double tol = kFaceTol) const;
};

// Validates lower <= upper componentwise and finiteness of both bounds.
BoxSet make_box(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper);

// Euclidean projection: componentwise clamp.
Eigen::VectorXd project_box(const BoxSet& s, const Eigen::VectorXd& x);

// Directional projection of v at x in s: blocks outward components on active
// faces, passes everything else. Requires x in s (within kFaceTol).
Eigen::VectorXd dir_project_box(const BoxSet& s, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& v);

// Same for the nonnegative orthant: blocks negative components where x_k = 0.
Eigen::VectorXd dir_project_orthant(const Eigen::VectorXd& x, const Eigen::VectorXd& v);

// Componentwise sign with the selection 0 at exactly zero (a valid element of
// the 1-norm subdifferential). No dead-band.
Eigen::VectorXd sign_vec(const Eigen::VectorXd& z);

/// Separable quadratic tracking cost
///   f(t, y) = sum_k w_k (y_k - amp_k cos(freq_k t) - base_k)^2.
struct QuadraticCost {
  Eigen::VectorXd w;     // nonnegative componentwise
  Eigen::VectorXd base;
  Eigen::VectorXd amp;
  Eigen::VectorXd freq;  // rad/s

  int dim() const { return static_cast<int>(w.size()); }
  Eigen::VectorXd target(double t) const;
  double value(double t, const Eigen::VectorXd& y) const;
  Eigen::VectorXd gradient(double t, const Eigen::VectorXd& y) const;
};

/// Affine constraint rows with sinusoidal time-varying coefficients:
///   row j: sum_k (coef_amp_jk sin(coef_freq_jk t) + coef_base_jk) y_k - offset_j.
struct AffineConstraint {
  Eigen::MatrixXd coef_base;  // q x d
  Eigen::MatrixXd coef_amp;   // q x d
  Eigen::MatrixXd coef_freq;  // q x d
  Eigen::VectorXd offset;     // q

  int rows() const { return static_cast<int>(offset.size()); }
  int dim() const { return static_cast<int>(coef_base.cols()); }
  // Coefficient matrix at time t; also the exact Jacobian in y.
  Eigen::MatrixXd coefficients(double t) const;
  Eigen::VectorXd value(double t, const Eigen::VectorXd& y) const;
};

/// Uniform bounds over box x horizon: |f| <= K_f, ||g|| <= K_g.
struct FunctionBounds {
  double K_f = 0.0;
  double K_g = 0.0;
};

// Closed-form over-approximations of the cost/constraint bounds over the box.
// Identically-zero families are floored at the smallest positive double so the
// bounds stay strictly positive. Throws on an unbounded box.
FunctionBounds compute_bounds(const QuadraticCost& c, const AffineConstraint& g,
                              const BoxSet& s, double horizon);

}  // namespace saddle
