#include "saddle/convex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace saddle {

bool BoxSet::contains(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != lower.size()) return false;
  for (int k = 0; k < x.size(); ++k) {
    if (x[k] < lower[k] - tol || x[k] > upper[k] + tol) return false;
  }
  return true;
}

BoxSet make_box(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
  if (lower.size() != upper.size()) {
    throw std::invalid_argument("box: dimension mismatch");
  }
  if (lower.size() == 0) {
    throw std::invalid_argument("box: dimension must be positive");
  }
  for (int k = 0; k < lower.size(); ++k) {
    if (!std::isfinite(lower[k]) || !std::isfinite(upper[k])) {
      throw std::invalid_argument("box: bounds must be finite (compactness)");
    }
    if (lower[k] > upper[k]) {
      throw std::invalid_argument("box: lower > upper at component " + std::to_string(k));
    }
  }
  return BoxSet{lower, upper};
}

Eigen::VectorXd project_box(const BoxSet& s, const Eigen::VectorXd& x) {
  if (x.size() != s.lower.size()) {
    throw std::invalid_argument("project_box: dimension mismatch");
  }
  return x.cwiseMax(s.lower).cwiseMin(s.upper);
}

Eigen::VectorXd dir_project_box(const BoxSet& s, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& v) {
  if (x.size() != s.lower.size() || v.size() != x.size()) {
    throw std::invalid_argument("dir_project_box: dimension mismatch");
  }
  if (!s.contains(x, kFaceTol)) {
    throw std::invalid_argument("dir_project_box: point outside the set");
  }
  Eigen::VectorXd out = v;
  for (int k = 0; k < x.size(); ++k) {
    const bool at_lower = std::abs(x[k] - s.lower[k]) <= kFaceTol;
    const bool at_upper = std::abs(x[k] - s.upper[k]) <= kFaceTol;
    if ((at_lower && v[k] < 0.0) || (at_upper && v[k] > 0.0)) out[k] = 0.0;
  }
  return out;
}

Eigen::VectorXd dir_project_orthant(const Eigen::VectorXd& x, const Eigen::VectorXd& v) {
  if (v.size() != x.size()) {
    throw std::invalid_argument("dir_project_orthant: dimension mismatch");
  }
  Eigen::VectorXd out = v;
  for (int k = 0; k < x.size(); ++k) {
    if (x[k] < -kFaceTol) {
      throw std::invalid_argument("dir_project_orthant: negative component");
    }
    if (std::abs(x[k]) <= kFaceTol && v[k] < 0.0) out[k] = 0.0;
  }
  return out;
}

Eigen::VectorXd sign_vec(const Eigen::VectorXd& z) {
  Eigen::VectorXd out(z.size());
  for (int k = 0; k < z.size(); ++k) {
    out[k] = (z[k] > 0.0) ? 1.0 : (z[k] < 0.0 ? -1.0 : 0.0);
  }
  return out;
}

Eigen::VectorXd QuadraticCost::target(double t) const {
  return base + amp.cwiseProduct((freq * t).array().cos().matrix());
}

double QuadraticCost::value(double t, const Eigen::VectorXd& y) const {
  const Eigen::VectorXd d = y - target(t);
  return d.cwiseProduct(d).dot(w);
}

Eigen::VectorXd QuadraticCost::gradient(double t, const Eigen::VectorXd& y) const {
  return 2.0 * w.cwiseProduct(y - target(t));
}

Eigen::MatrixXd AffineConstraint::coefficients(double t) const {
  return coef_amp.cwiseProduct((coef_freq * t).array().sin().matrix()) + coef_base;
}

Eigen::VectorXd AffineConstraint::value(double t, const Eigen::VectorXd& y) const {
  return coefficients(t) * y - offset;
}

FunctionBounds compute_bounds(const QuadraticCost& c, const AffineConstraint& g,
                              const BoxSet& s, double /*horizon*/) {
  for (int k = 0; k < s.dim(); ++k) {
    if (!std::isfinite(s.lower[k]) || !std::isfinite(s.upper[k])) {
      throw std::invalid_argument("compute_bounds: unbounded box");
    }
  }

  // Worst per-coordinate deviation: endpoints of the box against extreme
  // target values base +/- |amp|, each coordinate maximized independently.
  double kf = 0.0;
  for (int k = 0; k < c.dim(); ++k) {
    const double t_lo = c.base[k] - std::abs(c.amp[k]);
    const double t_hi = c.base[k] + std::abs(c.amp[k]);
    double dev = 0.0;
    for (double y : {s.lower[k], s.upper[k]}) {
      for (double tgt : {t_lo, t_hi}) {
        dev = std::max(dev, std::abs(y - tgt));
      }
    }
    kf += c.w[k] * dev * dev;
  }

  // Row bound: sum_k (max |coefficient|) * max(|lo|,|up|) + |offset|.
  double row_max = 0.0;
  for (int j = 0; j < g.rows(); ++j) {
    double row = std::abs(g.offset[j]);
    for (int k = 0; k < g.dim(); ++k) {
      const double coef_max = std::abs(g.coef_base(j, k)) + std::abs(g.coef_amp(j, k));
      row += coef_max * std::max(std::abs(s.lower[k]), std::abs(s.upper[k]));
    }
    row_max = std::max(row_max, row);
  }
  const double kg = std::sqrt(static_cast<double>(std::max(g.rows(), 1))) * row_max;

  const double floor = std::numeric_limits<double>::min();
  return FunctionBounds{std::max(kf, floor), std::max(kg, floor)};
}

}  // namespace saddle
