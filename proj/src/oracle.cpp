#include "saddle/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "saddle/rng.hpp"

namespace saddle {

namespace {

constexpr int kMaxOuterRounds = 24;
constexpr int kMaxRowsPerRound = 64;
constexpr long long kMaxLatticePoints = 1'000'000'000LL;  // cost guard

}  // namespace

double SampledProgram::objective(const Eigen::VectorXd& y) const {
  return (quad_a.array() * y.array().square() - 2.0 * quad_b.array() * y.array()).sum() +
         obj_const;
}

Eigen::VectorXd SampledProgram::objective_gradient(const Eigen::VectorXd& y) const {
  return 2.0 * (quad_a.array() * y.array() - quad_b.array()).matrix();
}

Eigen::VectorXd SampledProgram::violations(const Eigen::VectorXd& y) const {
  return con_coef * y - con_rhs;
}

SampledProgram build_sampled_program(const std::vector<QuadraticCost>& costs,
                                     const std::vector<AffineConstraint>& constraints,
                                     const std::vector<BoxSet>& boxes, double horizon,
                                     int samples) {
  const std::size_t n = costs.size();
  if (n == 0 || constraints.size() != n || boxes.size() != n) {
    throw std::invalid_argument("oracle: per-agent section sizes disagree");
  }
  if (samples < 2) throw std::invalid_argument("oracle: need at least two samples");
  if (!(horizon > 0.0)) throw std::invalid_argument("oracle: horizon must be positive");
  const int q = constraints[0].rows();
  int p = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (costs[i].dim() != boxes[i].dim() || constraints[i].dim() != boxes[i].dim()) {
      throw std::invalid_argument("oracle: agent dimensions disagree");
    }
    if (constraints[i].rows() != q) {
      throw std::invalid_argument("oracle: constraint row counts differ across agents");
    }
    p += boxes[i].dim();
  }

  SampledProgram prog;
  const int m_count = samples;
  const double dt = horizon / (m_count - 1);
  prog.sample_times.resize(m_count);
  prog.sample_weights.resize(m_count);
  for (int m = 0; m < m_count; ++m) {
    prog.sample_times[m] = dt * m;
    prog.sample_weights[m] = (m == 0 || m == m_count - 1) ? dt / 2.0 : dt;
  }
  prog.sample_times[m_count - 1] = horizon;

  Eigen::VectorXd lo(p), up(p);
  prog.quad_a = Eigen::VectorXd::Zero(p);
  prog.quad_b = Eigen::VectorXd::Zero(p);
  prog.obj_const = 0.0;
  prog.con_coef = Eigen::MatrixXd::Zero(m_count * q, p);
  prog.con_rhs = Eigen::VectorXd::Zero(m_count * q);

  const double weight_total = prog.sample_weights.sum();
  int off = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int pi = boxes[i].dim();
    lo.segment(off, pi) = boxes[i].lower;
    up.segment(off, pi) = boxes[i].upper;
    prog.quad_a.segment(off, pi) = weight_total * costs[i].w;
    for (int m = 0; m < m_count; ++m) {
      const double wm = prog.sample_weights[m];
      const double t = prog.sample_times[m];
      const Eigen::VectorXd tau = costs[i].target(t);
      prog.quad_b.segment(off, pi) += wm * costs[i].w.cwiseProduct(tau);
      prog.obj_const += wm * costs[i].w.dot(tau.cwiseProduct(tau));
      prog.con_coef.block(m * q, off, q, pi) = constraints[i].coefficients(t);
      prog.con_rhs.segment(m * q, q) += constraints[i].offset;
    }
    off += pi;
  }
  prog.box = make_box(lo, up);
  return prog;
}

OracleResult solve_clairvoyant(const SampledProgram& prog, int iters,
                               std::uint64_t seed) {
  if (iters < 1) throw std::invalid_argument("oracle: iteration count must be positive");
  const int p = prog.dim();
  const int total_rows = prog.rows();

  Rng rng(seed);
  Eigen::VectorXd y(p);
  for (int k = 0; k < p; ++k) y[k] = rng.uniform(prog.box.lower[k], prog.box.upper[k]);

  OracleResult best;
  best.objective = std::numeric_limits<double>::infinity();
  best.max_violation = std::numeric_limits<double>::infinity();
  best.dual_certificate = Eigen::VectorXd::Zero(total_rows);

  // Full-row evaluation of a candidate; keeps the feasible point of least
  // objective, falling back to least violation while nothing is feasible.
  auto consider = [&](const Eigen::VectorXd& cand) -> Eigen::VectorXd {
    Eigen::VectorXd v = prog.violations(cand);
    const double mv = (total_rows > 0) ? std::max(v.maxCoeff(), 0.0) : 0.0;
    const bool feas = mv <= kOracleFeasTol;
    const double obj = prog.objective(cand);
    const bool better = best.y_star.size() == 0 || (feas && !best.feasible) ||
                        (feas == best.feasible &&
                         (feas ? obj < best.objective : mv < best.max_violation));
    if (better) {
      best.y_star = cand;
      best.objective = obj;
      best.max_violation = mv;
      best.feasible = feas;
    }
    return v;
  };

  std::vector<int> active;
  std::vector<char> in_active(static_cast<std::size_t>(total_rows), 0);
  Eigen::VectorXd lam(0);
  const double c = prog.box.diameter() / std::sqrt(static_cast<double>(iters));
  const int tail_start = iters - iters / 4;

  for (int round = 0; round < kMaxOuterRounds; ++round) {
    const bool prev_feasible = best.feasible;
    const double prev_objective = best.objective;
    const int r = static_cast<int>(active.size());
    Eigen::MatrixXd a_act(r, p);
    Eigen::VectorXd b_act(r);
    for (int j = 0; j < r; ++j) {
      a_act.row(j) = prog.con_coef.row(active[j]);
      b_act[j] = prog.con_rhs[active[j]];
    }
    Eigen::VectorXd lam_warm = Eigen::VectorXd::Zero(r);
    lam_warm.head(lam.size()) = lam;  // rows only ever get appended
    lam = lam_warm;

    Eigen::VectorXd y_tail = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd lam_tail = Eigen::VectorXd::Zero(r);
    int tail_count = 0;
    Eigen::VectorXd best_inner = y;
    double best_inner_obj = std::numeric_limits<double>::infinity();

    for (int k = 1; k <= iters; ++k) {
      const double s = c / std::sqrt(static_cast<double>(k));
      const Eigen::VectorXd viol = a_act * y - b_act;
      const double obj = prog.objective(y);
      if ((r == 0 || viol.maxCoeff() <= kOracleFeasTol) && obj < best_inner_obj) {
        best_inner = y;
        best_inner_obj = obj;
      }
      const Eigen::VectorXd grad = prog.objective_gradient(y) + a_act.transpose() * lam;
      y = project_box(prog.box, y - s * grad);
      lam = (lam + s * viol).cwiseMax(0.0);
      if (k > tail_start) {
        y_tail += y;
        lam_tail += lam;
        ++tail_count;
      }
    }
    y_tail /= tail_count;
    lam_tail /= tail_count;

    const Eigen::VectorXd v_final = consider(y);
    consider(best_inner);
    consider(y_tail);
    best.dual_certificate.setZero();
    for (int j = 0; j < r; ++j) best.dual_certificate[active[j]] = lam_tail[j];

    const double mv = (total_rows > 0) ? v_final.maxCoeff() : 0.0;
    if (mv <= kOracleFeasTol) break;  // working-set optimum is fully feasible

    // The final iterate jitters at the subgradient step scale, so near a
    // binding row it keeps reporting hairline violations no matter how many
    // near-duplicate rows join. Once a feasible incumbent exists and a whole
    // round failed to improve it, more rows will not help either.
    if (best.feasible && prev_feasible &&
        best.objective >= prev_objective - 1e-9 * std::max(1.0, std::abs(prev_objective))) {
      break;
    }

    // Admit the most violated remaining rows.
    std::vector<int> newcomers;
    for (int row = 0; row < total_rows; ++row) {
      if (!in_active[row] && v_final[row] > kOracleFeasTol) newcomers.push_back(row);
    }
    if (newcomers.empty()) break;  // violations persist on already-active rows
    if (static_cast<int>(newcomers.size()) > kMaxRowsPerRound) {
      std::nth_element(newcomers.begin(), newcomers.begin() + kMaxRowsPerRound,
                       newcomers.end(),
                       [&](int a, int b) { return v_final[a] > v_final[b]; });
      newcomers.resize(kMaxRowsPerRound);
    }
    for (int row : newcomers) {
      active.push_back(row);
      in_active[row] = 1;
    }
  }
  return best;
}

OracleResult grid_oracle(const SampledProgram& prog, double resolution) {
  const int p = prog.dim();
  if (p > 4) throw std::invalid_argument("oracle: grid search limited to dimension 4");
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("oracle: resolution must be positive");
  }
  std::vector<long long> counts(p);
  long long total = 1;
  for (int k = 0; k < p; ++k) {
    const double width = prog.box.upper[k] - prog.box.lower[k];
    counts[k] = static_cast<long long>(std::floor(width / resolution)) + 1;
    total *= counts[k];
    if (total > kMaxLatticePoints) {
      throw std::invalid_argument("oracle: lattice too large at this resolution");
    }
  }

  OracleResult result;
  result.dual_certificate = Eigen::VectorXd::Zero(prog.rows());
  result.objective = std::numeric_limits<double>::infinity();
  result.max_violation = std::numeric_limits<double>::infinity();

  std::vector<long long> idx(p, 0);
  Eigen::VectorXd y(p);
  for (long long point = 0; point < total; ++point) {
    for (int k = 0; k < p; ++k) y[k] = prog.box.lower[k] + resolution * idx[k];
    const Eigen::VectorXd v = prog.violations(y);
    const double mv = (prog.rows() > 0) ? std::max(v.maxCoeff(), 0.0) : 0.0;
    const bool feas = mv <= kOracleFeasTol;
    if (feas || !result.feasible) {
      const double obj = prog.objective(y);
      const bool better = (feas && !result.feasible) ||
                          (feas == result.feasible &&
                           (feas ? obj < result.objective : mv < result.max_violation));
      if (better) {
        result.y_star = y;
        result.objective = obj;
        result.max_violation = mv;
        result.feasible = feas;
      }
    }
    for (int k = 0; k < p; ++k) {  // odometer
      if (++idx[k] < counts[k]) break;
      idx[k] = 0;
    }
  }
  return result;
}

double resolution_gap(const SampledProgram& prog, double resolution) {
  const int p = prog.dim();
  double grad_sq = 0.0;
  double a_max = 0.0;
  for (int k = 0; k < p; ++k) {
    const double glo = std::abs(2.0 * prog.quad_a[k] * prog.box.lower[k] - 2.0 * prog.quad_b[k]);
    const double ghi = std::abs(2.0 * prog.quad_a[k] * prog.box.upper[k] - 2.0 * prog.quad_b[k]);
    grad_sq += std::max(glo, ghi) * std::max(glo, ghi);
    a_max = std::max(a_max, prog.quad_a[k]);
  }
  const double diag = resolution * std::sqrt(static_cast<double>(p));
  return std::sqrt(grad_sq) * diag + a_max * diag * diag;
}

}  // namespace saddle
