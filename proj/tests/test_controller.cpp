#include <cmath>
#include <vector>

#include <doctest.h>
#include <Eigen/Dense>

#include "saddle/controller.hpp"
#include "saddle/rng.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using namespace saddle;

namespace {

VectorXd scal(double v) { return VectorXd::Constant(1, v); }

QuadraticCost zero_cost_1d() {
  QuadraticCost c;
  c.w = VectorXd::Zero(1);
  c.base = VectorXd::Zero(1);
  c.amp = VectorXd::Zero(1);
  c.freq = VectorXd::Zero(1);
  return c;
}

// Scalar static row: y - offset.
AffineConstraint row_minus(double offset) {
  AffineConstraint g;
  g.coef_base = MatrixXd::Constant(1, 1, 1.0);
  g.coef_amp = MatrixXd::Zero(1, 1);
  g.coef_freq = MatrixXd::Zero(1, 1);
  g.offset = VectorXd::Constant(1, offset);
  return g;
}

}  // namespace

TEST_CASE("local Lagrangian value") {
  // f = 0, g(y) = y - 1 at y = 1 is zero; the disagreement penalty remains:
  // 0 + 0 - K_mu * ||1 - 0||_1 = -2 for K_mu = 2.
  const double v = lagrangian_value(zero_cost_1d(), row_minus(1.0), 2.0, 0.0,
                                    scal(1.0), scal(1.0), {scal(0.0)});
  CHECK(v == doctest::Approx(-2.0));
}

TEST_CASE("primal direction descends the tracking gradient") {
  // First benchmark agent's cost at t = 0, y = 0, mu = 0: the target is
  // (2, 2.5), so -grad f = (4, 5); the interior of the box passes it through.
  QuadraticCost cost;
  cost.w = VectorXd::Ones(2);
  cost.base = (VectorXd(2) << 1.0, 1.5).finished();
  cost.amp = VectorXd::Ones(2);
  cost.freq = (VectorXd(2) << 1.0, 1.5).finished();
  AffineConstraint g;
  g.coef_base = (MatrixXd(1, 2) << 1.5, 1.5).finished();
  g.coef_amp = (MatrixXd(1, 2) << 0.5, 0.5).finished();
  g.coef_freq = (MatrixXd(1, 2) << 10.0, 15.0).finished();
  g.offset = VectorXd::Constant(1, 1.0);
  const BoxSet box = make_box(VectorXd::Constant(2, -1.0), VectorXd::Constant(2, 5.0));

  const VectorXd d = primal_direction(cost, g, box, 1.0, 0.0, VectorXd::Zero(2),
                                      VectorXd::Zero(1));
  CHECK(d[0] == doctest::Approx(4.0));
  CHECK(d[1] == doctest::Approx(5.0));

  // A positive multiplier adds the constraint coefficients to the gradient.
  const VectorXd d1 = primal_direction(cost, g, box, 1.0, 0.0, VectorXd::Zero(2),
                                       VectorXd::Constant(1, 2.0));
  CHECK(d1[0] == doctest::Approx(4.0 - 2.0 * 1.5));
  CHECK(d1[1] == doctest::Approx(5.0 - 2.0 * 1.5));
}

TEST_CASE("continuous dual direction") {
  // epsilon (g - K_mu * sign disagreement) = 0.5 * (1 - 3 * 1) = -1 at
  // g = 1, K_mu = 3, one neighbor below.
  const VectorXd d = dual_direction_continuous(row_minus(1.0), 0.5, 3.0, 0.0,
                                               scal(2.0), scal(2.0), {scal(1.0)});
  CHECK(d[0] == doctest::Approx(-1.0));

  // At mu = 0 a negative drive is blocked by the orthant.
  const VectorXd blocked = dual_direction_continuous(row_minus(5.0), 1.0, 0.0, 0.0,
                                                     scal(1.0), scal(0.0), {});
  CHECK(blocked[0] == 0.0);
}

TEST_CASE("event-triggered dual direction doubles the consensus gain") {
  // epsilon g - 2 epsilon K_mu sign(hat disagreement) = 0.5 - 2*0.5*3 = -2.5.
  const VectorXd d =
      dual_direction_triggered(row_minus(1.0), 0.5, 3.0, 0.0, scal(2.0), scal(2.0),
                               scal(2.0), {scal(1.0)});
  CHECK(d[0] == doctest::Approx(-2.5));

  // The sign terms read broadcast values, not live ones: with equal hats the
  // consensus term vanishes even though the live multipliers disagree.
  const VectorXd d2 =
      dual_direction_triggered(row_minus(1.0), 0.5, 3.0, 0.0, scal(2.0), scal(2.0),
                               scal(7.0), {scal(7.0)});
  CHECK(d2[0] == doctest::Approx(0.5));
}

TEST_CASE("both dual flows agree when broadcasts are fresh and in consensus") {
  Rng rng(43);
  for (int trial = 0; trial < 500; ++trial) {
    const double mu = rng.uniform(0.0, 4.0);
    const double y = rng.uniform(-2.0, 2.0);
    const double eps = rng.uniform(0.1, 2.0);
    const double k_mu = rng.uniform(0.1, 10.0);
    const double t = rng.uniform(0.0, 10.0);
    const AffineConstraint g = row_minus(rng.uniform(-2.0, 2.0));
    // All agents share the value mu and hats equal the live multipliers.
    const VectorXd cont = dual_direction_continuous(g, eps, k_mu, t, scal(y),
                                                    scal(mu), {scal(mu), scal(mu)});
    const VectorXd trig = dual_direction_triggered(g, eps, k_mu, t, scal(y), scal(mu),
                                                   scal(mu), {scal(mu), scal(mu)});
    CHECK(cont == trig);
  }
}

TEST_CASE("trigger threshold closed forms") {
  AlgorithmParams prm;
  prm.sigma = 0.3;
  prm.iota = 0.1;
  prm.K_mu = 10.0;

  // No disagreement: sigma / (3 N^2 K_mu sqrt(q)) = 0.3 / 750 = 4e-4.
  const double offset_only =
      trigger_threshold(0.0, scal(1.0), {scal(1.0), scal(1.0)}, prm, 5);
  CHECK(offset_only == doctest::Approx(4e-4));

  // Pure disagreement: sum 12 over neighbors, N = 2, q = 1 -> 12 / 12 = 1.
  AlgorithmParams no_offset = prm;
  no_offset.sigma = 0.0;
  const double disagreement_only =
      trigger_threshold(0.0, scal(8.0), {scal(2.0), scal(2.0)}, no_offset, 2);
  CHECK(disagreement_only == doctest::Approx(1.0));
}

TEST_CASE("trigger threshold monotonicity") {
  Rng rng(47);
  for (int trial = 0; trial < 1000; ++trial) {
    AlgorithmParams prm;
    prm.sigma = rng.uniform(0.05, 2.0);
    prm.iota = rng.uniform(0.05, 1.0);
    prm.K_mu = rng.uniform(0.5, 20.0);
    const int n = 2 + trial % 5;
    const double t = rng.uniform(0.0, 20.0);
    const VectorXd hat = scal(rng.uniform(0.0, 3.0));
    const std::vector<VectorXd> nbrs{scal(rng.uniform(0.0, 3.0)),
                                     scal(rng.uniform(0.0, 3.0))};
    const double base = trigger_threshold(t, hat, nbrs, prm, n);

    AlgorithmParams more_sigma = prm;
    more_sigma.sigma = prm.sigma * 2.0;
    CHECK(trigger_threshold(t, hat, nbrs, more_sigma, n) >= base);

    CHECK(trigger_threshold(t + 1.0, hat, nbrs, prm, n) <= base);

    AlgorithmParams more_kmu = prm;
    more_kmu.K_mu = prm.K_mu * 2.0;
    CHECK(trigger_threshold(t, hat, nbrs, more_kmu, n) <= base);

    CHECK(trigger_threshold(t, hat, nbrs, prm, n + 1) <= base);

    std::vector<VectorXd> further{nbrs[0] - scal(1.0), nbrs[1] + scal(1.0)};
    if ((hat - further[0]).lpNorm<1>() + (hat - further[1]).lpNorm<1>() >=
        (hat - nbrs[0]).lpNorm<1>() + (hat - nbrs[1]).lpNorm<1>()) {
      CHECK(trigger_threshold(t, hat, further, prm, n) >= base);
    }
  }
}

TEST_CASE("broadcast test is a closed inequality and resets the copy") {
  MultiplierState s;
  s.mu = scal(1.0);
  s.mu_hat = scal(0.5);  // error norm exactly 0.5

  CHECK_FALSE(maybe_trigger(s, 0.5000001, 3.0));
  CHECK(s.mu_hat[0] == 0.5);  // unchanged below threshold

  CHECK(maybe_trigger(s, 0.5, 3.0));  // fires at exact equality
  CHECK(s.mu_hat == s.mu);
  CHECK(s.last_trigger_time == 3.0);

  // Fresh copy means zero error; only a zero threshold would fire again.
  CHECK_FALSE(maybe_trigger(s, 1e-300, 4.0));
  CHECK(maybe_trigger(s, 0.0, 4.0));
}
