#include <cmath>
#include <stdexcept>

#include <doctest.h>
#include <Eigen/Dense>

#include "saddle/plant.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using namespace saddle;

namespace {

struct NamedPlant {
  const char* name;
  AgentPlant plant;
  MatrixXd k_alpha_expect;
  MatrixXd k_beta_expect;
};

MatrixXd mat(int r, int c, std::initializer_list<double> vals) {
  MatrixXd m(r, c);
  int k = 0;
  for (double v : vals) m(k / c, k % c) = v, ++k;
  return m;
}

// The benchmark agents: two identical 2-state plants, one rotational 2-state
// plant, two identical 3-state plants, with their published feedback gains.
std::vector<NamedPlant> benchmark_agents() {
  std::vector<NamedPlant> out;
  const MatrixXd a12 = mat(2, 2, {1, 0, 0, 2});
  const MatrixXd b12 = mat(2, 2, {0, 1, 1, 3});
  const MatrixXd c12 = mat(2, 2, {2, 0, 0, 1});
  const MatrixXd ka12 = mat(2, 2, {-3, 2, 1, 0});
  const MatrixXd kb12 = mat(2, 2, {-1.5, 1, 0.5, 0});
  out.push_back({"agent1", make_plant(a12, b12, c12, VectorXd::Zero(2)), ka12, kb12});
  out.push_back({"agent2", make_plant(a12, b12, c12, VectorXd::Zero(2)), ka12, kb12});

  const MatrixXd a3 = mat(2, 2, {0, 2, -1, 1});
  const MatrixXd b3 = mat(2, 2, {2, 1, 1, 0});
  const MatrixXd c3 = mat(2, 2, {2, 1, -1, 0});
  out.push_back({"agent3", make_plant(a3, b3, c3, VectorXd::Zero(2)),
                 mat(2, 2, {-1, 1, 2, 0}), mat(2, 2, {1, 2, -2, -5})});

  const MatrixXd a45 = mat(3, 3, {2, 1, 0, 0, 1, 1, 1, 0, 2});
  const MatrixXd b45 = MatrixXd::Identity(3, 3);
  const MatrixXd c45 = mat(3, 3, {3, 0, 0, 0, 1, 0, 0, 1, 2});
  const MatrixXd kb45 = mat(3, 3, {0.333, 0, 0, 0, 1, 0, 0, -0.5, 0.5});
  out.push_back({"agent4", make_plant(a45, b45, c45, VectorXd::Zero(3)), a45, kb45});
  out.push_back({"agent5", make_plant(a45, b45, c45, VectorXd::Zero(3)), a45, kb45});
  return out;
}

}  // namespace

TEST_CASE("plant construction validates dimensions") {
  CHECK_THROWS_AS(make_plant(MatrixXd::Zero(2, 3), MatrixXd::Zero(2, 1),
                             MatrixXd::Zero(1, 2), VectorXd::Zero(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_plant(MatrixXd::Zero(2, 2), MatrixXd::Zero(3, 1),
                             MatrixXd::Zero(1, 2), VectorXd::Zero(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_plant(MatrixXd::Zero(2, 2), MatrixXd::Zero(2, 1),
                             MatrixXd::Zero(1, 3), VectorXd::Zero(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_plant(MatrixXd::Zero(2, 2), MatrixXd::Zero(2, 1),
                             MatrixXd::Zero(1, 2), VectorXd::Zero(3)),
                  std::invalid_argument);
}

TEST_CASE("gain-existence check accepts the benchmark agents") {
  for (const auto& item : benchmark_agents()) {
    CAPTURE(item.name);
    CHECK(check_assumption4(item.plant));
  }
}

TEST_CASE("gain-existence check rejects defective plants") {
  // C B = 0: the output map annihilates the input map.
  const AgentPlant no_cb =
      make_plant(MatrixXd::Identity(2, 2), mat(2, 1, {1, 1}), mat(1, 2, {1, -1}),
                 VectorXd::Zero(2));
  CHECK_FALSE(check_assumption4(no_cb));
  CHECK_THROWS_AS(synthesize_gains(no_cb), std::invalid_argument);

  // rank(C B) fine, but the pair (A, B) is uncontrollable.
  const AgentPlant uncontrollable =
      make_plant(mat(2, 2, {1, 0, 0, 2}), mat(2, 1, {1, 0}), mat(1, 2, {1, 0}),
                 VectorXd::Zero(2));
  CHECK_FALSE(check_assumption4(uncontrollable));
}

TEST_CASE("synthesized gains match the published matrices to 5e-3") {
  for (const auto& item : benchmark_agents()) {
    CAPTURE(item.name);
    const GainPair g = synthesize_gains(item.plant);
    CHECK((g.K_alpha - item.k_alpha_expect).lpNorm<Eigen::Infinity>() <= 5e-3);
    CHECK((g.K_beta - item.k_beta_expect).lpNorm<Eigen::Infinity>() <= 5e-3);

    // The defining identities hold to roundoff: C(A - B K_alpha) = 0 and
    // C B K_beta = I, which make the closed-loop output follow the commanded
    // flow exactly.
    const AgentPlant& p = item.plant;
    const MatrixXd closed = p.C * (p.A - p.B * g.K_alpha);
    CHECK(closed.lpNorm<Eigen::Infinity>() <= 1e-9);
    const MatrixXd eye = p.C * p.B * g.K_beta;
    CHECK((eye - MatrixXd::Identity(eye.rows(), eye.cols())).lpNorm<Eigen::Infinity>() <=
          1e-9);
  }
}

TEST_CASE("closed-loop Euler step") {
  // Scalar integrator with unit gains: x <- x + h * v.
  AgentPlant p = make_plant(MatrixXd::Zero(1, 1), MatrixXd::Identity(1, 1),
                            MatrixXd::Identity(1, 1), VectorXd::Constant(1, 1.0));
  GainPair g;
  g.K_alpha = MatrixXd::Zero(1, 1);
  g.K_beta = MatrixXd::Identity(1, 1);
  step_state(p, g, VectorXd::Constant(1, 2.0), 0.1);
  CHECK(p.x[0] == doctest::Approx(1.2));
  CHECK(p.output()[0] == doctest::Approx(1.2));

  // Non-finite states abort instead of propagating.
  p.x[0] = 1e308;
  GainPair blow;
  blow.K_alpha = MatrixXd::Constant(1, 1, -1e10);  // A - B K_alpha = +1e10
  blow.K_beta = MatrixXd::Identity(1, 1);
  CHECK_THROWS_AS(step_state(p, blow, VectorXd::Zero(1), 1.0), std::runtime_error);
}
