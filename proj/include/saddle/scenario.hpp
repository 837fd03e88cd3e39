#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "saddle/controller.hpp"
#include "saddle/convex.hpp"
#include "saddle/graph.hpp"
#include "saddle/plant.hpp"

namespace saddle {

struct AgentSpec {
  Eigen::MatrixXd A, B, C;
  std::optional<Eigen::VectorXd> x0;  // explicit initial state ...
  double x0_lo = 0.0, x0_hi = 0.0;    // ... or per-component uniform range
  bool output_in_box = false;         // redraw until C*x0 lands inside the box
  QuadraticCost cost;
  AffineConstraint constraint;
  BoxSet box;

  int state_dim() const { return static_cast<int>(A.rows()); }
  int output_dim() const { return static_cast<int>(C.rows()); }
};

struct OracleSettings {
  int samples = 0;  // 0 = use the simulation grid (step_count + 1 points)
  int iters = 200000;
  double resolution = 1e-3;  // lattice spacing for the independent grid check
};

/// Fully validated scenario. Derived fields (bounds, resolved K_mu) are
/// populated during load; construction bypassing load_scenario skips checks.
struct ScenarioSpec {
  std::string name = "scenario";
  CommGraph graph;
  std::vector<AgentSpec> agents;
  AlgorithmParams params;
  bool k_mu_auto = true;  // params.K_mu was resolved as N * K_g
  double horizon = 30.0;  // seconds
  double step = 1e-3;     // integration step, must divide the horizon
  OracleSettings oracle;

  std::vector<FunctionBounds> agent_bounds;  // derived per agent
  double K_f = 0.0;  // shared bounds over all agents (max of the per-agent ones)
  double K_g = 0.0;
  std::vector<std::string> warnings;  // non-fatal findings, e.g. K_mu below N*K_g

  int agent_count() const { return static_cast<int>(agents.size()); }
  int constraint_rows() const {
    return agents.empty() ? 0 : agents.front().constraint.rows();
  }
  int total_output_dim() const;
  int step_count() const;  // horizon / step, exactly
};

/// Carries every violation found during validation, one message each; the
/// messages name the broken modeling assumption where one applies.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// Reads and fully validates a scenario file. Throws ScenarioError listing all
// violations found (parse errors, structural problems, assumption failures).
ScenarioSpec load_scenario(const std::string& path);

// Same validation applied to in-memory text; origin labels error messages.
ScenarioSpec parse_scenario_text(const std::string& text, const std::string& origin);

// Canonical serialization: fully-expanded fields, sorted keys, fixed layout.
// Loading the emitted text reproduces an identical spec.
std::string canonical_text(const ScenarioSpec& spec);

// FNV-1a over the canonical text, as 16 hex digits.
std::string scenario_hash(const ScenarioSpec& spec);
std::uint64_t fnv1a64(std::string_view bytes);

// Initial states for one run: explicit vectors as given, ranged ones drawn
// per component from the seeded generator, optionally rejection-sampled until
// the implied output is inside the agent's box.
std::vector<Eigen::VectorXd> draw_initial_states(const ScenarioSpec& spec,
                                                 std::uint64_t seed);

}  // namespace saddle
