#include "saddle/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "saddle/rng.hpp"

namespace saddle {

using nlohmann::json;

namespace {

// Local control-flow type for structural problems inside one section; the
// section loop converts these into accumulated violation messages.
struct ParseFail {
  std::string msg;
};

std::string join_lines(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& s : parts) {
    if (!out.empty()) out += '\n';
    out += s;
  }
  return out;
}

const json& field(const json& obj, const char* key, const std::string& ctx) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseFail{ctx + ": missing \"" + key + "\""};
  }
  return obj.at(key);
}

// Misspelled keys would otherwise fall back to defaults silently.
void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& ctx) {
  if (!obj.is_object()) return;  // shape errors are reported elsewhere
  std::string unknown;
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) unknown += (unknown.empty() ? "\"" : ", \"") + item.key() + "\"";
  }
  if (!unknown.empty()) throw ParseFail{ctx + ": unknown key(s) " + unknown};
}

double get_num(const json& obj, const char* key, double def, const std::string& ctx) {
  if (!obj.contains(key)) return def;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ParseFail{ctx + ": \"" + key + "\" must be a number"};
  return v.get<double>();
}

int get_int(const json& obj, const char* key, int def, const std::string& ctx) {
  if (!obj.contains(key)) return def;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw ParseFail{ctx + ": \"" + key + "\" must be an integer"};
  }
  return v.get<int>();
}

Eigen::VectorXd parse_vector(const json& node, const std::string& ctx) {
  if (!node.is_array()) throw ParseFail{ctx + ": expected an array of numbers"};
  Eigen::VectorXd v(static_cast<int>(node.size()));
  for (int k = 0; k < v.size(); ++k) {
    if (!node[k].is_number()) throw ParseFail{ctx + ": expected an array of numbers"};
    v[k] = node[k].get<double>();
  }
  return v;
}

Eigen::MatrixXd parse_matrix(const json& node, const std::string& ctx) {
  if (!node.is_array() || node.empty() || !node[0].is_array()) {
    throw ParseFail{ctx + ": expected a non-empty 2-D array"};
  }
  const int rows = static_cast<int>(node.size());
  const int cols = static_cast<int>(node[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = node[r];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw ParseFail{ctx + ": ragged rows"};
    }
    for (int c = 0; c < cols; ++c) {
      if (!row[c].is_number()) throw ParseFail{ctx + ": expected numeric entries"};
      m(r, c) = row[c].get<double>();
    }
  }
  return m;
}

AgentSpec parse_agent(const json& a, const std::string& ctx) {
  if (!a.is_object()) throw ParseFail{ctx + ": expected an object"};
  reject_unknown(a,
                 {"A", "B", "C", "x0", "x0_range", "output_in_box", "cost",
                  "constraint", "box"},
                 ctx);
  AgentSpec s;
  s.A = parse_matrix(field(a, "A", ctx), ctx + ".A");
  s.B = parse_matrix(field(a, "B", ctx), ctx + ".B");
  s.C = parse_matrix(field(a, "C", ctx), ctx + ".C");

  const bool has_x0 = a.contains("x0");
  const bool has_range = a.contains("x0_range");
  if (has_x0 == has_range) {
    throw ParseFail{ctx + ": provide exactly one of \"x0\" and \"x0_range\""};
  }
  if (has_x0) {
    s.x0 = parse_vector(a.at("x0"), ctx + ".x0");
  } else {
    const Eigen::VectorXd r = parse_vector(a.at("x0_range"), ctx + ".x0_range");
    if (r.size() != 2 || !(r[0] <= r[1])) {
      throw ParseFail{ctx + ".x0_range: expected [lo, hi] with lo <= hi"};
    }
    s.x0_lo = r[0];
    s.x0_hi = r[1];
    if (a.contains("output_in_box")) {
      if (!a.at("output_in_box").is_boolean()) {
        throw ParseFail{ctx + ".output_in_box: expected a boolean"};
      }
      s.output_in_box = a.at("output_in_box").get<bool>();
    }
  }

  const json& c = field(a, "cost", ctx);
  reject_unknown(c, {"w", "base", "amp", "freq"}, ctx + ".cost");
  s.cost.w = parse_vector(field(c, "w", ctx + ".cost"), ctx + ".cost.w");
  s.cost.base = parse_vector(field(c, "base", ctx + ".cost"), ctx + ".cost.base");
  s.cost.amp = parse_vector(field(c, "amp", ctx + ".cost"), ctx + ".cost.amp");
  s.cost.freq = parse_vector(field(c, "freq", ctx + ".cost"), ctx + ".cost.freq");

  const json& g = field(a, "constraint", ctx);
  reject_unknown(g, {"coef_base", "coef_amp", "coef_freq", "offset"},
                 ctx + ".constraint");
  s.constraint.coef_base =
      parse_matrix(field(g, "coef_base", ctx + ".constraint"), ctx + ".constraint.coef_base");
  s.constraint.coef_amp =
      parse_matrix(field(g, "coef_amp", ctx + ".constraint"), ctx + ".constraint.coef_amp");
  s.constraint.coef_freq =
      parse_matrix(field(g, "coef_freq", ctx + ".constraint"), ctx + ".constraint.coef_freq");
  s.constraint.offset =
      parse_vector(field(g, "offset", ctx + ".constraint"), ctx + ".constraint.offset");

  const json& b = field(a, "box", ctx);
  reject_unknown(b, {"lower", "upper"}, ctx + ".box");
  const Eigen::VectorXd lower = parse_vector(field(b, "lower", ctx + ".box"), ctx + ".box.lower");
  const Eigen::VectorXd upper = parse_vector(field(b, "upper", ctx + ".box"), ctx + ".box.upper");
  try {
    s.box = make_box(lower, upper);
  } catch (const std::invalid_argument& e) {
    throw ParseFail{"Assumption 2 violated (" + ctx + "): " + e.what()};
  }

  // Structural consistency across the sections.
  try {
    make_plant(s.A, s.B, s.C,
               s.x0 ? *s.x0 : Eigen::VectorXd::Zero(s.A.rows()));
  } catch (const std::invalid_argument& e) {
    throw ParseFail{ctx + ": " + e.what()};
  }
  const int p = s.output_dim();
  if (s.cost.base.size() != p || s.cost.amp.size() != p || s.cost.freq.size() != p ||
      s.cost.w.size() != p) {
    throw ParseFail{ctx + ".cost: arrays must have the output dimension " +
                    std::to_string(p)};
  }
  const int q = s.constraint.rows();
  if (q < 1) {
    throw ParseFail{ctx + ".constraint: at least one row required "
                    "(use an all-zero row for unconstrained agents)"};
  }
  if (s.constraint.coef_base.cols() != p || s.constraint.coef_amp.rows() != q ||
      s.constraint.coef_amp.cols() != p || s.constraint.coef_freq.rows() != q ||
      s.constraint.coef_freq.cols() != p || s.constraint.offset.size() != q) {
    throw ParseFail{ctx + ".constraint: coefficient blocks must share the shape " +
                    std::to_string(q) + " x " + std::to_string(p)};
  }
  if (s.box.dim() != p) {
    throw ParseFail{ctx + ".box: dimension must equal the output dimension " +
                    std::to_string(p)};
  }
  return s;
}

json emit_vector(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int k = 0; k < v.size(); ++k) a.push_back(v[k]);
  return a;
}

json emit_matrix(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    a.push_back(row);
  }
  return a;
}

// Conservative time-independent upper bound of one aggregated constraint row
// at a fixed stacked output: each sinusoid is replaced by its amplitude.
Eigen::VectorXd aggregate_sup(const std::vector<AgentSpec>& agents,
                              const std::vector<Eigen::VectorXd>& ys) {
  const int q = agents.front().constraint.rows();
  Eigen::VectorXd total = Eigen::VectorXd::Zero(q);
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const AffineConstraint& g = agents[i].constraint;
    total += g.coef_base * ys[i] + g.coef_amp.cwiseAbs() * ys[i].cwiseAbs() - g.offset;
  }
  return total;
}

}  // namespace

int ScenarioSpec::total_output_dim() const {
  int p = 0;
  for (const auto& a : agents) p += a.output_dim();
  return p;
}

int ScenarioSpec::step_count() const {
  return static_cast<int>(std::llround(horizon / step));
}

ScenarioError::ScenarioError(std::vector<std::string> violations)
    : std::runtime_error(join_lines(violations)), violations_(std::move(violations)) {}

ScenarioSpec parse_scenario_text(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError({origin + ": " + e.what()});
  }
  if (!j.is_object()) throw ScenarioError({origin + ": top level must be an object"});

  std::vector<std::string> errs;
  ScenarioSpec spec;
  try {
    reject_unknown(j, {"name", "graph", "agents", "params", "oracle"}, origin);
  } catch (const ParseFail& f) {
    errs.push_back(f.msg);
  }

  if (j.contains("name")) {
    if (j.at("name").is_string()) {
      spec.name = j.at("name").get<std::string>();
    } else {
      errs.push_back("name: expected a string");
    }
  }

  bool graph_ok = false;
  try {
    const json& g = field(j, "graph", "graph");
    reject_unknown(g, {"nodes", "edges"}, "graph");
    const int nodes = [&] {
      if (!g.contains("nodes")) throw ParseFail{"graph: missing \"nodes\""};
      if (!g.at("nodes").is_number_integer()) {
        throw ParseFail{"graph: \"nodes\" must be an integer"};
      }
      return g.at("nodes").get<int>();
    }();
    const json& edges_j = field(g, "edges", "graph");
    if (!edges_j.is_array()) throw ParseFail{"graph.edges: expected an array of pairs"};
    std::vector<std::pair<int, int>> edges;
    for (const json& e : edges_j) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
          !e[1].is_number_integer()) {
        throw ParseFail{"graph.edges: each edge must be a pair of node indices"};
      }
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    spec.graph = build_graph(edges, nodes);
    graph_ok = true;
  } catch (const ParseFail& f) {
    errs.push_back(f.msg);
  } catch (const std::invalid_argument& e) {
    errs.push_back(e.what());  // build_graph names Assumption 1 where relevant
  }

  std::size_t agent_count = 0;
  bool agents_ok = true;
  try {
    const json& agents_j = field(j, "agents", "agents");
    if (!agents_j.is_array() || agents_j.empty()) {
      throw ParseFail{"agents: expected a non-empty array"};
    }
    agent_count = agents_j.size();
    for (std::size_t k = 0; k < agent_count; ++k) {
      const std::string ctx = "agent " + std::to_string(k);
      try {
        spec.agents.push_back(parse_agent(agents_j[k], ctx));
      } catch (const ParseFail& f) {
        errs.push_back(f.msg);
        agents_ok = false;
      }
    }
  } catch (const ParseFail& f) {
    errs.push_back(f.msg);
    agents_ok = false;
  }

  bool params_ok = true;
  try {
    const json params_j = j.value("params", json::object());
    if (!params_j.is_object()) throw ParseFail{"params: expected an object"};
    reject_unknown(params_j, {"epsilon", "K_mu", "sigma", "iota", "T", "h", "mode"},
                   "params");
    spec.params.epsilon = get_num(params_j, "epsilon", 1.0, "params");
    spec.params.sigma = get_num(params_j, "sigma", 0.5, "params");
    spec.params.iota = get_num(params_j, "iota", 0.1, "params");
    spec.horizon = get_num(params_j, "T", 30.0, "params");
    spec.step = get_num(params_j, "h", 1e-3, "params");
    if (params_j.contains("mode")) {
      const json& m = params_j.at("mode");
      if (!m.is_string()) throw ParseFail{"params.mode: expected a string"};
      const std::string mode = m.get<std::string>();
      if (mode == "continuous") {
        spec.params.mode = CommMode::continuous;
      } else if (mode == "event_triggered" || mode == "event") {
        spec.params.mode = CommMode::event_triggered;
      } else {
        throw ParseFail{"params.mode: expected \"continuous\" or \"event_triggered\""};
      }
    }
    if (params_j.contains("K_mu")) {
      const json& km = params_j.at("K_mu");
      if (km.is_string() && km.get<std::string>() == "auto") {
        spec.k_mu_auto = true;
      } else if (km.is_number()) {
        spec.k_mu_auto = false;
        spec.params.K_mu = km.get<double>();
      } else {
        throw ParseFail{"params.K_mu: expected a number or \"auto\""};
      }
    }
    if (!(spec.params.epsilon > 0.0)) throw ParseFail{"params.epsilon must be positive"};
    if (!(spec.params.sigma > 0.0)) throw ParseFail{"params.sigma must be positive"};
    if (!(spec.params.iota > 0.0)) throw ParseFail{"params.iota must be positive"};
    if (!(spec.horizon > 0.0)) throw ParseFail{"params.T must be positive"};
    if (!(spec.step > 0.0) || spec.step > spec.horizon) {
      throw ParseFail{"params.h must lie in (0, T]"};
    }
    const double steps = spec.horizon / spec.step;
    if (std::abs(steps - std::llround(steps)) > 1e-9 * std::max(steps, 1.0)) {
      throw ParseFail{"params: T must be an integer multiple of h"};
    }
  } catch (const ParseFail& f) {
    errs.push_back(f.msg);
    params_ok = false;
  }

  try {
    const json oracle_j = j.value("oracle", json::object());
    if (!oracle_j.is_object()) throw ParseFail{"oracle: expected an object"};
    reject_unknown(oracle_j, {"samples", "iters", "resolution"}, "oracle");
    spec.oracle.samples = get_int(oracle_j, "samples", 0, "oracle");
    spec.oracle.iters = get_int(oracle_j, "iters", 200000, "oracle");
    spec.oracle.resolution = get_num(oracle_j, "resolution", 1e-3, "oracle");
    if (spec.oracle.samples != 0 && spec.oracle.samples < 2) {
      throw ParseFail{"oracle.samples must be 0 (simulation grid) or at least 2"};
    }
    if (spec.oracle.iters < 1) throw ParseFail{"oracle.iters must be positive"};
    if (!(spec.oracle.resolution > 0.0)) {
      throw ParseFail{"oracle.resolution must be positive"};
    }
  } catch (const ParseFail& f) {
    errs.push_back(f.msg);
  }

  const bool all_agents = agents_ok && spec.agents.size() == agent_count;
  if (graph_ok && all_agents &&
      spec.graph.node_count != static_cast<int>(spec.agents.size())) {
    errs.push_back("scenario: agent count " + std::to_string(spec.agents.size()) +
                   " does not match graph node count " +
                   std::to_string(spec.graph.node_count));
  }
  bool shared_q = all_agents;
  if (all_agents) {
    const int q = spec.agents.front().constraint.rows();
    for (std::size_t k = 1; k < spec.agents.size(); ++k) {
      if (spec.agents[k].constraint.rows() != q) {
        errs.push_back("scenario: all agents must share one constraint row count");
        shared_q = false;
        break;
      }
    }
  }

  if (all_agents) {
    for (std::size_t k = 0; k < spec.agents.size(); ++k) {
      const AgentSpec& a = spec.agents[k];
      const std::string who = "agent " + std::to_string(k);
      if (a.cost.w.size() > 0 && a.cost.w.minCoeff() < 0.0) {
        errs.push_back("Assumption 2 violated (" + who +
                       "): negative cost weight breaks convexity");
      }
      const AgentPlant plant{a.A, a.B, a.C, Eigen::VectorXd::Zero(a.A.rows())};
      if (!check_assumption4(plant)) {
        bool cb_full_rank = true;
        try {
          synthesize_gains(plant);
        } catch (const std::invalid_argument&) {
          cb_full_rank = false;
        }
        errs.push_back("Assumption 4 violated (" + who + "): " +
                       (cb_full_rank ? "(A, B) is not controllable"
                                     : "rank(C B) is below the output dimension"));
      }
    }
  }

  if (all_agents && params_ok) {
    bool bounds_ok = true;
    for (std::size_t k = 0; k < spec.agents.size(); ++k) {
      const AgentSpec& a = spec.agents[k];
      try {
        spec.agent_bounds.push_back(
            compute_bounds(a.cost, a.constraint, a.box, spec.horizon));
      } catch (const std::invalid_argument& e) {
        errs.push_back("Assumption 2 violated (agent " + std::to_string(k) +
                       "): " + std::string(e.what()));
        bounds_ok = false;
      }
    }
    if (bounds_ok) {
      for (const auto& b : spec.agent_bounds) {
        spec.K_f = std::max(spec.K_f, b.K_f);
        spec.K_g = std::max(spec.K_g, b.K_g);
      }
      const double required = spec.agents.size() * spec.K_g;
      if (spec.k_mu_auto) {
        spec.params.K_mu = required;
      } else if (!(spec.params.K_mu > 0.0)) {
        errs.push_back("params.K_mu must be positive or \"auto\"");
      } else if (spec.params.K_mu < required) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "params.K_mu = %g is below N*K_g = %g; the regret and fit "
                      "guarantees assume at least N*K_g",
                      spec.params.K_mu, required);
        spec.warnings.emplace_back(buf);
      }
    }
  }

  if (all_agents && shared_q) {
    // Feasible-set certificate at a few candidate outputs: a candidate works
    // when the aggregated rows stay nonpositive for every time, bounding each
    // sinusoidal coefficient by its amplitude.
    std::vector<std::vector<Eigen::VectorXd>> candidates(3);
    for (const AgentSpec& a : spec.agents) {
      candidates[0].push_back(project_box(a.box, Eigen::VectorXd::Zero(a.box.dim())));
      candidates[1].push_back((a.box.lower + a.box.upper) / 2.0);
      candidates[2].push_back(a.box.lower);
    }
    bool certified = false;
    for (const auto& ys : candidates) {
      if (aggregate_sup(spec.agents, ys).maxCoeff() <= 0.0) {
        certified = true;
        break;
      }
    }
    if (!certified) {
      errs.push_back(
          "Assumption 3 violated: no tested output certifies the coupled "
          "constraint for every time (tried clamped zero, box centers, lower "
          "corners)");
    }
  }

  if (!errs.empty()) throw ScenarioError(std::move(errs));
  return spec;
}

ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError({path + ": cannot open"});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path);
}

std::string canonical_text(const ScenarioSpec& spec) {
  json j;
  j["name"] = spec.name;

  json graph;
  graph["nodes"] = spec.graph.node_count;
  json edges = json::array();
  for (int i = 0; i < spec.graph.node_count; ++i) {
    for (int nb : spec.graph.neighbors[i]) {
      if (nb > i) edges.push_back(json::array({i, nb}));
    }
  }
  graph["edges"] = edges;
  j["graph"] = graph;

  json agents = json::array();
  for (const AgentSpec& a : spec.agents) {
    json node;
    node["A"] = emit_matrix(a.A);
    node["B"] = emit_matrix(a.B);
    node["C"] = emit_matrix(a.C);
    if (a.x0) {
      node["x0"] = emit_vector(*a.x0);
    } else {
      node["x0_range"] = json::array({a.x0_lo, a.x0_hi});
      node["output_in_box"] = a.output_in_box;
    }
    node["cost"] = {{"w", emit_vector(a.cost.w)},
                    {"base", emit_vector(a.cost.base)},
                    {"amp", emit_vector(a.cost.amp)},
                    {"freq", emit_vector(a.cost.freq)}};
    node["constraint"] = {{"coef_base", emit_matrix(a.constraint.coef_base)},
                          {"coef_amp", emit_matrix(a.constraint.coef_amp)},
                          {"coef_freq", emit_matrix(a.constraint.coef_freq)},
                          {"offset", emit_vector(a.constraint.offset)}};
    node["box"] = {{"lower", emit_vector(a.box.lower)},
                   {"upper", emit_vector(a.box.upper)}};
    agents.push_back(node);
  }
  j["agents"] = agents;

  j["params"] = {{"epsilon", spec.params.epsilon},
                 {"K_mu", spec.k_mu_auto ? json("auto") : json(spec.params.K_mu)},
                 {"sigma", spec.params.sigma},
                 {"iota", spec.params.iota},
                 {"T", spec.horizon},
                 {"h", spec.step},
                 {"mode", spec.params.mode == CommMode::continuous ? "continuous"
                                                                   : "event_triggered"}};
  j["oracle"] = {{"samples", spec.oracle.samples},
                 {"iters", spec.oracle.iters},
                 {"resolution", spec.oracle.resolution}};
  return j.dump(2) + "\n";
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string scenario_hash(const ScenarioSpec& spec) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_text(spec))));
  return buf;
}

std::vector<Eigen::VectorXd> draw_initial_states(const ScenarioSpec& spec,
                                                 std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Eigen::VectorXd> states;
  states.reserve(spec.agents.size());
  for (std::size_t k = 0; k < spec.agents.size(); ++k) {
    const AgentSpec& a = spec.agents[k];
    if (a.x0) {
      states.push_back(*a.x0);
      continue;
    }
    Eigen::VectorXd x(a.state_dim());
    bool ok = false;
    for (int attempt = 0; attempt < 10000; ++attempt) {
      for (int i = 0; i < x.size(); ++i) x[i] = rng.uniform(a.x0_lo, a.x0_hi);
      if (!a.output_in_box || a.box.contains(a.C * x)) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw std::runtime_error("scenario: could not draw an initial state whose "
                               "output lies in the box (agent " +
                               std::to_string(k) + ")");
    }
    states.push_back(x);
  }
  return states;
}

}  // namespace saddle
