#pragma once

#include <cstdint>
#include <string>

#include "saddle/oracle.hpp"
#include "saddle/scenario.hpp"
#include "saddle/sim.hpp"

namespace saddle {

struct ExperimentOptions {
  std::uint64_t seed = 42;
  bool plots = true;
  std::string out_dir = "out";
};

struct ExperimentResult {
  OracleResult oracle;
  Trajectory trajectory;
  MetricsReport metrics;
};

// The scenario's sampled clairvoyant program (oracle.samples == 0 picks the
// simulation grid).
SampledProgram scenario_program(const ScenarioSpec& spec);

// Clairvoyant solve with a sidecar cache keyed by the scenario hash. The
// start point comes from the scenario hash, not the run seed, so one scenario
// always yields one y*. Pass an empty cache_dir to force a fresh solve.
OracleResult clairvoyant_for(const ScenarioSpec& spec, const std::string& cache_dir);

// Oracle solve + closed-loop run + metrics + artifact emission under out_dir:
// trajectory.csv, metrics.csv, manifest.json, scenario_echo.json, optional
// SVG plots, and triggers.csv for event-triggered runs. Throws on failure.
ExperimentResult run_experiment(const ScenarioSpec& spec, CommMode mode,
                                const ExperimentOptions& opt);

struct ModeComparison {
  ExperimentResult continuous_run;
  ExperimentResult triggered_run;
  double savings_ratio = 0.0;  // triggered broadcasts / continuous broadcasts
};

// Both modes on identical seeds into per-mode subdirectories, plus a
// side-by-side comparison.csv of final metrics and broadcast counts.
ModeComparison compare_modes(const ScenarioSpec& spec, const ExperimentOptions& opt);

// Event-mode runs across sigma scalings {0.2, 1, 4} of the scenario value,
// summarized in sweep.csv (+ sweep.svg); the clairvoyant solve is shared.
void sweep_sigma(const ScenarioSpec& spec, const ExperimentOptions& opt);

}  // namespace saddle
