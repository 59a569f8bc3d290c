#pragma once

#include <optional>

#include <json.hpp>

#include "chapball/monitors.hpp"
#include "chapball/sampling.hpp"
#include "chapball/systems.hpp"

namespace chapball {

/// A fully-resolved simulation scenario: system, dimension, geometry,
/// inertia, admissible initial state, integrator settings, and the checks
/// to monitor. Parsed from a single JSON document; physical quantities are
/// SI, and ε may be given directly in place of the radii.
struct Scenario {
  std::string name;
  SystemKind system = SystemKind::NonrubberReduced;
  int n = 3;
  GeometryParams geom;
  std::optional<InertiaSpec> inertia;
  Vec initial;
  IntegratorConfig integrator;
  std::vector<CheckSpec> checks;
  std::uint64_t seed = 0;

  const InertiaSpec& spec() const { return *inertia; }
};

Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario_file(const std::string& path);

struct ScenarioResult {
  Trajectory trajectory;
  MonitorReport report;
  double runtime_seconds = 0.0;
};

/// Validates the initial state (throws naming the violated residual) and
/// integrates, then evaluates the scenario's checks.
ScenarioResult run_scenario(const Scenario& scenario);

/// Trajectory CSV: header `t,<state...>,<checks...>`, 17 significant
/// digits so values round-trip exactly.
void write_trajectory_csv(const Trajectory& trajectory,
                          const std::string& path);

nlohmann::json report_to_json(const Scenario& scenario,
                              const ScenarioResult& result);

}  // namespace chapball
