#pragma once

#include "chapball/integrate.hpp"

namespace chapball {

/// How a monitored quantity is judged: integrals by drift from the initial
/// value, residuals by their largest magnitude along the trajectory.
enum class CheckKind { Integral, Residual };

struct CheckSpec {
  std::string name;
  CheckKind kind = CheckKind::Integral;
  double tolerance = 1e-8;
  bool enforced = true;  // informational monitors never fail the run
  std::string note;
};

struct CheckReport {
  std::string name;
  double initial = 0.0;
  double max_abs_value = 0.0;
  double max_abs_drift = 0.0;
  double max_rel_drift = 0.0;
  double metric = 0.0;  // the number compared against the tolerance
  double tolerance = 0.0;
  bool enforced = true;
  bool passed = true;
  std::string note;
};

struct MonitorReport {
  std::vector<CheckReport> checks;
  bool all_passed = true;
};

/// Default tolerance/kind table for the named checks; F4 and F4tilde are
/// enforced only at the ε values where they are first integrals (ε = 1
/// and ε = -1 respectively), and are reported otherwise.
CheckSpec default_check_spec(const std::string& name, double epsilon);

/// Evaluates the checks recorded in the trajectory against their specs.
/// Throws when a spec names a check the trajectory does not carry.
MonitorReport monitor_suite(const Trajectory& trajectory,
                            const std::vector<CheckSpec>& specs);

}  // namespace chapball
