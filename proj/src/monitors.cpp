#include "chapball/monitors.hpp"

#include <algorithm>
#include <cmath>

namespace chapball {

CheckSpec default_check_spec(const std::string& name, double epsilon) {
  CheckSpec spec;
  spec.name = name;
  if (name == "energy" || name == "k-norm" || name == "F1" || name == "F2" ||
      name == "F3") {
    spec.kind = CheckKind::Integral;
    spec.tolerance = 1e-8;
  } else if (name == "gamma-norm") {
    spec.kind = CheckKind::Residual;
    spec.tolerance = 1e-9;
  } else if (name == "frame-orth" || name == "g-orth" || name == "no-twist") {
    spec.kind = CheckKind::Residual;
    spec.tolerance = 1e-8;
  } else if (name == "p-orth") {
    spec.kind = CheckKind::Residual;
    spec.tolerance = 1e-10;
  } else if (name == "F4") {
    spec.kind = CheckKind::Integral;
    spec.tolerance = 1e-8;
    if (epsilon != 1.0) {
      spec.enforced = false;
      spec.note = "not an integral here (requires epsilon = 1)";
    }
  } else if (name == "F4tilde") {
    spec.kind = CheckKind::Integral;
    spec.tolerance = 1e-8;
    if (epsilon != -1.0) {
      spec.enforced = false;
      spec.note = "not an integral here (requires epsilon = -1)";
    }
  } else {
    throw std::invalid_argument("default_check_spec: unknown check \"" + name +
                                "\"");
  }
  return spec;
}

MonitorReport monitor_suite(const Trajectory& trajectory,
                            const std::vector<CheckSpec>& specs) {
  if (trajectory.size() == 0) {
    throw std::invalid_argument("monitor_suite: empty trajectory");
  }
  MonitorReport report;
  for (const CheckSpec& spec : specs) {
    const auto it = std::find(trajectory.check_names.begin(),
                              trajectory.check_names.end(), spec.name);
    if (it == trajectory.check_names.end()) {
      throw std::invalid_argument("monitor_suite: trajectory has no check \"" +
                                  spec.name + "\"");
    }
    const int col =
        static_cast<int>(it - trajectory.check_names.begin());

    CheckReport cr;
    cr.name = spec.name;
    cr.tolerance = spec.tolerance;
    cr.enforced = spec.enforced;
    cr.note = spec.note;
    cr.initial = trajectory.check_values.front()(col);
    for (const Vec& vals : trajectory.check_values) {
      const double v = vals(col);
      cr.max_abs_value = std::max(cr.max_abs_value, std::abs(v));
      cr.max_abs_drift = std::max(cr.max_abs_drift, std::abs(v - cr.initial));
    }
    const double scale = std::abs(cr.initial);
    cr.max_rel_drift =
        (scale > 1e-12) ? cr.max_abs_drift / scale : cr.max_abs_drift;

    cr.metric = (spec.kind == CheckKind::Residual) ? cr.max_abs_value
                                                   : cr.max_rel_drift;
    cr.passed = !spec.enforced || cr.metric < spec.tolerance;
    report.all_passed = report.all_passed && cr.passed;
    report.checks.push_back(std::move(cr));
  }
  return report;
}

}  // namespace chapball
