#pragma once

#include <memory>
#include <string>
#include <vector>

#include "chapball/types.hpp"

namespace chapball {

struct IntegratorConfig {
  enum class Method { RK4, RK45 };

  Method method = Method::RK4;
  double h = 1e-3;       // fixed step (RK4) / initial step (RK45)
  double atol = 1e-10;   // RK45 absolute tolerance
  double rtol = 1e-10;   // RK45 relative tolerance
  bool projection = true;
  double t_end = 10.0;
  int stride = 1;  // record every stride-th accepted step

  void validate() const;
};

/// A dynamical system exposed to the integrator as a flat ODE: packing,
/// vector field, constraint projection, residual validation, and named
/// monitored quantities.
class FlowSystem {
 public:
  virtual ~FlowSystem() = default;

  virtual std::string name() const = 0;
  virtual int dim() const = 0;
  virtual Vec field(const Vec& x) const = 0;
  /// Pull the state back onto the constraint manifold (minimal change).
  virtual void project(Vec& x) const = 0;
  /// Largest constraint residual of the state.
  virtual double constraint_residual(const Vec& x) const = 0;
  /// Empty string when admissible; otherwise names the violated residual.
  virtual std::string validate_initial(const Vec& x) const = 0;
  /// Residual tolerance used for validation and blow-up detection.
  virtual double residual_tolerance() const = 0;

  virtual std::vector<std::string> state_labels() const = 0;
  /// Monitors this system understands; scenarios enable all of them unless
  /// they name a subset.
  virtual std::vector<std::string> check_names() const = 0;
  /// Value of a named monitored quantity; throws on unknown names.
  virtual double check_value(const std::string& name, const Vec& x) const = 0;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<Vec> states;
  std::vector<std::string> state_labels;
  std::vector<std::string> check_names;
  std::vector<Vec> check_values;  // one entry per sample, aligned with t
  std::size_t field_evaluations = 0;

  std::size_t size() const { return t.size(); }
};

/// Integrates the system from x0 over [0, t_end]. Records state and the
/// requested checks every `stride` accepted steps (the initial and final
/// states are always recorded). Aborts with an exception naming the time
/// of failure when a constraint residual exceeds 1e3× the system's
/// tolerance.
Trajectory integrate(const FlowSystem& system, const IntegratorConfig& config,
                     const Vec& x0, const std::vector<std::string>& checks);

/// Single fixed RK4 step (exposed for convergence/order tests).
Vec rk4_step(const FlowSystem& system, const Vec& x, double h);

}  // namespace chapball
