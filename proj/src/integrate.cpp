#include "chapball/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace chapball {

void IntegratorConfig::validate() const {
  if (h <= 0.0) throw std::invalid_argument("IntegratorConfig: h must be > 0");
  if (atol <= 0.0 || rtol <= 0.0) {
    throw std::invalid_argument("IntegratorConfig: tolerances must be > 0");
  }
  if (t_end <= 0.0) {
    throw std::invalid_argument("IntegratorConfig: t_end must be > 0");
  }
  if (stride < 1) {
    throw std::invalid_argument("IntegratorConfig: stride must be >= 1");
  }
}

Vec rk4_step(const FlowSystem& system, const Vec& x, double h) {
  const Vec k1 = system.field(x);
  const Vec k2 = system.field(x + 0.5 * h * k1);
  const Vec k3 = system.field(x + 0.5 * h * k2);
  const Vec k4 = system.field(x + h * k3);
  return x + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4);
}

namespace {

// Dormand-Prince 5(4) pair.
struct Dopri45 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  // clang-format off
  static constexpr double
      a21 = 1.0/5,
      a31 = 3.0/40,       a32 = 9.0/40,
      a41 = 44.0/45,      a42 = -56.0/15,      a43 = 32.0/9,
      a51 = 19372.0/6561, a52 = -25360.0/2187, a53 = 64448.0/6561, a54 = -212.0/729,
      a61 = 9017.0/3168,  a62 = -355.0/33,     a63 = 46732.0/5247, a64 = 49.0/176,   a65 = -5103.0/18656,
      b1  = 35.0/384,     b3  = 500.0/1113,    b4  = 125.0/192,    b5  = -2187.0/6784, b6 = 11.0/84,
      e1  = 71.0/57600,   e3  = -71.0/16695,   e4  = 71.0/1920,    e5  = -17253.0/339200,
      e6  = 22.0/525,     e7  = -1.0/40;
  // clang-format on
};

struct StepResult {
  Vec x;
  double error;  // scaled error norm
};

StepResult dopri_step(const FlowSystem& sys, const Vec& x, double h,
                      double atol, double rtol) {
  using D = Dopri45;
  const Vec k1 = sys.field(x);
  const Vec k2 = sys.field(x + h * (D::a21 * k1));
  const Vec k3 = sys.field(x + h * (D::a31 * k1 + D::a32 * k2));
  const Vec k4 = sys.field(x + h * (D::a41 * k1 + D::a42 * k2 + D::a43 * k3));
  const Vec k5 = sys.field(
      x + h * (D::a51 * k1 + D::a52 * k2 + D::a53 * k3 + D::a54 * k4));
  const Vec k6 = sys.field(x + h * (D::a61 * k1 + D::a62 * k2 + D::a63 * k3 +
                                    D::a64 * k4 + D::a65 * k5));
  const Vec x5 = x + h * (D::b1 * k1 + D::b3 * k3 + D::b4 * k4 + D::b5 * k5 +
                          D::b6 * k6);
  const Vec k7 = sys.field(x5);
  const Vec err_vec = h * (D::e1 * k1 + D::e3 * k3 + D::e4 * k4 + D::e5 * k5 +
                           D::e6 * k6 + D::e7 * k7);

  double err = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    const double scale =
        atol + rtol * std::max(std::abs(x(i)), std::abs(x5(i)));
    err += std::pow(err_vec(i) / scale, 2);
  }
  return {x5, std::sqrt(err / static_cast<double>(x.size()))};
}

}  // namespace

Trajectory integrate(const FlowSystem& system, const IntegratorConfig& config,
                     const Vec& x0, const std::vector<std::string>& checks) {
  config.validate();
  if (x0.size() != system.dim()) {
    throw std::invalid_argument("integrate: state size mismatch for " +
                                system.name());
  }
  const std::string violation = system.validate_initial(x0);
  if (!violation.empty()) {
    throw std::invalid_argument("integrate: invalid initial state: " +
                                violation);
  }

  Trajectory traj;
  traj.state_labels = system.state_labels();
  traj.check_names = checks;

  const double blowup = 1e3 * system.residual_tolerance();
  auto record = [&](double t, const Vec& x) {
    traj.t.push_back(t);
    traj.states.push_back(x);
    Vec vals(static_cast<int>(checks.size()));
    for (std::size_t c = 0; c < checks.size(); ++c) {
      vals(static_cast<int>(c)) = system.check_value(checks[c], x);
    }
    traj.check_values.push_back(vals);
  };

  Vec x = x0;
  double t = 0.0;
  record(t, x);

  long step_count = 0;
  double h = config.h;
  while (t < config.t_end - 1e-14) {
    if (config.method == IntegratorConfig::Method::RK4) {
      const double step = std::min(config.h, config.t_end - t);
      x = rk4_step(system, x, step);
      traj.field_evaluations += 4;
      t += step;
    } else {
      // adaptive Dormand-Prince with standard step control
      bool accepted = false;
      while (!accepted) {
        const double step = std::min(h, config.t_end - t);
        const StepResult res =
            dopri_step(system, x, step, config.atol, config.rtol);
        traj.field_evaluations += 7;
        if (res.error <= 1.0 || step <= 1e-14) {
          x = res.x;
          t += step;
          accepted = true;
        }
        const double factor = std::clamp(
            0.9 * std::pow(std::max(res.error, 1e-10), -0.2), 0.2, 5.0);
        h = std::clamp(step * factor, 1e-14, config.t_end);
      }
    }

    if (config.projection) system.project(x);

    const double residual = system.constraint_residual(x);
    if (!std::isfinite(residual) || residual > blowup) {
      throw std::runtime_error(
          system.name() + ": constraint blow-up at t = " + std::to_string(t) +
          " (residual " + std::to_string(residual) + ")");
    }

    ++step_count;
    if (step_count % config.stride == 0 || t >= config.t_end - 1e-14) {
      record(t, x);
    }
  }
  return traj;
}

}  // namespace chapball
