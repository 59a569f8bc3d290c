#pragma once

// Test-only oracles, kept independent of the library code paths they check.

#include <functional>

#include "chapball/types.hpp"

namespace oracles {

using chapball::Mat;
using chapball::Vec;

inline Eigen::Vector3d cross(const Vec& x, const Vec& y) {
  return Eigen::Vector3d(x(1) * y(2) - x(2) * y(1),
                         x(2) * y(0) - x(0) * y(2),
                         x(0) * y(1) - x(1) * y(0));
}

/// Hand-coded classical rolling equations in vector form:
///   k = I ω + D ω - D(ω,γ)γ,   k̇ = k×ω,   γ̇ = ε γ×ω,
/// with I = diag(I1,I2,I3). Everything is built from 3×3 dense algebra
/// with no shared code with the library.
struct Chap3D {
  Eigen::Vector3d I;
  double D;
  double epsilon;

  Eigen::Vector3d momentum(const Vec& omega, const Vec& gamma) const {
    Eigen::Vector3d k = I.asDiagonal() * omega + D * omega;
    k -= D * omega.dot(gamma) * Eigen::Vector3d(gamma);
    return k;
  }

  Eigen::Vector3d omega_from_k(const Vec& k, const Vec& gamma) const {
    Eigen::Matrix3d A = (I.array() + D).matrix().asDiagonal();
    A -= D * gamma * gamma.transpose();
    return A.ldlt().solve(Eigen::Vector3d(k));
  }

  void field(const Vec& k, const Vec& gamma, Eigen::Vector3d& k_dot,
             Eigen::Vector3d& gamma_dot) const {
    const Eigen::Vector3d omega = omega_from_k(k, gamma);
    k_dot = cross(k, omega);
    gamma_dot = epsilon * cross(gamma, omega);
  }
};

/// Richardson-extrapolated directional derivative d/dt f(x + t v) at t = 0,
/// accurate to ~1e-12 at unit scales.
inline double directional_derivative(const std::function<double(const Vec&)>& f,
                                     const Vec& x, const Vec& v,
                                     double h = 1e-4) {
  const double d1 = (f(x + h * v) - f(x - h * v)) / (2.0 * h);
  const double d2 = (f(x + 0.5 * h * v) - f(x - 0.5 * h * v)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

/// Richardson-extrapolated central-difference gradient (error ~ h^4).
inline Vec gradient(const std::function<double(const Vec&)>& f, const Vec& x,
                    double h = 1e-4) {
  Vec g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    Vec e = Vec::Zero(x.size());
    e(i) = 1.0;
    const double d1 = (f(x + h * e) - f(x - h * e)) / (2.0 * h);
    const double d2 = (f(x + 0.5 * h * e) - f(x - 0.5 * h * e)) / h;
    g(i) = (4.0 * d2 - d1) / 3.0;
  }
  return g;
}

}  // namespace oracles
