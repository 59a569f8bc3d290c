#include "chapball/ball.hpp"

namespace chapball {

BallState::BallState(SkewMatrix k_, UnitVector gamma_, std::optional<Mat> g_)
    : k(std::move(k_)), gamma(std::move(gamma_)), g(std::move(g_)) {
  if (k.dim() != gamma.dim()) {
    throw std::invalid_argument("BallState: k and gamma dimensions differ");
  }
  if (g.has_value()) {
    const int n = gamma.dim();
    if (g->rows() != n || g->cols() != n) {
      throw std::invalid_argument("BallState: attitude has wrong size");
    }
    const double breach =
        (g->transpose() * *g - Mat::Identity(n, n)).cwiseAbs().maxCoeff();
    if (breach > tol::frame || g->determinant() < 0.0) {
      throw std::invalid_argument("BallState: attitude is not a rotation");
    }
  }
}

BallRates reduced_field(const InertiaSpec& spec, const GeometryParams& geom,
                        const Mat& k, const Vec& gamma) {
  const Mat omega = kappa_solve(spec, geom.D, gamma, k);
  BallRates rates;
  rates.k_dot = commutator(k, omega);
  rates.gamma_dot = -geom.epsilon * (omega * gamma);
  return rates;
}

BallRates full_field(const InertiaSpec& spec, const GeometryParams& geom,
                     const Mat& k, const Mat& g, const Vec& gamma) {
  const Mat omega = kappa_solve(spec, geom.D, gamma, k);
  BallRates rates;
  rates.k_dot = commutator(k, omega);
  rates.gamma_dot = -geom.epsilon * (omega * gamma);
  rates.g_dot = g * omega;
  return rates;
}

double energy(const InertiaSpec& spec, const GeometryParams& geom,
              const Mat& k, const Vec& gamma) {
  const Mat omega = kappa_solve(spec, geom.D, gamma, k);
  return 0.5 * pairing(k, omega);
}

Mat omega_dot(const InertiaSpec& spec, const GeometryParams& geom,
              const Mat& omega, const Vec& gamma) {
  const Mat k = kappa_apply(spec, geom.D, gamma, omega);
  const Vec gamma_dot = -geom.epsilon * (omega * gamma);
  // d/dt of D·proj_v(ω,γ) at fixed ω: the γ̇ terms below; the ω̇ terms
  // assemble into κ(ω̇).
  const Mat t1 = omega * gamma_dot * gamma.transpose();
  const Mat t2 = omega * gamma * gamma_dot.transpose();
  const Mat drift = t1 + t2 - t1.transpose() - t2.transpose();
  return kappa_solve(spec, geom.D, gamma,
                     commutator(k, omega) - geom.D * drift);
}

BallRates reduced_field_omega(const InertiaSpec& spec,
                              const GeometryParams& geom, const Mat& omega,
                              const Vec& gamma) {
  BallRates rates;
  rates.k_dot = omega_dot(spec, geom, omega, gamma);  // ω̇ in this chart
  rates.gamma_dot = -geom.epsilon * (omega * gamma);
  return rates;
}

FixedFrameDiag diag_fixed_frame(const InertiaSpec& spec,
                                const GeometryParams& geom,
                                const BallState& state) {
  if (!state.g.has_value()) {
    throw std::invalid_argument("diag_fixed_frame: state carries no attitude");
  }
  if (!geom.has_radii()) {
    throw std::invalid_argument("diag_fixed_frame: geometry has no radii");
  }
  const Mat& g = *state.g;
  const Vec& gamma = state.gamma.v();
  const double sign = geom.contact_sign();
  const double offset = *geom.sigma + sign * *geom.rho;  // σ±ρ

  const Mat omega = kappa_solve(spec, geom.D, gamma, state.k.m());
  const Mat Omega = g * omega * g.transpose();
  const Vec Gamma = g * gamma;

  FixedFrameDiag diag;
  diag.Gamma = Gamma;
  diag.Omega = Omega;
  diag.r = offset * Gamma;
  diag.V = sign * *geom.rho * (Omega * Gamma);
  diag.M = g * spec.apply(omega) * g.transpose();

  const Mat Omega_dot =
      g * omega_dot(spec, geom, omega, gamma) * g.transpose();
  const Vec Gamma_dot = (sign * *geom.rho / offset) * (Omega * Gamma);
  diag.Lambda = sign * *geom.mass * *geom.rho *
                (Omega_dot * Gamma + Omega * Gamma_dot);
  return diag;
}

Vec vector_inertia_3d(const InertiaSpec& spec) {
  if (spec.n() != 3) {
    throw std::invalid_argument("vector_inertia_3d: need n = 3");
  }
  const Mat& M = spec.matrix();
  Mat offdiag = M;
  offdiag.diagonal().setZero();
  if (offdiag.cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument(
        "vector_inertia_3d: operator is not diagonal in the wedge basis");
  }
  // hat(e₁) spans E₂∧E₃, hat(e₂) spans E₁∧E₃, hat(e₃) spans E₁∧E₂.
  Vec I(3);
  I << M(2, 2), M(1, 1), M(0, 0);
  return I;
}

Integrals3D integrals_3d(const InertiaSpec& spec, const GeometryParams& geom,
                         const Mat& k, const Vec& gamma) {
  if (gamma.size() != 3) {
    throw std::invalid_argument("integrals_3d: need n = 3");
  }
  const Mat omega = kappa_solve(spec, geom.D, gamma, k);
  const Vec kv = unhat(k);
  const Vec wv = unhat(omega);
  const Vec I = vector_inertia_3d(spec);
  const double D = geom.D;

  Integrals3D f;
  f.F1 = gamma.squaredNorm();
  f.F2 = 0.5 * kv.dot(wv);
  f.F3 = kv.squaredNorm();
  f.F4 = kv.dot(gamma);
  f.F4_tilde = (I(1) + I(2) - I(0) + D) * kv(0) * gamma(0) +
               (I(2) + I(0) - I(1) + D) * kv(1) * gamma(1) +
               (I(0) + I(1) - I(2) + D) * kv(2) * gamma(2);
  return f;
}

}  // namespace chapball
