#include "chapball/divergence.hpp"

#include <cmath>
#include <vector>

#include "chapball/ball.hpp"
#include "chapball/reduced.hpp"
#include "chapball/rubber.hpp"

namespace chapball {

double divergence_fd(int dim, const std::function<Vec(const Vec&)>& field,
                     const std::function<double(const Vec&)>& density,
                     double fd_step) {
  if (fd_step <= 0.0) {
    throw std::invalid_argument("divergence_fd: fd_step must be > 0");
  }
  if (density(Vec::Zero(dim)) <= 0.0) {
    throw std::invalid_argument("divergence_fd: density must be > 0");
  }
  double div = 0.0;
  Vec u = Vec::Zero(dim);
  for (int i = 0; i < dim; ++i) {
    u(i) = fd_step;
    const double plus = density(u) * field(u)(i);
    u(i) = -fd_step;
    const double minus = density(u) * field(u)(i);
    u(i) = 0.0;
    div += (plus - minus) / (2.0 * fd_step);
  }
  return div;
}

double divergence_check(int dim, const std::function<Vec(const Vec&)>& field,
                        const std::function<double(const Vec&)>& density,
                        double fd_step) {
  const double fine = divergence_fd(dim, field, density, fd_step);
  const double coarse = divergence_fd(dim, field, density, 10.0 * fd_step);
  const double scale = std::max(std::abs(fine), std::abs(coarse));
  if (scale > 0.0 && std::abs(fine - coarse) > 0.1 * scale) {
    // central differences carry an h² error: extrapolate the pair
    return (100.0 * fine - coarse) / 99.0;
  }
  return fine;
}

SphereChart::SphereChart(const Vec& gamma0) {
  n_ = static_cast<int>(gamma0.size());
  gamma0_ = gamma0 / gamma0.norm();
  tangent_ = complete_frame(gamma0_).leftCols(n_ - 1);
}

Vec SphereChart::point(const Vec& u) const {
  const Vec q = gamma0_ + tangent_ * u;
  return q / q.norm();
}

Mat SphereChart::jacobian(const Vec& u) const {
  const Vec q = gamma0_ + tangent_ * u;
  const double s = q.norm();
  Mat J(n_, n_ - 1);
  for (int a = 0; a < n_ - 1; ++a) {
    J.col(a) = tangent_.col(a) / s - q * (u(a) / (s * s * s));
  }
  return J;
}

Mat SphereChart::jacobian_dot(const Vec& u, const Vec& u_dot) const {
  const Vec q = gamma0_ + tangent_ * u;
  const double s = q.norm();
  const double s3 = s * s * s;
  const double s5 = s3 * s * s;
  const Vec t_udot = tangent_ * u_dot;
  const double u_udot = u.dot(u_dot);
  Mat Jdot(n_, n_ - 1);
  for (int a = 0; a < n_ - 1; ++a) {
    // Σ_c ∂²ψ/∂u_a∂u_c u̇_c
    Jdot.col(a) = -tangent_.col(a) * (u_udot / s3) -
                  t_udot * (u(a) / s3) - q * (u_dot(a) / s3) +
                  q * (3.0 * u(a) * u_udot / s5);
  }
  return Jdot;
}

Vec SphereChart::pull_velocity(const Vec& u, const Vec& gamma_dot) const {
  const Mat J = jacobian(u);
  return (J.transpose() * J).ldlt().solve(J.transpose() * gamma_dot);
}

Mat SphereChart::transport(const Vec& u) const {
  const Vec psi = point(u);
  const Vec w = gamma0_ + psi;
  const double c = 1.0 + gamma0_.dot(psi);
  return Mat::Identity(n_, n_) - (w * w.transpose()) / c +
         2.0 * psi * gamma0_.transpose();
}

Mat SphereChart::transport_derivative(const Vec& u, int c_idx) const {
  const Vec psi = point(u);
  const Mat J = jacobian(u);
  const Vec dpsi = J.col(c_idx);
  const Vec w = gamma0_ + psi;
  const double c = 1.0 + gamma0_.dot(psi);
  const double dc = gamma0_.dot(dpsi);
  return -(dpsi * w.transpose() + w * dpsi.transpose()) / c +
         (w * w.transpose()) * (dc / (c * c)) +
         2.0 * dpsi * gamma0_.transpose();
}

namespace {

/// Chart of so(n)×S^{n-1} around (X₀, γ₀): linear so(n) coordinates plus
/// the sphere chart; the density and field are composed per check.
struct SkewSphereChart {
  int n;
  int N;
  Vec x0;  // vectorized X₀
  SphereChart sphere;

  SkewSphereChart(const Mat& X0, const Vec& gamma0)
      : n(static_cast<int>(gamma0.size())),
        N(so_dim(n)),
        x0(vectorize(X0)),
        sphere(gamma0) {}

  int dim() const { return N + n - 1; }

  Mat skew_at(const Vec& coords) const {
    return unvectorize(x0 + coords.head(N), n);
  }
  Vec gamma_at(const Vec& coords) const {
    return sphere.point(coords.tail(n - 1));
  }
  Vec pack_rates(const Vec& coords, const Mat& Xdot,
                 const Vec& gamma_dot) const {
    Vec out(dim());
    out.head(N) = vectorize(Xdot);
    out.tail(n - 1) = sphere.pull_velocity(coords.tail(n - 1), gamma_dot);
    return out;
  }
};

}  // namespace

double measure_div_nonrubber_omega(const InertiaSpec& spec,
                                   const GeometryParams& geom, const Mat& omega,
                                   const Vec& gamma, double fd_step) {
  const SkewSphereChart chart(omega, gamma);
  auto field = [&](const Vec& c) {
    const Mat w = chart.skew_at(c);
    const Vec g = chart.gamma_at(c);
    const BallRates rates = reduced_field_omega(spec, geom, w, g);
    return chart.pack_rates(c, rates.k_dot, rates.gamma_dot);
  };
  auto density = [&](const Vec& c) {
    return density_nonrubber(spec, geom.D, chart.gamma_at(c));
  };
  return divergence_check(chart.dim(), field, density, fd_step);
}

double measure_div_nonrubber_k(const InertiaSpec& spec,
                               const GeometryParams& geom, const Mat& k,
                               const Vec& gamma, double fd_step) {
  const SkewSphereChart chart(k, gamma);
  auto field = [&](const Vec& c) {
    const Mat kk = chart.skew_at(c);
    const Vec g = chart.gamma_at(c);
    const BallRates rates = reduced_field(spec, geom, kk, g);
    return chart.pack_rates(c, rates.k_dot, rates.gamma_dot);
  };
  auto density = [&](const Vec& c) {
    return 1.0 / density_nonrubber(spec, geom.D, chart.gamma_at(c));
  };
  return divergence_check(chart.dim(), field, density, fd_step);
}

double measure_div_extended(const InertiaSpec& spec,
                            const GeometryParams& geom, const Mat& mm,
                            const Vec& gamma, double fd_step) {
  const SkewSphereChart chart(mm, gamma);
  auto field = [&](const Vec& c) {
    const Mat m = chart.skew_at(c);
    const Vec g = chart.gamma_at(c);
    const ExtMomentumRates rates = ext_momentum_field(spec, geom, m, g);
    return chart.pack_rates(c, rates.mm_dot, rates.gamma_dot);
  };
  auto density = [&](const Vec& c) {
    return density_rubber_v(spec, geom.D, chart.gamma_at(c), geom.epsilon);
  };
  return divergence_check(chart.dim(), field, density, fd_step);
}

double measure_div_rubber(const InertiaSpec& spec, const GeometryParams& geom,
                          const Mat& m, const Vec& gamma, double fd_step) {
  const int n = spec.n();
  const SphereChart sphere(gamma);
  const Mat frame0 = complete_frame(gamma);

  // base coordinates of ω in the v_γ basis b_a = e_a∧γ
  const Mat omega0 = spec.solve_modified(m, geom.D);
  Vec v0(n - 1);
  for (int a = 0; a < n - 1; ++a) {
    v0(a) = pairing(omega0, wedge(frame0.col(a), gamma));
  }

  const int d = 2 * (n - 1);
  auto assemble = [&](const Vec& c, Vec* rates_out) -> double {
    const Vec v = v0 + c.head(n - 1);
    const Vec u = c.tail(n - 1);
    const Vec g = sphere.point(u);
    const Mat R = sphere.transport(u);

    std::vector<Mat> basis(n - 1);
    Mat omega = Mat::Zero(n, n);
    for (int a = 0; a < n - 1; ++a) {
      basis[a] = wedge(R * frame0.col(a), g);
      omega += v(a) * basis[a];
    }
    const Mat mm = spec.apply_modified(omega, geom.D);

    if (rates_out != nullptr) {
      const Mat m_dot =
          commutator(mm, omega) + lambda0_solve(spec, geom, mm, g);
      const Vec gamma_dot = -geom.epsilon * (omega * g);
      const Mat omega_dot = spec.solve_modified(m_dot, geom.D);
      const Vec u_dot = sphere.pull_velocity(u, gamma_dot);

      Mat R_dot = Mat::Zero(n, n);
      for (int cc = 0; cc < n - 1; ++cc) {
        R_dot += u_dot(cc) * sphere.transport_derivative(u, cc);
      }
      Vec out(d);
      for (int a = 0; a < n - 1; ++a) {
        const Mat basis_dot = wedge(R_dot * frame0.col(a), g) +
                              wedge(R * frame0.col(a), gamma_dot);
        out(a) = pairing(omega_dot, basis[a]) + pairing(omega, basis_dot);
      }
      out.tail(n - 1) = u_dot;
      *rates_out = out;
    }
    return density_rubber_h(spec, geom.D, g, geom.epsilon);
  };

  auto field = [&](const Vec& c) {
    Vec rates;
    assemble(c, &rates);
    return rates;
  };
  auto density = [&](const Vec& c) { return assemble(c, nullptr); };
  return divergence_check(d, field, density, fd_step);
}

namespace {

/// Tautological cotangent chart: coordinates (P, u) with γ = ψ(u) and the
/// momentum defined by (p, ∂ψ/∂u_a) = P_a, p ⊥ γ. In these coordinates
/// the canonical volume of T*S^{n-1} is constant.
struct CotangentChart {
  int n;
  SphereChart sphere;
  Vec P0;

  CotangentChart(const Vec& p0, const Vec& gamma0) : sphere(gamma0) {
    n = static_cast<int>(gamma0.size());
    P0 = sphere.jacobian(Vec::Zero(n - 1)).transpose() * p0;
  }

  int dim() const { return 2 * (n - 1); }

  void state_at(const Vec& c, Vec& p, Vec& gamma) const {
    const Vec P = P0 + c.head(n - 1);
    const Vec u = c.tail(n - 1);
    gamma = sphere.point(u);
    const Mat J = sphere.jacobian(u);
    p = J * (J.transpose() * J).ldlt().solve(P);
  }

  Vec pack_rates(const Vec& c, const Vec& p, const Vec& p_dot,
                 const Vec& gamma_dot) const {
    const Vec u = c.tail(n - 1);
    const Mat J = sphere.jacobian(u);
    const Vec u_dot = (J.transpose() * J).ldlt().solve(J.transpose() * gamma_dot);
    const Mat Jdot = sphere.jacobian_dot(u, u_dot);
    Vec out(dim());
    out.head(n - 1) = J.transpose() * p_dot + Jdot.transpose() * p;
    out.tail(n - 1) = u_dot;
    return out;
  }
};

}  // namespace

double measure_div_reduced_generic(const InertiaSpec& spec,
                                   const GeometryParams& geom, const Vec& p,
                                   const Vec& gamma, double fd_step) {
  const CotangentChart chart(p, gamma);
  auto field = [&](const Vec& c) {
    Vec pp, g;
    chart.state_at(c, pp, g);
    const CotangentRates rates = reduced_field_generic(spec, geom, pp, g);
    return chart.pack_rates(c, pp, rates.p_dot, rates.gamma_dot);
  };
  auto density = [&](const Vec& c) {
    Vec pp, g;
    chart.state_at(c, pp, g);
    return std::pow(det_modified_on_v(spec, geom.D, g),
                    0.5 / geom.epsilon - 1.0);
  };
  return divergence_check(chart.dim(), field, density, fd_step);
}

double measure_div_reduced_special(const Vec& a, double epsilon, const Vec& p,
                                   const Vec& gamma, double fd_step,
                                   std::optional<double> exponent_override) {
  const int n = static_cast<int>(gamma.size());
  const double exponent = exponent_override.value_or(
      static_cast<double>(n - 2) / (2.0 * epsilon) + 2.0 - n);
  const CotangentChart chart(p, gamma);
  auto field = [&](const Vec& c) {
    Vec pp, g;
    chart.state_at(c, pp, g);
    const CotangentRates rates = reduced_field_special(a, epsilon, pp, g);
    return chart.pack_rates(c, pp, rates.p_dot, rates.gamma_dot);
  };
  auto density = [&](const Vec& c) {
    Vec pp, g;
    chart.state_at(c, pp, g);
    return std::pow(g.dot((a.array() * g.array()).matrix()), exponent);
  };
  return divergence_check(chart.dim(), field, density, fd_step);
}

}  // namespace chapball
