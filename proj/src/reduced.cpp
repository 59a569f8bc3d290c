#include "chapball/reduced.hpp"

#include <cmath>
#include <vector>

namespace chapball {

namespace {

void require_eps(double epsilon, const char* where) {
  if (epsilon == 0.0) {
    throw std::invalid_argument(std::string(where) + ": epsilon must be nonzero");
  }
}

Vec a_inv_times(const Vec& a, const Vec& x) {
  return (x.array() / a.array()).matrix();
}

Vec a_times(const Vec& a, const Vec& x) {
  return (x.array() * a.array()).matrix();
}

}  // namespace

CotangentState::CotangentState(Vec p_, UnitVector gamma_, double tolerance)
    : p(std::move(p_)), gamma(std::move(gamma_)) {
  if (p.size() != gamma.dim()) {
    throw std::invalid_argument("CotangentState: p and gamma sizes differ");
  }
  const double residual = std::abs(p.dot(gamma.v()));
  if (residual > tolerance) {
    throw std::invalid_argument("CotangentState: (gamma,p) residual " +
                                std::to_string(residual));
  }
}

double reduced_lagrangian(const InertiaSpec& spec, const GeometryParams& geom,
                          const Vec& gamma_dot, const Vec& gamma,
                          double tangency_tol) {
  require_eps(geom.epsilon, "reduced_lagrangian");
  if (std::abs(gamma.dot(gamma_dot)) > tangency_tol * (1.0 + gamma_dot.norm())) {
    throw std::invalid_argument("reduced_lagrangian: gamma_dot not tangent");
  }
  const Mat w = wedge(gamma, gamma_dot);
  return 0.5 / (geom.epsilon * geom.epsilon) *
         pairing(spec.apply_modified(w, geom.D), w);
}

double reduced_lagrangian_special(const Vec& a, double epsilon,
                                  const Vec& gamma_dot, const Vec& gamma) {
  require_eps(epsilon, "reduced_lagrangian_special");
  const double Agg = gamma.dot(a_times(a, gamma));
  const double Add = gamma_dot.dot(a_times(a, gamma_dot));
  const double Agd = gamma.dot(a_times(a, gamma_dot));
  return 0.5 / (epsilon * epsilon) * (Add * Agg - Agd * Agd);
}

HorizontalLift horizontal_lift(const GeometryParams& geom,
                               const Vec& gamma_dot, const Vec& gamma,
                               const Mat& g) {
  require_eps(geom.epsilon, "horizontal_lift");
  if (!geom.has_radii()) {
    throw std::invalid_argument("horizontal_lift: geometry has no radii");
  }
  const double sign = geom.contact_sign();
  const double offset = *geom.sigma + sign * *geom.rho;
  HorizontalLift lift;
  lift.omega = (1.0 / geom.epsilon) * wedge(gamma, gamma_dot);
  lift.V = -offset * (sign * *geom.rho / *geom.sigma) * (g * gamma_dot);
  return lift;
}

double jk_coefficient(double epsilon) {
  require_eps(epsilon, "jk_coefficient");
  return (2.0 * epsilon - 1.0) / (epsilon * epsilon);
}

double jk_term(const InertiaSpec& spec, double D, double epsilon,
               const Vec& gamma_dot, const Vec& gamma, const Vec& xi) {
  require_eps(epsilon, "jk_term");
  const Mat Iw = spec.apply_modified(wedge(gamma, gamma_dot), D);
  return (2.0 * epsilon - 1.0) / (epsilon * epsilon * epsilon) *
         (Iw * gamma_dot).dot(xi);
}

Vec legendre_apply(const InertiaSpec& spec, const GeometryParams& geom,
                   const Vec& gamma_dot, const Vec& gamma) {
  require_eps(geom.epsilon, "legendre_apply");
  const Mat Iw = spec.apply_modified(wedge(gamma, gamma_dot), geom.D);
  return -(1.0 / (geom.epsilon * geom.epsilon)) * (Iw * gamma);
}

Vec legendre_solve(const InertiaSpec& spec, const GeometryParams& geom,
                   const Vec& p, const Vec& gamma) {
  const int n = spec.n();
  const Mat frame = complete_frame(gamma);
  // SPD system in the tangent basis t_1..t_{n-1}:
  // (L t_b, t_a) with L(γ̇) = -(1/ε²)𝐈(γ∧γ̇)γ.
  Mat L(n - 1, n - 1);
  Vec rhs(n - 1);
  for (int b = 0; b < n - 1; ++b) {
    const Vec img = legendre_apply(spec, geom, frame.col(b), gamma);
    for (int a = 0; a < n - 1; ++a) L(a, b) = frame.col(a).dot(img);
    rhs(b) = frame.col(b).dot(p);
  }
  Eigen::LDLT<Mat> ldlt(L);
  if (ldlt.info() != Eigen::Success) {
    throw std::runtime_error("legendre_solve: singular Legendre map");
  }
  const Vec coeff = ldlt.solve(rhs);
  Vec gamma_dot = Vec::Zero(n);
  for (int a = 0; a < n - 1; ++a) gamma_dot += coeff(a) * frame.col(a);
  return gamma_dot;
}

CotangentRates reduced_field_generic(const InertiaSpec& spec,
                                     const GeometryParams& geom, const Vec& p,
                                     const Vec& gamma) {
  const double eps = geom.epsilon;
  require_eps(eps, "reduced_field_generic");
  const Vec gamma_dot = legendre_solve(spec, geom, p, gamma);
  const Mat Iw = spec.apply_modified(wedge(gamma, gamma_dot), geom.D);
  const Vec upsilon = (1.0 / (eps * eps)) * (Iw * gamma_dot);
  const double mu =
      -gamma_dot.dot(p) - (1.0 - eps) / eps * upsilon.dot(gamma);
  CotangentRates rates;
  rates.gamma_dot = gamma_dot;
  rates.p_dot = (1.0 - eps) / eps * upsilon + mu * gamma;
  return rates;
}

CotangentRates reduced_field_special(const Vec& a, double epsilon,
                                     const Vec& p, const Vec& gamma) {
  require_eps(epsilon, "reduced_field_special");
  const Vec Ag = a_times(a, gamma);
  const Vec Aip = a_inv_times(a, p);
  const Vec Aig = a_inv_times(a, gamma);
  const double gAg = gamma.dot(Ag);
  const double pAip = p.dot(Aip);
  const double pAig = p.dot(Aig);

  CotangentRates rates;
  rates.gamma_dot = (epsilon * epsilon / gAg) * (Aip - pAig * gamma);
  rates.p_dot = (epsilon * (1.0 - epsilon) / (gAg * gAg)) *
                    (pAip * Ag + pAig * gAg * p) -
                (epsilon / gAg) * pAip * gamma;
  return rates;
}

double reduced_energy_generic(const InertiaSpec& spec,
                              const GeometryParams& geom, const Vec& p,
                              const Vec& gamma) {
  const Vec gamma_dot = legendre_solve(spec, geom, p, gamma);
  return 0.5 * p.dot(gamma_dot);
}

double reduced_energy_special(const Vec& a, double epsilon, const Vec& p,
                              const Vec& gamma) {
  require_eps(epsilon, "reduced_energy_special");
  const double gAg = gamma.dot(a_times(a, gamma));
  return 0.5 * epsilon * epsilon * p.dot(a_inv_times(a, p)) / gAg;
}

CotangentRates hamiltonized_field(const Vec& a, double epsilon, const Vec& pt,
                                  const Vec& gamma) {
  require_eps(epsilon, "hamiltonized_field");
  const Vec Ag = a_times(a, gamma);
  const Vec Aipt = a_inv_times(a, pt);
  const double gAg = gamma.dot(Ag);
  const double ptAipt = pt.dot(Aipt);
  const double ptAig = pt.dot(a_inv_times(a, gamma));
  const double pow1 = std::pow(gAg, 1.0 - 1.0 / epsilon);
  const double pow2 = std::pow(gAg, -1.0 / epsilon);

  CotangentRates rates;
  rates.gamma_dot = pow1 * (Aipt - ptAig * gamma);
  rates.p_dot = (1.0 - epsilon) / epsilon * pow2 * ptAipt * Ag -
                (1.0 / epsilon) * pow1 * ptAipt * gamma +
                pow1 * ptAig * pt;
  return rates;
}

double hamiltonized_energy(const Vec& a, double epsilon, const Vec& pt,
                           const Vec& gamma) {
  require_eps(epsilon, "hamiltonized_energy");
  const double gAg = gamma.dot(a_times(a, gamma));
  return 0.5 * std::pow(gAg, 1.0 - 1.0 / epsilon) * pt.dot(a_inv_times(a, pt));
}

double multiplier(const Vec& a, double epsilon, const Vec& gamma) {
  require_eps(epsilon, "multiplier");
  const double gAg = gamma.dot(a_times(a, gamma));
  return epsilon * std::pow(gAg, 0.5 / epsilon - 1.0);
}

double metric_eval(const Vec& a, double epsilon, const Vec& gamma,
                   const Vec& dgamma) {
  require_eps(epsilon, "metric_eval");
  const double gAg = gamma.dot(a_times(a, gamma));
  const double dAd = dgamma.dot(a_times(a, dgamma));
  const double gAd = gamma.dot(a_times(a, dgamma));
  return std::pow(gAg, 1.0 / epsilon - 2.0) * (dAd * gAg - gAd * gAd);
}

double metric_horizontal(const Vec& a, const Vec& gamma, const Vec& dgamma) {
  const double gAg = gamma.dot(a_times(a, gamma));
  const double dAd = dgamma.dot(a_times(a, dgamma));
  const double gAd = gamma.dot(a_times(a, dgamma));
  return (dAd * gAg - gAd * gAd) / gAg;
}

double verify_hamiltonization(const Vec& a, double epsilon, const Vec& p,
                              const Vec& gamma) {
  require_eps(epsilon, "verify_hamiltonization");
  const double nu = multiplier(a, epsilon, gamma);
  const Vec pt = nu * p;

  const CotangentRates flow = reduced_field_special(a, epsilon, p, gamma);
  const CotangentRates ham = hamiltonized_field(a, epsilon, pt, gamma);

  // γ̇ = ν·γ′ and ṗ = p̃′ - (ν̇/ν)p pulled back through p̃ = νp, where
  // ν̇/ν = (2ε-1)ε(p,A⁻¹γ)/(Aγ,γ) along the reduced flow.
  const double gAg = gamma.dot(a_times(a, gamma));
  const double pAig = p.dot(a_inv_times(a, gamma));
  const double chain = (2.0 * epsilon - 1.0) * epsilon * pAig / gAg;

  const Vec gamma_residual = flow.gamma_dot - nu * ham.gamma_dot;
  const Vec p_residual = flow.p_dot - (ham.p_dot - chain * p);
  return std::max(gamma_residual.cwiseAbs().maxCoeff(),
                  p_residual.cwiseAbs().maxCoeff());
}

namespace {

template <typename Field>
Vec rk4_step_raw(const Field& f, const Vec& x, double h) {
  const Vec k1 = f(x);
  const Vec k2 = f(x + 0.5 * h * k1);
  const Vec k3 = f(x + 0.5 * h * k2);
  const Vec k4 = f(x + h * k3);
  return x + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4);
}

}  // namespace

ReparamResult check_time_reparametrization(const Vec& a, double epsilon,
                                           const Vec& p0, const Vec& gamma0,
                                           double t_end, double h) {
  require_eps(epsilon, "check_time_reparametrization");
  const int n = static_cast<int>(gamma0.size());

  // reference trajectory in the original time
  auto flow_t = [&](const Vec& x) {
    const CotangentRates r =
        reduced_field_special(a, epsilon, x.head(n), x.tail(n));
    Vec out(2 * n);
    out << r.p_dot, r.gamma_dot;
    return out;
  };
  std::vector<double> ts;
  std::vector<Vec> gammas;
  {
    Vec x(2 * n);
    x << p0, gamma0;
    double t = 0.0;
    ts.push_back(t);
    gammas.push_back(x.tail(n));
    while (t < t_end - 1e-12) {
      const double step = std::min(h, t_end - t);
      x = rk4_step_raw(flow_t, x, step);
      t += step;
      ts.push_back(t);
      gammas.push_back(x.tail(n));
    }
  }

  // Hamiltonian trajectory in τ, with t as a quadrature component; τ runs
  // backwards when ν < 0 so that t always increases
  auto flow_tau = [&](const Vec& y) {
    const Vec pt = y.head(n);
    const Vec gamma = y.segment(n, n);
    const CotangentRates r = hamiltonized_field(a, epsilon, pt, gamma);
    Vec out(2 * n + 1);
    out << r.p_dot, r.gamma_dot, 1.0 / multiplier(a, epsilon, gamma);
    return out;
  };
  struct Node {
    double t;
    Vec gamma;
    Vec gamma_dt;  // dγ/dt = ν·γ′
  };
  std::vector<Node> nodes;
  {
    const double nu0 = multiplier(a, epsilon, gamma0);
    Vec y(2 * n + 1);
    y << nu0 * p0, gamma0, 0.0;
    auto push = [&](const Vec& state) {
      const Vec gamma = state.segment(n, n);
      const double nu = multiplier(a, epsilon, gamma);
      const CotangentRates r =
          hamiltonized_field(a, epsilon, state.head(n), gamma);
      nodes.push_back({state(2 * n), gamma, nu * r.gamma_dot});
    };
    push(y);
    while (y(2 * n) < t_end + h) {
      const double nu = multiplier(a, epsilon, y.segment(n, n));
      const double dtau = h * nu;  // advances t by ~h regardless of sign(ν)
      y = rk4_step_raw(flow_tau, y, dtau);
      push(y);
      if (nodes.size() > 100 * ts.size() + 1000) {
        throw std::runtime_error(
            "check_time_reparametrization: time quadrature stalled");
      }
    }
  }

  // compare γ at the reference times via cubic Hermite interpolation
  ReparamResult result;
  result.t_end = t_end;
  std::size_t j = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double t = ts[i];
    while (j + 1 < nodes.size() && nodes[j + 1].t < t) ++j;
    if (j + 1 >= nodes.size()) break;
    const Node& lo = nodes[j];
    const Node& hi = nodes[j + 1];
    const double width = hi.t - lo.t;
    if (width <= 0.0) continue;
    const double s = (t - lo.t) / width;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    const Vec interp = h00 * lo.gamma + h10 * width * lo.gamma_dt +
                       h01 * hi.gamma + h11 * width * hi.gamma_dt;
    result.max_gamma_error = std::max(
        result.max_gamma_error, (interp - gammas[i]).cwiseAbs().maxCoeff());
    ++result.compared_samples;
  }
  if (result.compared_samples == 0) {
    throw std::runtime_error(
        "check_time_reparametrization: no comparable samples");
  }
  return result;
}

}  // namespace chapball
