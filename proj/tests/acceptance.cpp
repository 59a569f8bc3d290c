// Acceptance suite: structural properties of the rolling-ball flows, one
// criterion per line. Exit code is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "chapball/divergence.hpp"
#include "chapball/scenario.hpp"
#include "oracles.hpp"

using namespace chapball;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& label, const Outcome& outcome) {
  std::printf("[%s] criterion %d: %s (%s)\n", outcome.pass ? "PASS" : "FAIL",
              id, label.c_str(), outcome.detail.c_str());
  std::fflush(stdout);
  if (!outcome.pass) ++failures;
}

std::string fmt(const char* pattern, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, value);
  return buf;
}

InertiaSpec make_inertia(Sampler& rng, const std::string& kind, int n,
                         double& D) {
  if (kind == "chop") return rng.chaplygin_inertia(n, &D);
  if (kind == "specop") return rng.special_inertia(n, D);
  return rng.generic_inertia(n);
}

// --- criterion 1 & 2: conservation and constraint preservation ---------------

struct RunSummary {
  double energy_rel_drift = 0.0;
  double gamma_residual = 0.0;
  double frame_residual = 0.0;
  double twist_residual = 0.0;
  double runtime_seconds = 0.0;
};

RunSummary run_conservation(SystemKind kind, const InertiaSpec& spec,
                            const GeometryParams& geom, std::uint64_t seed,
                            bool projection) {
  Sampler rng(seed);
  const Vec x0 = rng.state(kind, spec, geom, 0.8);
  const auto system = make_system(kind, spec, geom);

  IntegratorConfig config;
  config.h = 1e-3;
  config.t_end = 10.0;
  config.stride = 10;
  config.projection = projection;

  std::vector<std::string> checks = {"energy", "gamma-norm"};
  if (kind == SystemKind::Rubber) {
    checks.push_back("frame-orth");
    checks.push_back("no-twist");
  }
  const auto start = std::chrono::steady_clock::now();
  const Trajectory traj = integrate(*system, config, x0, checks);
  RunSummary summary;
  summary.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  const double E0 = traj.check_values.front()(0);
  for (const Vec& v : traj.check_values) {
    summary.energy_rel_drift = std::max(
        summary.energy_rel_drift, std::abs(v(0) - E0) / std::abs(E0));
    summary.gamma_residual = std::max(summary.gamma_residual,
                                      std::abs(v(1)));
    if (kind == SystemKind::Rubber) {
      summary.frame_residual = std::max(summary.frame_residual,
                                        std::abs(v(2)));
      summary.twist_residual = std::max(summary.twist_residual,
                                        std::abs(v(3)));
    }
  }
  return summary;
}

void criterion_1_and_2() {
  double worst_energy = 0.0;
  double worst_gamma_projected = 0.0;
  double worst_gamma_free = 0.0;
  double worst_frame = 0.0;
  double worst_twist = 0.0;
  double worst_runtime = 0.0;
  std::uint64_t seed = 9001;

  for (int n : {3, 4, 5}) {
    for (const std::string kind : {"chop", "specop", "generic"}) {
      Sampler rng(seed);
      double D = 0.35;
      const InertiaSpec spec = make_inertia(rng, kind, n, D);
      const auto geom = GeometryParams::direct(0.7, D);

      const RunSummary nr = run_conservation(SystemKind::NonrubberReduced,
                                             spec, geom, seed + 1, true);
      const RunSummary nr_free = run_conservation(
          SystemKind::NonrubberReduced, spec, geom, seed + 2, false);
      const RunSummary rb =
          run_conservation(SystemKind::Rubber, spec, geom, seed + 3, true);

      worst_energy = std::max({worst_energy, nr.energy_rel_drift,
                               nr_free.energy_rel_drift,
                               rb.energy_rel_drift});
      worst_gamma_projected =
          std::max({worst_gamma_projected, nr.gamma_residual,
                    rb.gamma_residual});
      worst_gamma_free = std::max(worst_gamma_free, nr_free.gamma_residual);
      worst_frame = std::max(worst_frame, rb.frame_residual);
      worst_twist = std::max(worst_twist, rb.twist_residual);
      worst_runtime = std::max({worst_runtime, nr.runtime_seconds,
                                rb.runtime_seconds});
      seed += 17;
    }
  }

  Outcome c1;
  c1.pass = worst_energy < 1e-8 && worst_runtime < 30.0;
  c1.detail = "max rel energy drift " + fmt("%.2e", worst_energy) +
              " < 1e-8 over 27 scenarios, slowest " +
              fmt("%.2f s", worst_runtime);
  report(1, "energy conservation, n in {3,4,5}, all inertia families", c1);

  Outcome c2;
  c2.pass = worst_gamma_free < 1e-9 && worst_gamma_projected < 1e-14 &&
            worst_frame < 1e-8 && worst_twist < 1e-8;
  c2.detail = "|gamma|-1 " + fmt("%.2e", worst_gamma_free) +
              " (projection off) / " + fmt("%.2e", worst_gamma_projected) +
              " (on), frame " + fmt("%.2e", worst_frame) + ", twist " +
              fmt("%.2e", worst_twist);
  report(2, "constraint preservation", c2);
}

// --- criterion 3: the classical 3D integral suite -----------------------------

double integral_drift(const InertiaSpec& spec, const GeometryParams& geom,
                      const Vec& x0, const std::string& check) {
  const auto system = make_system(SystemKind::NonrubberReduced, spec, geom);
  IntegratorConfig config;
  config.h = 1e-3;
  config.t_end = 10.0;
  config.stride = 10;
  const Trajectory traj = integrate(*system, config, x0, {check});
  double drift = 0.0;
  const double q0 = traj.check_values.front()(0);
  for (const Vec& v : traj.check_values) {
    drift = std::max(drift, std::abs(v(0) - q0));
  }
  return drift;
}

void criterion_3() {
  Vec I3(3);
  I3 << 0.9, 1.4, 2.1;
  Vec eig(3);
  eig << I3(2), I3(1), I3(0);
  const auto spec = InertiaSpec::generic(Mat(eig.asDiagonal()));
  const double D = 0.5;
  Sampler rng(424242);
  const auto geom07 = GeometryParams::direct(0.7, D);
  const Vec x0 = rng.state(SystemKind::NonrubberReduced, spec, geom07, 0.9);

  const double f1 = integral_drift(spec, geom07, x0, "F1");
  const double f2 = integral_drift(spec, geom07, x0, "F2");
  const double f3 = integral_drift(spec, geom07, x0, "F3");
  const double f4_secular = integral_drift(spec, geom07, x0, "F4");
  const double f4_conserved =
      integral_drift(spec, GeometryParams::direct(1.0, D), x0, "F4");
  const double f4t_conserved =
      integral_drift(spec, GeometryParams::direct(-1.0, D), x0, "F4tilde");

  Outcome out;
  out.pass = f1 < 1e-8 && f2 < 1e-8 && f3 < 1e-8 && f4_conserved < 1e-8 &&
             f4_secular > 1e-3 && f4t_conserved < 1e-8;
  out.detail = "F1 " + fmt("%.1e", f1) + ", F2 " + fmt("%.1e", f2) + ", F3 " +
               fmt("%.1e", f3) + "; F4 " + fmt("%.1e", f4_conserved) +
               " at eps=1, secular " + fmt("%.1e", f4_secular) +
               " at eps=0.7; F4tilde " + fmt("%.1e", f4t_conserved) +
               " at eps=-1";
  report(3, "3D first-integral suite", out);
}

// --- criterion 4: invariant measures -------------------------------------------

void criterion_4() {
  double worst_unconstrained = 0.0;  // thresholds 1e-5
  double worst_constrained = 0.0;    // thresholds 1e-4
  double negative_control = 0.0;
  const int samples = 50;

  for (int n : {3, 4}) {
    for (double eps : {-1.0, 0.3, 1.0, 2.0}) {
      Sampler rng(31337 + n * 1000 + static_cast<int>(eps * 10));
      double Dch = 0.0;
      const auto chop = rng.chaplygin_inertia(n, &Dch);
      const auto geom_ch = GeometryParams::direct(eps, Dch);
      const double D = 0.3;
      const auto gen = rng.generic_inertia(n);
      const auto sp = rng.special_inertia(n, D);
      const auto geom = GeometryParams::direct(eps, D);

      for (int s = 0; s < samples; ++s) {
        const Vec gamma = rng.unit_vector(n);
        const Mat omega = rng.skew(n);
        worst_unconstrained = std::max(
            {worst_unconstrained,
             std::abs(measure_div_nonrubber_omega(chop, geom_ch, omega, gamma)),
             std::abs(measure_div_nonrubber_k(
                 chop, geom_ch, kappa_apply(chop, Dch, gamma, omega), gamma)),
             std::abs(measure_div_extended(
                 gen, geom, mixed_momentum(gen, D, gamma, omega), gamma))});

        const Mat omega_v = proj_v(omega, gamma);
        worst_constrained = std::max(
            worst_constrained,
            std::abs(measure_div_rubber(
                gen, geom, gen.apply_modified(omega_v, D), gamma)));

        Vec p(n);
        for (int i = 0; i < n; ++i) p(i) = rng.normal();
        p -= p.dot(gamma) * gamma;
        worst_constrained = std::max(
            worst_constrained,
            std::abs(measure_div_reduced_generic(gen, geom, p, gamma)));
        worst_unconstrained = std::max(
            worst_unconstrained,
            std::abs(measure_div_reduced_special(sp.diag_params(), eps, p,
                                                 gamma)));
        if (eps == 0.3) {
          negative_control = std::max(
              negative_control,
              std::abs(measure_div_reduced_special(sp.diag_params(), eps, p,
                                                   gamma, 1e-5, 0.0)));
        }
      }
    }
  }

  Outcome out;
  out.pass = worst_unconstrained < 1e-5 && worst_constrained < 1e-4 &&
             negative_control > 1e-2;
  out.detail = "max |div| " + fmt("%.2e", worst_unconstrained) +
               " (full charts, tol 1e-5), " + fmt("%.2e", worst_constrained) +
               " (constrained charts, tol 1e-4); negative control " +
               fmt("%.2e", negative_control) + " > 1e-2";
  report(4, "invariant-measure divergence checks", out);
}

// --- criterion 5: density proportionality ---------------------------------------

void criterion_5() {
  double worst_spread = 0.0;
  for (int n : {3, 4, 5}) {
    Sampler rng(5150 + n);
    double D = 0.0;
    const auto chop = rng.chaplygin_inertia(n, &D);
    const auto sp = rng.special_inertia(n, 0.3);
    const Vec& a_ch = chop.diag_params();
    const Vec& a_sp = sp.diag_params();

    double lo_ch = 1e300, hi_ch = -1e300;
    double lo_sp = 1e300, hi_sp = -1e300;
    const double eps = 0.6;
    for (int rep = 0; rep < 100; ++rep) {
      const Vec gamma = rng.unit_vector(n);
      const double r_ch =
          density_nonrubber(chop, D, gamma) /
          std::pow(gamma.dot((gamma.array() / a_ch.array()).matrix()),
                   0.5 * (n - 2));
      lo_ch = std::min(lo_ch, r_ch);
      hi_ch = std::max(hi_ch, r_ch);

      const double r_sp =
          density_rubber_v(sp, 0.3, gamma, eps) /
          std::pow(gamma.dot((a_sp.array() * gamma.array()).matrix()),
                   (0.5 / eps - 1.0) * (n - 2));
      lo_sp = std::min(lo_sp, r_sp);
      hi_sp = std::max(hi_sp, r_sp);
    }
    worst_spread = std::max({worst_spread, (hi_ch - lo_ch) / std::abs(lo_ch),
                             (hi_sp - lo_sp) / std::abs(lo_sp)});
  }
  Outcome out;
  out.pass = worst_spread < 1e-8;
  out.detail =
      "max relative spread " + fmt("%.2e", worst_spread) + " over 100 draws";
  report(5, "density proportionality for the diagonal families", out);
}

// --- criterion 6: Hamiltonization -----------------------------------------------

void criterion_6() {
  double worst_residual = 0.0;
  for (int n : {3, 4, 5}) {
    for (double eps : {-1.0, 0.3, 0.5, 1.0, 2.0}) {
      Sampler rng(6001 + n * 100 + static_cast<int>(eps * 10));
      for (int s = 0; s < 200; ++s) {
        Vec a(n);
        for (int i = 0; i < n; ++i) a(i) = rng.uniform(0.6, 2.2);
        const Vec gamma = rng.unit_vector(n);
        Vec p(n);
        for (int i = 0; i < n; ++i) p(i) = rng.normal();
        p -= p.dot(gamma) * gamma;
        worst_residual =
            std::max(worst_residual, verify_hamiltonization(a, eps, p, gamma));
      }
    }
  }

  double worst_reparam = 0.0;
  for (int n : {3, 4}) {
    for (double eps : {-1.0, 0.3, 0.5, 1.0, 2.0}) {
      Sampler rng(6500 + n * 100 + static_cast<int>(eps * 10));
      Vec a(n);
      for (int i = 0; i < n; ++i) a(i) = rng.uniform(0.6, 2.2);
      const Vec gamma = rng.unit_vector(n);
      Vec p(n);
      for (int i = 0; i < n; ++i) p(i) = rng.normal();
      p -= p.dot(gamma) * gamma;
      const ReparamResult res =
          check_time_reparametrization(a, eps, p, gamma, 1.0, 1e-3);
      worst_reparam = std::max(worst_reparam, res.max_gamma_error);
    }
  }

  Outcome out;
  out.pass = worst_residual < 1e-10 && worst_reparam < 1e-5;
  out.detail = "max field residual " + fmt("%.2e", worst_residual) +
               " < 1e-10 over 200 states x 15 (n,eps); reparametrized "
               "trajectory error " +
               fmt("%.2e", worst_reparam) + " < 1e-5";
  report(6, "Hamiltonization by the reducing multiplier", out);
}

// --- criterion 7: curvature degeneration at eps = 1/2 -----------------------------

void criterion_7() {
  const double coeff = jk_coefficient(0.5);
  double worst = 0.0;
  for (int n : {3, 4}) {
    Sampler rng(7001 + n);
    const auto spec = rng.generic_inertia(n);
    const auto geom = GeometryParams::direct(0.5, 0.45);
    for (int rep = 0; rep < 20; ++rep) {
      const Vec gamma = rng.unit_vector(n);
      Vec p(n);
      for (int i = 0; i < n; ++i) p(i) = rng.normal();
      p -= p.dot(gamma) * gamma;

      auto L = [&](const Vec& gdot, const Vec& g) {
        const Mat w = wedge(g, gdot);
        return 0.5 / (geom.epsilon * geom.epsilon) *
               pairing(spec.apply_modified(w, geom.D), w);
      };
      // independent Euler-Lagrange assembly from L as a black box
      const Mat frame = complete_frame(gamma);
      Mat Q(n - 1, n - 1);
      for (int b = 0; b < n - 1; ++b) {
        const Vec grad = oracles::gradient(
            [&](const Vec& gdot) { return L(gdot, gamma); }, frame.col(b));
        for (int a2 = 0; a2 < n - 1; ++a2) Q(a2, b) = frame.col(a2).dot(grad);
      }
      Vec rhs(n - 1);
      for (int a2 = 0; a2 < n - 1; ++a2) rhs(a2) = frame.col(a2).dot(p);
      const Vec coeffs = Q.ldlt().solve(rhs);
      Vec gamma_dot_el = Vec::Zero(n);
      for (int a2 = 0; a2 < n - 1; ++a2) {
        gamma_dot_el += coeffs(a2) * frame.col(a2);
      }
      const Vec dLdg = oracles::gradient(
          [&](const Vec& g) { return L(gamma_dot_el, g); }, gamma);
      const double mu = -gamma_dot_el.dot(p) - dLdg.dot(gamma);
      const Vec p_dot_el = dLdg + mu * gamma;

      const CotangentRates r = reduced_field_generic(spec, geom, p, gamma);
      worst = std::max(worst,
                       (r.gamma_dot - gamma_dot_el).cwiseAbs().maxCoeff());
      worst = std::max(worst, (r.p_dot - p_dot_el).cwiseAbs().maxCoeff());
    }
  }
  Outcome out;
  out.pass = coeff == 0.0 && worst < 1e-8;
  out.detail = "curvature coefficient " + fmt("%.1e", coeff) +
               " (exact 0), Euler-Lagrange mismatch " + fmt("%.2e", worst) +
               " < 1e-8";
  report(7, "holonomic degeneration at eps = 1/2", out);
}

// --- criterion 8: formulation equivalences -----------------------------------------

void criterion_8() {
  // rubber multiplier vs extended momentum
  Sampler rng(8001);
  const int n = 4;
  const double D = 0.3;
  const auto spec = rng.generic_inertia(n);
  const auto geom = GeometryParams::direct(0.6, D);

  double field_mismatch = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const Vec gamma = rng.unit_vector(n);
    const Mat omega = proj_v(rng.skew(n), gamma);
    const Mat m = spec.apply_modified(omega, D);
    const Mat frame = complete_frame(gamma);
    const RubberRates rr = rubber_field(spec, geom, m, frame);
    const ExtMomentumRates er =
        ext_momentum_field(spec, geom, proj_v(m, gamma), gamma);
    // d/dt proj_v(m) along the rubber flow vs the extended field
    const Vec gamma_dot = rr.frame_dot.col(n - 1);
    const Vec mg = m * gamma;
    const Vec mgd = m * gamma_dot + rr.m_dot * gamma;
    const Mat dproj = mgd * gamma.transpose() - gamma * mgd.transpose() +
                      mg * gamma_dot.transpose() - gamma_dot * mg.transpose();
    field_mismatch = std::max(field_mismatch,
                              (er.mm_dot - dproj).cwiseAbs().maxCoeff());
    field_mismatch = std::max(
        field_mismatch, (er.gamma_dot - gamma_dot).cwiseAbs().maxCoeff());
  }

  // trajectory-level comparison over t in [0,5]
  const auto rubber_sys = make_system(SystemKind::Rubber, spec, geom);
  const auto ext_sys = make_system(SystemKind::RubberExtended, spec, geom);
  Sampler rng2(8009);
  const Vec xr0 = rng2.state(SystemKind::Rubber, spec, geom, 0.8);
  Mat m0, frame0;
  unpack_rubber(xr0, n, m0, frame0);
  const Vec xe0 =
      pack_momentum_sphere(proj_v(m0, frame0.col(n - 1)), frame0.col(n - 1));
  IntegratorConfig config;
  config.h = 1e-3;
  config.t_end = 5.0;
  config.stride = 5;
  config.projection = false;
  const Trajectory tr = integrate(*rubber_sys, config, xr0, {});
  const Trajectory te = integrate(*ext_sys, config, xe0, {});
  double traj_mismatch = 0.0;
  for (std::size_t i = 0; i < std::min(tr.size(), te.size()); ++i) {
    Mat m_r, frame_r, mm_e;
    Vec gamma_e;
    unpack_rubber(tr.states[i], n, m_r, frame_r);
    unpack_momentum_sphere(te.states[i], n, mm_e, gamma_e);
    traj_mismatch = std::max(
        traj_mismatch, (frame_r.col(n - 1) - gamma_e).cwiseAbs().maxCoeff());
  }

  // generic vs special reduced fields under the special operator
  Sampler rng3(8017);
  const auto sp = rng3.special_inertia(n, D);
  const auto geom_sp = GeometryParams::direct(1.3, D);
  double red_field_mismatch = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const Vec gamma = rng3.unit_vector(n);
    Vec p(n);
    for (int i = 0; i < n; ++i) p(i) = rng3.normal();
    p -= p.dot(gamma) * gamma;
    const CotangentRates gen = reduced_field_generic(sp, geom_sp, p, gamma);
    const CotangentRates spc =
        reduced_field_special(sp.diag_params(), geom_sp.epsilon, p, gamma);
    red_field_mismatch =
        std::max({red_field_mismatch,
                  (gen.p_dot - spc.p_dot).cwiseAbs().maxCoeff(),
                  (gen.gamma_dot - spc.gamma_dot).cwiseAbs().maxCoeff()});
  }
  const auto gen_sys = make_system(SystemKind::ReducedGeneric, sp, geom_sp);
  const auto spc_sys = make_system(SystemKind::ReducedSpecial, sp, geom_sp);
  const Vec xc0 = rng3.state(SystemKind::ReducedGeneric, sp, geom_sp);
  const Trajectory tg = integrate(*gen_sys, config, xc0, {});
  const Trajectory ts = integrate(*spc_sys, config, xc0, {});
  double red_traj_mismatch = 0.0;
  for (std::size_t i = 0; i < std::min(tg.size(), ts.size()); ++i) {
    red_traj_mismatch = std::max(
        red_traj_mismatch,
        (tg.states[i] - ts.states[i]).cwiseAbs().maxCoeff());
  }

  Outcome out;
  out.pass = field_mismatch < 1e-10 && traj_mismatch < 1e-6 &&
             red_field_mismatch < 1e-10 && red_traj_mismatch < 1e-6;
  out.detail = "rubber fields " + fmt("%.2e", field_mismatch) +
               ", trajectories " + fmt("%.2e", traj_mismatch) +
               "; reduced fields " + fmt("%.2e", red_field_mismatch) +
               ", trajectories " + fmt("%.2e", red_traj_mismatch);
  report(8, "formulation equivalences", out);
}

// --- criterion 9: metric limits ----------------------------------------------------

void criterion_9() {
  double worst = 0.0;
  for (int n : {3, 4, 5}) {
    Sampler rng(9001 + n);
    for (int rep = 0; rep < 100; ++rep) {
      Vec a(n);
      for (int i = 0; i < n; ++i) a(i) = rng.uniform(0.5, 2.5);
      const Vec gamma = rng.unit_vector(n);
      Vec dgamma(n);
      for (int i = 0; i < n; ++i) dgamma(i) = rng.normal();
      dgamma -= dgamma.dot(gamma) * gamma;
      worst = std::max(worst,
                       std::abs(metric_eval(a, 1.0, gamma, dgamma) -
                                metric_horizontal(a, gamma, dgamma)));
    }
  }
  Outcome out;
  out.pass = worst < 1e-12;
  out.detail = "max pointwise difference " + fmt("%.2e", worst) + " < 1e-12";
  report(9, "metric limit at eps = 1", out);
}

}  // namespace

int main() {
  criterion_1_and_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  std::printf("%s: %d criterion failure(s)\n",
              failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
              failures);
  return failures;
}
