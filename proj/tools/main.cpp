// chapball — simulate an n-dimensional ball rolling over a fixed sphere
// (with and without the no-twist constraint) and verify the structural
// properties of the flows: conservation laws, invariant measures, and the
// Hamiltonization of the reduced system.

#include <CLI11.hpp>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "chapball/divergence.hpp"
#include "chapball/scenario.hpp"

using namespace chapball;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;

int worker_count(std::size_t jobs) {
  unsigned workers = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("CHAPBALL_WORKERS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed > 0) workers = static_cast<unsigned>(parsed);
  }
  if (workers == 0) workers = 1;
  return static_cast<int>(
      std::min<std::size_t>(workers, std::max<std::size_t>(jobs, 1)));
}

/// Runs jobs 0..count-1 across the worker pool; results land in
/// caller-owned slots so output order stays deterministic.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& job) {
  const int workers = worker_count(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    });
  }
  for (auto& t : pool) t.join();
}

struct MeasureOptions {
  std::string system = "nonrubber-reduced";
  int n = 3;
  double eps = 0.7;
  double D = 0.3;
  int samples = 50;
  std::uint64_t seed = 2024;
  double fd_step = 1e-5;
  std::string inertia = "";  // defaulted per system below
  bool negative_control = false;
};

struct MeasureOutcome {
  double max_div = 0.0;
  double threshold = 0.0;
};

MeasureOutcome run_measure(const MeasureOptions& opt) {
  Sampler rng(opt.seed);

  std::string inertia = opt.inertia;
  if (inertia.empty()) {
    inertia = (opt.system == "nonrubber-reduced") ? "chop"
              : (opt.system == "reduced-special") ? "specop"
                                                  : "generic";
  }
  double D = opt.D;
  auto make_spec = [&]() -> InertiaSpec {
    if (inertia == "chop") return rng.chaplygin_inertia(opt.n, &D);
    if (inertia == "specop") return rng.special_inertia(opt.n, opt.D);
    if (inertia == "generic") return rng.generic_inertia(opt.n);
    throw CLI::ValidationError("--inertia must be chop, specop or generic");
  };
  const InertiaSpec spec = make_spec();
  const auto geom = GeometryParams::direct(opt.eps, D);

  MeasureOutcome out;
  for (int s = 0; s < opt.samples; ++s) {
    const Vec gamma = rng.unit_vector(opt.n);
    double div = 0.0;
    if (opt.system == "nonrubber-reduced") {
      const Mat omega = rng.skew(opt.n);
      const double a = std::abs(
          measure_div_nonrubber_omega(spec, geom, omega, gamma, opt.fd_step));
      const double b = std::abs(measure_div_nonrubber_k(
          spec, geom, kappa_apply(spec, D, gamma, omega), gamma, opt.fd_step));
      div = std::max(a, b);
      out.threshold = 1e-5;
    } else if (opt.system == "rubber") {
      const Mat omega = proj_v(rng.skew(opt.n), gamma);
      div = std::abs(measure_div_rubber(
          spec, geom, spec.apply_modified(omega, D), gamma, opt.fd_step));
      out.threshold = 1e-4;
    } else if (opt.system == "rubber-extended") {
      const Mat mm = mixed_momentum(spec, D, gamma, rng.skew(opt.n));
      div = std::abs(measure_div_extended(spec, geom, mm, gamma, opt.fd_step));
      out.threshold = 1e-5;
    } else if (opt.system == "reduced-generic") {
      Vec p(opt.n);
      for (int i = 0; i < opt.n; ++i) p(i) = rng.normal();
      p -= p.dot(gamma) * gamma;
      div = std::abs(
          measure_div_reduced_generic(spec, geom, p, gamma, opt.fd_step));
      out.threshold = 1e-4;
    } else if (opt.system == "reduced-special") {
      Vec p(opt.n);
      for (int i = 0; i < opt.n; ++i) p(i) = rng.normal();
      p -= p.dot(gamma) * gamma;
      const std::optional<double> override_exp =
          opt.negative_control ? std::optional<double>(0.0) : std::nullopt;
      div = std::abs(measure_div_reduced_special(
          spec.diag_params(), opt.eps, p, gamma, opt.fd_step, override_exp));
      out.threshold = 1e-5;
    } else {
      throw CLI::ValidationError("unsupported --system for verify-measure: " +
                                 opt.system);
    }
    out.max_div = std::max(out.max_div, div);
  }
  return out;
}

int cmd_run(const std::vector<std::string>& files, const std::string& out_dir) {
  std::vector<Scenario> scenarios;
  for (const auto& file : files) scenarios.push_back(load_scenario_file(file));
  std::filesystem::create_directories(out_dir);

  std::vector<ScenarioResult> results(scenarios.size());
  std::vector<std::string> errors(scenarios.size());
  parallel_for(scenarios.size(), [&](std::size_t i) {
    try {
      results[i] = run_scenario(scenarios[i]);
    } catch (const std::exception& err) {
      errors[i] = err.what();
    }
  });

  bool all_passed = true;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const Scenario& sc = scenarios[i];
    if (!errors[i].empty()) {
      std::printf("[FAIL] %s: %s\n", sc.name.c_str(), errors[i].c_str());
      all_passed = false;
      continue;
    }
    const ScenarioResult& res = results[i];
    const std::string csv = out_dir + "/" + sc.name + "_trajectory.csv";
    const std::string rep = out_dir + "/" + sc.name + "_report.json";
    write_trajectory_csv(res.trajectory, csv);
    std::ofstream(rep) << report_to_json(sc, res).dump(2) << "\n";

    std::printf("[%s] %s: %zu samples, %.3f s -> %s\n",
                res.report.all_passed ? "PASS" : "FAIL", sc.name.c_str(),
                res.trajectory.size(), res.runtime_seconds, csv.c_str());
    for (const CheckReport& c : res.report.checks) {
      const std::string note = c.note.empty() ? "" : " (" + c.note + ")";
      std::printf("  %-10s metric %.3e tol %.1e %s%s\n", c.name.c_str(),
                  c.metric, c.tolerance,
                  c.enforced ? (c.passed ? "pass" : "FAIL") : "info",
                  note.c_str());
    }
    all_passed = all_passed && res.report.all_passed;
  }
  return all_passed ? kExitPass : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "chapball: rolling of an n-dimensional ball over a fixed sphere\n"
      "(no-slip and no-slip+no-twist), with verification of first\n"
      "integrals, invariant measures, and Hamiltonization."};
  app.require_subcommand(1);

  // --- run -----------------------------------------------------------------
  std::vector<std::string> scenario_files;
  std::string out_dir = ".";
  auto* run = app.add_subcommand("run", "integrate scenario files");
  run->add_option("--scenario,scenarios", scenario_files,
                  "scenario JSON file(s)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out-dir", out_dir, "output directory for CSV/reports");

  // --- verify-measure --------------------------------------------------------
  MeasureOptions mopt;
  auto* vm = app.add_subcommand(
      "verify-measure", "finite-difference invariant-measure verification");
  vm->add_option("--system", mopt.system,
                 "nonrubber-reduced | rubber | rubber-extended | "
                 "reduced-generic | reduced-special")
      ->required();
  vm->add_option("--n", mopt.n, "dimension")->check(CLI::Range(2, 8));
  vm->add_option("--eps", mopt.eps, "geometry parameter epsilon");
  vm->add_option("--D", mopt.D, "D = m rho^2");
  vm->add_option("--samples", mopt.samples, "random phase points");
  vm->add_option("--seed", mopt.seed, "RNG seed");
  vm->add_option("--fd-step", mopt.fd_step, "finite-difference step");
  vm->add_option("--inertia", mopt.inertia, "chop | specop | generic");
  vm->add_flag("--negative-control", mopt.negative_control,
               "use a deliberately wrong density exponent");

  // --- verify-hamiltonization ------------------------------------------------
  int hn = 4;
  double heps = 0.5;
  int hsamples = 200;
  std::uint64_t hseed = 2024;
  auto* vh = app.add_subcommand("verify-hamiltonization",
                                "pointwise check that the reduced field is "
                                "nu times the Hamiltonian field");
  vh->add_option("--n", hn, "dimension")->check(CLI::Range(2, 8));
  vh->add_option("--eps", heps, "epsilon");
  vh->add_option("--samples", hsamples, "random states");
  vh->add_option("--seed", hseed, "RNG seed");

  // --- verify-equivalence ------------------------------------------------------
  int en = 3;
  double eeps = 0.5, et_end = 1.0, eh = 1e-3;
  std::uint64_t eseed = 2024;
  auto* ve = app.add_subcommand(
      "verify-equivalence",
      "trajectory agreement under the reducing-multiplier time substitution");
  ve->add_option("--n", en, "dimension")->check(CLI::Range(2, 8));
  ve->add_option("--eps", eeps, "epsilon");
  ve->add_option("--t-end", et_end, "compared time span");
  ve->add_option("--step", eh, "integration step");
  ve->add_option("--seed", eseed, "RNG seed");

  // --- sweep -------------------------------------------------------------------
  int sn = 3;
  std::string eps_grid = "-1:2:7";
  int sdraws = 3, ssamples = 50;
  std::uint64_t sseed = 2024;
  std::string sweep_out = "sweep.csv";
  auto* sw = app.add_subcommand(
      "sweep", "hamiltonization and measure residuals over a grid of "
               "epsilon and random inertia draws");
  sw->add_option("--n", sn, "dimension")->check(CLI::Range(2, 8));
  sw->add_option("--eps-grid", eps_grid, "lo:hi:count (count >= 1)");
  sw->add_option("--draws", sdraws, "inertia draws per epsilon");
  sw->add_option("--samples", ssamples, "random states per cell");
  sw->add_option("--seed", sseed, "RNG seed");
  sw->add_option("--out", sweep_out, "summary CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);  // prints the message or help text
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (run->parsed()) {
      return cmd_run(scenario_files, out_dir);
    }

    if (vm->parsed()) {
      const MeasureOutcome out = run_measure(mopt);
      const bool pass = mopt.negative_control ? out.max_div > 1e-2
                                              : out.max_div < out.threshold;
      std::printf("verify-measure %s n=%d eps=%g samples=%d: max |div| = %.3e "
                  "(threshold %.0e%s) -> %s\n",
                  mopt.system.c_str(), mopt.n, mopt.eps, mopt.samples,
                  out.max_div, mopt.negative_control ? 1e-2 : out.threshold,
                  mopt.negative_control ? ", expected to exceed" : "",
                  pass ? "PASS" : "FAIL");
      return pass ? kExitPass : kExitCheckFailure;
    }

    if (vh->parsed()) {
      Sampler rng(hseed);
      double worst = 0.0;
      for (int s = 0; s < hsamples; ++s) {
        Vec a(hn);
        for (int i = 0; i < hn; ++i) a(i) = rng.uniform(0.6, 2.2);
        const Vec gamma = rng.unit_vector(hn);
        Vec p(hn);
        for (int i = 0; i < hn; ++i) p(i) = rng.normal();
        p -= p.dot(gamma) * gamma;
        worst = std::max(worst, verify_hamiltonization(a, heps, p, gamma));
      }
      const bool pass = worst < 1e-10;
      std::printf("verify-hamiltonization n=%d eps=%g samples=%d: max "
                  "residual = %.3e (threshold 1e-10) -> %s\n",
                  hn, heps, hsamples, worst, pass ? "PASS" : "FAIL");
      return pass ? kExitPass : kExitCheckFailure;
    }

    if (ve->parsed()) {
      Sampler rng(eseed);
      Vec a(en);
      for (int i = 0; i < en; ++i) a(i) = rng.uniform(0.6, 2.2);
      const Vec gamma = rng.unit_vector(en);
      Vec p(en);
      for (int i = 0; i < en; ++i) p(i) = rng.normal();
      p -= p.dot(gamma) * gamma;
      const ReparamResult res =
          check_time_reparametrization(a, eeps, p, gamma, et_end, eh);
      const bool pass = res.max_gamma_error < 1e-5;
      std::printf("verify-equivalence n=%d eps=%g t_end=%g: max |dgamma| = "
                  "%.3e over %d samples (threshold 1e-5) -> %s\n",
                  en, eeps, et_end, res.max_gamma_error, res.compared_samples,
                  pass ? "PASS" : "FAIL");
      return pass ? kExitPass : kExitCheckFailure;
    }

    if (sw->parsed()) {
      double lo = 0, hi = 0;
      int count = 0;
      if (std::sscanf(eps_grid.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 ||
          count < 1) {
        throw CLI::ValidationError("--eps-grid must be lo:hi:count");
      }
      struct Cell {
        double eps;
        int draw;
        double ham = 0.0;
        double div = 0.0;
        bool pass = false;
      };
      std::vector<Cell> cells;
      for (int e = 0; e < count; ++e) {
        const double eps =
            (count == 1) ? lo : lo + (hi - lo) * e / (count - 1.0);
        if (std::abs(eps) < 1e-9) continue;  // epsilon = 0 is excluded
        for (int d = 0; d < sdraws; ++d) cells.push_back({eps, d});
      }
      parallel_for(cells.size(), [&](std::size_t idx) {
        Cell& cell = cells[idx];
        const std::uint64_t seed = sseed + 7919 * idx;
        Sampler rng(seed);
        Vec a(sn);
        for (int i = 0; i < sn; ++i) a(i) = rng.uniform(0.6, 2.2);
        double ham = 0.0, div = 0.0;
        for (int s = 0; s < ssamples; ++s) {
          const Vec gamma = rng.unit_vector(sn);
          Vec p(sn);
          for (int i = 0; i < sn; ++i) p(i) = rng.normal();
          p -= p.dot(gamma) * gamma;
          ham = std::max(ham, verify_hamiltonization(a, cell.eps, p, gamma));
          div = std::max(div, std::abs(measure_div_reduced_special(
                                  a, cell.eps, p, gamma)));
        }
        cell.ham = ham;
        cell.div = div;
        cell.pass = ham < 1e-10 && div < 1e-5;
      });

      std::ofstream out(sweep_out);
      out << "eps,draw,ham_residual,measure_div,pass\n";
      bool all = true;
      for (const Cell& cell : cells) {
        char line[160];
        std::snprintf(line, sizeof(line), "%.17g,%d,%.17g,%.17g,%d\n",
                      cell.eps, cell.draw, cell.ham, cell.div,
                      cell.pass ? 1 : 0);
        out << line;
        all = all && cell.pass;
      }
      std::printf("sweep n=%d cells=%zu -> %s (summary: %s)\n", sn,
                  cells.size(), all ? "PASS" : "FAIL", sweep_out.c_str());
      return all ? kExitPass : kExitCheckFailure;
    }
  } catch (const CLI::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitCheckFailure;
  }
  return kExitUsage;
}
