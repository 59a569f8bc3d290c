#include "chapball/scenario.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

namespace chapball {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument("scenario: " + where + ": " + what);
}

Vec parse_vector(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = j[i];
  return v;
}

Mat parse_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    fail(where, "expected an array of rows");
  }
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j[r].size()) != cols) fail(where, "ragged rows");
    for (int c = 0; c < cols; ++c) m(r, c) = j[r][c];
  }
  return m;
}

/// Accepts either a vectorized so(n) element or a full n×n matrix.
Mat parse_skew(const json& j, int n, const std::string& where) {
  if (j.is_array() && !j.empty() && j[0].is_array()) {
    const Mat raw = parse_matrix(j, where);
    if (raw.rows() != n) fail(where, "wrong matrix size");
    return SkewMatrix(raw).m();
  }
  const Vec v = parse_vector(j, where);
  if (v.size() != so_dim(n)) fail(where, "wrong vectorized length");
  return unvectorize(v, n);
}

GeometryParams parse_geometry(const json& j) {
  if (j.contains("epsilon")) {
    const double D = j.value("D", 0.0);
    return GeometryParams::direct(j.at("epsilon").get<double>(), D);
  }
  const std::string variant = j.value("variant", "i");
  Variant v;
  if (variant == "i") v = Variant::Outside;
  else if (variant == "ii") v = Variant::Inside;
  else if (variant == "iii") v = Variant::Shell;
  else fail("geometry.variant", "must be \"i\", \"ii\" or \"iii\"");
  return GeometryParams::from_radii(j.at("sigma").get<double>(),
                                    j.at("rho").get<double>(),
                                    j.at("mass").get<double>(), v);
}

InertiaSpec parse_inertia(const json& j, int n, const GeometryParams& geom) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "generic") {
    return InertiaSpec::generic(parse_matrix(j.at("matrix"), "inertia.matrix"));
  }
  const Vec a = parse_vector(j.at("a"), "inertia.a");
  if (a.size() != n) fail("inertia.a", "length must equal n");
  if (kind == "chop") return InertiaSpec::chaplygin_op(a, geom.D);
  if (kind == "specop") return InertiaSpec::special_op(a, geom.D);
  fail("inertia.kind", "must be \"generic\", \"chop\" or \"specop\"");
}

Vec parse_initial(const json& j, SystemKind kind, int n,
                  const InertiaSpec& spec, const GeometryParams& geom,
                  std::uint64_t seed) {
  if (j.value("random", false)) {
    Sampler sampler(seed);
    return sampler.state(kind, spec, geom, j.value("scale", 1.0));
  }
  const bool needs_gamma = !(kind == SystemKind::Rubber && j.contains("frame"));
  if (needs_gamma && !j.contains("gamma")) fail("initial.gamma", "missing");
  const Vec gamma = needs_gamma ? parse_vector(j.at("gamma"), "initial.gamma")
                                : Vec();
  if (needs_gamma && gamma.size() != n) fail("initial.gamma", "wrong length");
  switch (kind) {
    case SystemKind::NonrubberReduced:
      return pack_nonrubber_reduced(parse_skew(j.at("k"), n, "initial.k"),
                                    gamma);
    case SystemKind::NonrubberFull: {
      const Mat g = j.contains("g") ? parse_matrix(j.at("g"), "initial.g")
                                    : Mat::Identity(n, n);
      return pack_nonrubber_full(parse_skew(j.at("k"), n, "initial.k"), g,
                                 gamma);
    }
    case SystemKind::Rubber: {
      Mat m;
      if (j.contains("omega")) {
        m = spec.apply_modified(parse_skew(j.at("omega"), n, "initial.omega"),
                                geom.D);
      } else {
        m = parse_skew(j.at("m"), n, "initial.m");
      }
      const Mat frame = j.contains("frame")
                            ? parse_matrix(j.at("frame"), "initial.frame")
                            : complete_frame(gamma);
      if (frame.rows() != n || frame.cols() != n) {
        fail("initial.frame", "wrong size");
      }
      return pack_rubber(m, frame);
    }
    case SystemKind::RubberExtended:
      return pack_momentum_sphere(parse_skew(j.at("mm"), n, "initial.mm"),
                                  gamma);
    case SystemKind::ReducedGeneric:
    case SystemKind::ReducedSpecial:
    case SystemKind::Hamiltonized:
      return pack_cotangent(parse_vector(j.at("p"), "initial.p"), gamma);
  }
  fail("initial", "unreachable");
}

IntegratorConfig parse_integrator(const json& j) {
  IntegratorConfig config;
  const std::string method = j.value("method", "rk4");
  if (method == "rk4") config.method = IntegratorConfig::Method::RK4;
  else if (method == "rk45") config.method = IntegratorConfig::Method::RK45;
  else fail("integrator.method", "must be \"rk4\" or \"rk45\"");
  config.h = j.value("h", 1e-3);
  config.atol = j.value("atol", 1e-10);
  config.rtol = j.value("rtol", 1e-10);
  config.projection = j.value("projection", true);
  config.t_end = j.value("t_end", 10.0);
  config.stride = j.value("stride", 1);
  config.validate();
  return config;
}

}  // namespace

Scenario parse_scenario(const json& doc) {
  Scenario s;
  s.name = doc.value("name", "scenario");
  s.system = system_kind_from_string(doc.at("system").get<std::string>());
  s.n = doc.at("n").get<int>();
  if (s.n < 2) fail("n", "must be >= 2");
  s.geom = parse_geometry(doc.at("geometry"));
  s.inertia = parse_inertia(doc.at("inertia"), s.n, s.geom);
  s.seed = doc.value("seed", 0);
  s.integrator = doc.contains("integrator")
                     ? parse_integrator(doc.at("integrator"))
                     : IntegratorConfig{};

  const auto system = make_system(s.system, s.spec(), s.geom);
  s.initial = parse_initial(doc.at("initial"), s.system, s.n, s.spec(), s.geom,
                            s.seed);

  const double eps = s.geom.epsilon;
  if (doc.contains("checks")) {
    for (const json& entry : doc.at("checks")) {
      CheckSpec spec = entry.is_string()
                           ? default_check_spec(entry.get<std::string>(), eps)
                           : default_check_spec(
                                 entry.at("name").get<std::string>(), eps);
      if (entry.is_object() && entry.contains("tol")) {
        spec.tolerance = entry.at("tol").get<double>();
      }
      s.checks.push_back(std::move(spec));
    }
  } else {
    for (const std::string& name : system->check_names()) {
      s.checks.push_back(default_check_spec(name, eps));
    }
  }
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("scenario: cannot open \"" + path + "\"");
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& err) {
    throw std::invalid_argument("scenario: parse error in \"" + path +
                                "\": " + err.what());
  }
  Scenario s = parse_scenario(doc);
  if (s.name == "scenario") {
    // default the name to the file stem
    const auto slash = path.find_last_of('/');
    const auto stem = path.substr(slash == std::string::npos ? 0 : slash + 1);
    const auto dot = stem.find_last_of('.');
    s.name = stem.substr(0, dot);
  }
  return s;
}

ScenarioResult run_scenario(const Scenario& scenario) {
  const auto system =
      make_system(scenario.system, scenario.spec(), scenario.geom);
  std::vector<std::string> names;
  names.reserve(scenario.checks.size());
  for (const auto& c : scenario.checks) names.push_back(c.name);

  const auto start = std::chrono::steady_clock::now();
  ScenarioResult result;
  result.trajectory =
      integrate(*system, scenario.integrator, scenario.initial, names);
  result.report = monitor_suite(result.trajectory, scenario.checks);
  result.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

void write_trajectory_csv(const Trajectory& trajectory,
                          const std::string& path) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (out == nullptr) {
    throw std::runtime_error("cannot write \"" + path + "\"");
  }
  std::fputs("t", out);
  for (const auto& label : trajectory.state_labels) {
    std::fprintf(out, ",%s", label.c_str());
  }
  for (const auto& name : trajectory.check_names) {
    std::fprintf(out, ",%s", name.c_str());
  }
  std::fputc('\n', out);
  for (std::size_t row = 0; row < trajectory.size(); ++row) {
    std::fprintf(out, "%.17g", trajectory.t[row]);
    const Vec& x = trajectory.states[row];
    for (int i = 0; i < x.size(); ++i) std::fprintf(out, ",%.17g", x(i));
    const Vec& c = trajectory.check_values[row];
    for (int i = 0; i < c.size(); ++i) std::fprintf(out, ",%.17g", c(i));
    std::fputc('\n', out);
  }
  std::fclose(out);
}

nlohmann::json report_to_json(const Scenario& scenario,
                              const ScenarioResult& result) {
  json checks = json::array();
  for (const CheckReport& c : result.report.checks) {
    checks.push_back({{"name", c.name},
                      {"initial", c.initial},
                      {"max_abs_value", c.max_abs_value},
                      {"max_abs_drift", c.max_abs_drift},
                      {"max_rel_drift", c.max_rel_drift},
                      {"metric", c.metric},
                      {"tolerance", c.tolerance},
                      {"enforced", c.enforced},
                      {"passed", c.passed},
                      {"note", c.note}});
  }
  return json{{"scenario", scenario.name},
              {"system", to_string(scenario.system)},
              {"n", scenario.n},
              {"epsilon", scenario.geom.epsilon},
              {"D", scenario.geom.D},
              {"samples", result.trajectory.size()},
              {"field_evaluations", result.trajectory.field_evaluations},
              {"runtime_s", result.runtime_seconds},
              {"checks", checks},
              {"all_passed", result.report.all_passed}};
}

}  // namespace chapball
