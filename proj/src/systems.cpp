#include "chapball/systems.hpp"

#include <cmath>
#include <cstdio>

namespace chapball {

SystemKind system_kind_from_string(const std::string& name) {
  if (name == "nonrubber-full") return SystemKind::NonrubberFull;
  if (name == "nonrubber-reduced") return SystemKind::NonrubberReduced;
  if (name == "rubber") return SystemKind::Rubber;
  if (name == "rubber-extended") return SystemKind::RubberExtended;
  if (name == "reduced-generic") return SystemKind::ReducedGeneric;
  if (name == "reduced-special") return SystemKind::ReducedSpecial;
  if (name == "hamiltonized") return SystemKind::Hamiltonized;
  throw std::invalid_argument("unknown system \"" + name + "\"");
}

std::string to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::NonrubberFull: return "nonrubber-full";
    case SystemKind::NonrubberReduced: return "nonrubber-reduced";
    case SystemKind::Rubber: return "rubber";
    case SystemKind::RubberExtended: return "rubber-extended";
    case SystemKind::ReducedGeneric: return "reduced-generic";
    case SystemKind::ReducedSpecial: return "reduced-special";
    case SystemKind::Hamiltonized: return "hamiltonized";
  }
  throw std::logic_error("to_string: unreachable");
}

Vec pack_nonrubber_reduced(const Mat& k, const Vec& gamma) {
  const int n = static_cast<int>(gamma.size());
  Vec x(so_dim(n) + n);
  x << vectorize(k), gamma;
  return x;
}

void unpack_nonrubber_reduced(const Vec& x, int n, Mat& k, Vec& gamma) {
  k = unvectorize(x.head(so_dim(n)), n);
  gamma = x.tail(n);
}

Vec pack_nonrubber_full(const Mat& k, const Mat& g, const Vec& gamma) {
  const int n = static_cast<int>(gamma.size());
  Vec x(so_dim(n) + n * n + n);
  x << vectorize(k), Eigen::Map<const Vec>(g.data(), n * n), gamma;
  return x;
}

void unpack_nonrubber_full(const Vec& x, int n, Mat& k, Mat& g, Vec& gamma) {
  k = unvectorize(x.head(so_dim(n)), n);
  g = Eigen::Map<const Mat>(x.data() + so_dim(n), n, n);
  gamma = x.tail(n);
}

Vec pack_rubber(const Mat& m, const Mat& frame) {
  const int n = static_cast<int>(frame.rows());
  Vec x(so_dim(n) + n * n);
  x << vectorize(m), Eigen::Map<const Vec>(frame.data(), n * n);
  return x;
}

void unpack_rubber(const Vec& x, int n, Mat& m, Mat& frame) {
  m = unvectorize(x.head(so_dim(n)), n);
  frame = Eigen::Map<const Mat>(x.data() + so_dim(n), n, n);
}

Vec pack_momentum_sphere(const Mat& mm, const Vec& gamma) {
  const int n = static_cast<int>(gamma.size());
  Vec x(so_dim(n) + n);
  x << vectorize(mm), gamma;
  return x;
}

void unpack_momentum_sphere(const Vec& x, int n, Mat& mm, Vec& gamma) {
  mm = unvectorize(x.head(so_dim(n)), n);
  gamma = x.tail(n);
}

Vec pack_cotangent(const Vec& p, const Vec& gamma) {
  Vec x(2 * p.size());
  x << p, gamma;
  return x;
}

void unpack_cotangent(const Vec& x, int n, Vec& p, Vec& gamma) {
  p = x.head(n);
  gamma = x.tail(n);
}

Mat polar_rotation(const Mat& g) {
  Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    // flip the weakest singular direction to stay in SO(n)
    Mat u = svd.matrixU();
    u.col(u.cols() - 1) *= -1.0;
    r = u * svd.matrixV().transpose();
  }
  return r;
}

namespace {

std::vector<std::string> skew_labels(int n, const std::string& stem) {
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      labels.push_back(stem + "_" + std::to_string(i) + "_" +
                       std::to_string(j));
  return labels;
}

std::vector<std::string> matrix_labels(int n, const std::string& stem) {
  std::vector<std::string> labels;
  for (int c = 0; c < n; ++c)     // column-major, matching Eigen::Map
    for (int r = 0; r < n; ++r)
      labels.push_back(stem + "_" + std::to_string(r) + "_" +
                       std::to_string(c));
  return labels;
}

std::vector<std::string> vector_labels(int n, const std::string& stem) {
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back(stem + "_" + std::to_string(i));
  return labels;
}

double orthonormality_breach(const Mat& g) {
  const int n = static_cast<int>(g.rows());
  return (g.transpose() * g - Mat::Identity(n, n)).cwiseAbs().maxCoeff();
}

std::string fmt_tol(double tol) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", tol);
  return buf;
}

class SystemBase : public FlowSystem {
 public:
  SystemBase(const InertiaSpec& spec, const GeometryParams& geom)
      : spec_(spec), geom_(geom) {}

  double residual_tolerance() const override { return 1e-8; }

  std::string validate_initial(const Vec& x) const override {
    return describe_violation(x, residual_tolerance());
  }

 protected:
  virtual std::string describe_violation(const Vec& x, double tol) const = 0;

  InertiaSpec spec_;
  GeometryParams geom_;
};

class NonrubberReducedSystem : public SystemBase {
 public:
  using SystemBase::SystemBase;

  std::string name() const override { return "nonrubber-reduced"; }
  int dim() const override { return so_dim(spec_.n()) + spec_.n(); }

  Vec field(const Vec& x) const override {
    const int n = spec_.n();
    Mat k;
    Vec gamma;
    unpack_nonrubber_reduced(x, n, k, gamma);
    const BallRates rates = reduced_field(spec_, geom_, k, gamma);
    return pack_nonrubber_reduced(rates.k_dot, rates.gamma_dot);
  }

  void project(Vec& x) const override {
    const int n = spec_.n();
    x.tail(n).normalize();
  }

  double constraint_residual(const Vec& x) const override {
    return std::abs(x.tail(spec_.n()).norm() - 1.0);
  }

  std::vector<std::string> state_labels() const override {
    auto labels = skew_labels(spec_.n(), "k");
    const auto g = vector_labels(spec_.n(), "gamma");
    labels.insert(labels.end(), g.begin(), g.end());
    return labels;
  }

  std::vector<std::string> check_names() const override {
    std::vector<std::string> names = {"energy", "gamma-norm", "k-norm"};
    if (spec_.n() == 3) {
      names.insert(names.end(), {"F1", "F2", "F3", "F4", "F4tilde"});
    }
    return names;
  }

  double check_value(const std::string& name, const Vec& x) const override {
    const int n = spec_.n();
    Mat k;
    Vec gamma;
    unpack_nonrubber_reduced(x, n, k, gamma);
    if (name == "energy") return energy(spec_, geom_, k, gamma);
    if (name == "gamma-norm") return gamma.norm() - 1.0;
    if (name == "k-norm") return pairing(k, k);
    if (n == 3) {
      const Integrals3D f = integrals_3d(spec_, geom_, k, gamma);
      if (name == "F1") return f.F1;
      if (name == "F2") return f.F2;
      if (name == "F3") return f.F3;
      if (name == "F4") return f.F4;
      if (name == "F4tilde") return f.F4_tilde;
    }
    throw std::invalid_argument("unknown check \"" + name + "\" for " +
                                this->name());
  }

 protected:
  std::string describe_violation(const Vec& x, double tol) const override {
    if (constraint_residual(x) > tol) {
      return "|gamma| - 1 exceeds " + fmt_tol(tol);
    }
    return {};
  }
};

class NonrubberFullSystem : public SystemBase {
 public:
  using SystemBase::SystemBase;

  std::string name() const override { return "nonrubber-full"; }
  int dim() const override {
    const int n = spec_.n();
    return so_dim(n) + n * n + n;
  }

  Vec field(const Vec& x) const override {
    const int n = spec_.n();
    Mat k, g;
    Vec gamma;
    unpack_nonrubber_full(x, n, k, g, gamma);
    const BallRates rates = full_field(spec_, geom_, k, g, gamma);
    return pack_nonrubber_full(rates.k_dot, rates.g_dot, rates.gamma_dot);
  }

  void project(Vec& x) const override {
    const int n = spec_.n();
    Mat k, g;
    Vec gamma;
    unpack_nonrubber_full(x, n, k, g, gamma);
    g = polar_rotation(g);
    gamma.normalize();
    x = pack_nonrubber_full(k, g, gamma);
  }

  double constraint_residual(const Vec& x) const override {
    const int n = spec_.n();
    Mat k, g;
    Vec gamma;
    unpack_nonrubber_full(x, n, k, g, gamma);
    return std::max(std::abs(gamma.norm() - 1.0), orthonormality_breach(g));
  }

  std::vector<std::string> state_labels() const override {
    const int n = spec_.n();
    auto labels = skew_labels(n, "k");
    const auto gl = matrix_labels(n, "g");
    const auto gm = vector_labels(n, "gamma");
    labels.insert(labels.end(), gl.begin(), gl.end());
    labels.insert(labels.end(), gm.begin(), gm.end());
    return labels;
  }

  std::vector<std::string> check_names() const override {
    std::vector<std::string> names = {"energy", "gamma-norm", "g-orth",
                                      "k-norm"};
    if (spec_.n() == 3) {
      names.insert(names.end(), {"F1", "F2", "F3", "F4", "F4tilde"});
    }
    return names;
  }

  double check_value(const std::string& name, const Vec& x) const override {
    const int n = spec_.n();
    Mat k, g;
    Vec gamma;
    unpack_nonrubber_full(x, n, k, g, gamma);
    if (name == "energy") return energy(spec_, geom_, k, gamma);
    if (name == "gamma-norm") return gamma.norm() - 1.0;
    if (name == "g-orth") return orthonormality_breach(g);
    if (name == "k-norm") return pairing(k, k);
    if (n == 3) {
      const Integrals3D f = integrals_3d(spec_, geom_, k, gamma);
      if (name == "F1") return f.F1;
      if (name == "F2") return f.F2;
      if (name == "F3") return f.F3;
      if (name == "F4") return f.F4;
      if (name == "F4tilde") return f.F4_tilde;
    }
    throw std::invalid_argument("unknown check \"" + name + "\" for " +
                                this->name());
  }

 protected:
  std::string describe_violation(const Vec& x, double tol) const override {
    const int n = spec_.n();
    Mat k, g;
    Vec gamma;
    unpack_nonrubber_full(x, n, k, g, gamma);
    if (std::abs(gamma.norm() - 1.0) > tol) {
      return "|gamma| - 1 exceeds " + fmt_tol(tol);
    }
    if (orthonormality_breach(g) > tol) {
      return "attitude orthonormality exceeds " + fmt_tol(tol);
    }
    if (g.determinant() < 0.0) return "attitude determinant is negative";
    return {};
  }
};

class RubberSystem : public SystemBase {
 public:
  using SystemBase::SystemBase;

  std::string name() const override { return "rubber"; }
  int dim() const override {
    const int n = spec_.n();
    return so_dim(n) + n * n;
  }

  Vec field(const Vec& x) const override {
    const int n = spec_.n();
    Mat m, frame;
    unpack_rubber(x, n, m, frame);
    const RubberRates rates = rubber_field(spec_, geom_, m, frame);
    return pack_rubber(rates.m_dot, rates.frame_dot);
  }

  void project(Vec& x) const override {
    const int n = spec_.n();
    Mat m, frame;
    unpack_rubber(x, n, m, frame);
    frame = polar_rotation(frame);
    const Vec gamma = frame.col(n - 1);
    // remove the twist component in the kinetic metric: m -= 𝐈 proj_h(ω)
    const Mat omega = spec_.solve_modified(m, geom_.D);
    m -= spec_.apply_modified(proj_h(omega, gamma), geom_.D);
    x = pack_rubber(m, frame);
  }

  double constraint_residual(const Vec& x) const override {
    const int n = spec_.n();
    Mat m, frame;
    unpack_rubber(x, n, m, frame);
    return std::max(orthonormality_breach(frame),
                    twist_residual(spec_, geom_.D, m, frame.col(n - 1)));
  }

  std::vector<std::string> state_labels() const override {
    const int n = spec_.n();
    auto labels = skew_labels(n, "m");
    const auto fl = matrix_labels(n, "e");
    labels.insert(labels.end(), fl.begin(), fl.end());
    return labels;
  }

  std::vector<std::string> check_names() const override {
    return {"energy", "gamma-norm", "frame-orth", "no-twist"};
  }

  double check_value(const std::string& name, const Vec& x) const override {
    const int n = spec_.n();
    Mat m, frame;
    unpack_rubber(x, n, m, frame);
    if (name == "energy") return rubber_energy(spec_, geom_, m);
    if (name == "gamma-norm") return frame.col(n - 1).norm() - 1.0;
    if (name == "frame-orth") return orthonormality_breach(frame);
    if (name == "no-twist") {
      // max over the no-twist functions φ_ij = ⟨ω, e_i∧e_j⟩
      const Mat omega = spec_.solve_modified(m, geom_.D);
      double worst = 0.0;
      for (int i = 0; i < n - 1; ++i)
        for (int j = i + 1; j < n - 1; ++j)
          worst = std::max(
              worst,
              std::abs(pairing(omega, wedge(frame.col(i), frame.col(j)))));
      return worst;
    }
    throw std::invalid_argument("unknown check \"" + name + "\" for " +
                                this->name());
  }

 protected:
  std::string describe_violation(const Vec& x, double tol) const override {
    const int n = spec_.n();
    Mat m, frame;
    unpack_rubber(x, n, m, frame);
    if (orthonormality_breach(frame) > tol) {
      return "frame orthonormality exceeds " + fmt_tol(tol);
    }
    if (frame.determinant() < 0.0) return "frame determinant is negative";
    if (twist_residual(spec_, geom_.D, m, frame.col(n - 1)) > tol::twist) {
      return "no-twist residual exceeds " + fmt_tol(tol::twist);
    }
    return {};
  }
};

class RubberExtendedSystem : public SystemBase {
 public:
  using SystemBase::SystemBase;

  std::string name() const override { return "rubber-extended"; }
  int dim() const override { return so_dim(spec_.n()) + spec_.n(); }

  Vec field(const Vec& x) const override {
    const int n = spec_.n();
    Mat mm;
    Vec gamma;
    unpack_momentum_sphere(x, n, mm, gamma);
    const ExtMomentumRates rates = ext_momentum_field(spec_, geom_, mm, gamma);
    return pack_momentum_sphere(rates.mm_dot, rates.gamma_dot);
  }

  void project(Vec& x) const override {
    const int n = spec_.n();
    x.tail(n).normalize();
  }

  double constraint_residual(const Vec& x) const override {
    return std::abs(x.tail(spec_.n()).norm() - 1.0);
  }

  std::vector<std::string> state_labels() const override {
    auto labels = skew_labels(spec_.n(), "mm");
    const auto g = vector_labels(spec_.n(), "gamma");
    labels.insert(labels.end(), g.begin(), g.end());
    return labels;
  }

  std::vector<std::string> check_names() const override {
    return {"gamma-norm", "energy", "no-twist"};
  }

  double check_value(const std::string& name, const Vec& x) const override {
    const int n = spec_.n();
    Mat mm;
    Vec gamma;
    unpack_momentum_sphere(x, n, mm, gamma);
    if (name == "gamma-norm") return gamma.norm() - 1.0;
    if (name == "energy") return ext_momentum_energy(spec_, geom_, mm, gamma);
    if (name == "no-twist") {
      const Mat omega = mixed_momentum_solve(spec_, geom_.D, gamma, mm);
      const Mat h = proj_h(omega, gamma);
      return std::sqrt(pairing(h, h));
    }
    throw std::invalid_argument("unknown check \"" + name + "\" for " +
                                this->name());
  }

 protected:
  std::string describe_violation(const Vec& x, double tol) const override {
    if (constraint_residual(x) > tol) {
      return "|gamma| - 1 exceeds " + fmt_tol(tol);
    }
    return {};
  }
};

class CotangentSystemBase : public SystemBase {
 public:
  using SystemBase::SystemBase;

  int dim() const override { return 2 * spec_.n(); }

  void project(Vec& x) const override {
    const int n = spec_.n();
    Vec p, gamma;
    unpack_cotangent(x, n, p, gamma);
    gamma.normalize();
    p -= p.dot(gamma) * gamma;
    x = pack_cotangent(p, gamma);
  }

  double constraint_residual(const Vec& x) const override {
    const int n = spec_.n();
    Vec p, gamma;
    unpack_cotangent(x, n, p, gamma);
    return std::max(std::abs(gamma.norm() - 1.0), std::abs(p.dot(gamma)));
  }

  std::vector<std::string> state_labels() const override {
    auto labels = vector_labels(spec_.n(), "p");
    const auto g = vector_labels(spec_.n(), "gamma");
    labels.insert(labels.end(), g.begin(), g.end());
    return labels;
  }

  std::vector<std::string> check_names() const override {
    return {"energy", "gamma-norm", "p-orth"};
  }

 protected:
  std::string describe_violation(const Vec& x, double tol) const override {
    const int n = spec_.n();
    Vec p, gamma;
    unpack_cotangent(x, n, p, gamma);
    if (std::abs(gamma.norm() - 1.0) > tol) {
      return "|gamma| - 1 exceeds " + fmt_tol(tol);
    }
    if (std::abs(p.dot(gamma)) > tol) {
      return "(gamma,p) exceeds " + fmt_tol(tol);
    }
    return {};
  }

  double common_check(const std::string& name, const Vec& x,
                      const std::function<double(const Vec&, const Vec&)>&
                          energy_fn) const {
    const int n = spec_.n();
    Vec p, gamma;
    unpack_cotangent(x, n, p, gamma);
    if (name == "energy") return energy_fn(p, gamma);
    if (name == "gamma-norm") return gamma.norm() - 1.0;
    if (name == "p-orth") return p.dot(gamma);
    throw std::invalid_argument("unknown check \"" + name + "\" for " +
                                this->name());
  }
};

class ReducedGenericSystem : public CotangentSystemBase {
 public:
  using CotangentSystemBase::CotangentSystemBase;

  std::string name() const override { return "reduced-generic"; }

  Vec field(const Vec& x) const override {
    const int n = spec_.n();
    Vec p, gamma;
    unpack_cotangent(x, n, p, gamma);
    const CotangentRates rates = reduced_field_generic(spec_, geom_, p, gamma);
    return pack_cotangent(rates.p_dot, rates.gamma_dot);
  }

  double check_value(const std::string& name, const Vec& x) const override {
    return common_check(name, x, [&](const Vec& p, const Vec& gamma) {
      return reduced_energy_generic(spec_, geom_, p, gamma);
    });
  }
};

class ReducedSpecialSystem : public CotangentSystemBase {
 public:
  ReducedSpecialSystem(const InertiaSpec& spec, const GeometryParams& geom)
      : CotangentSystemBase(spec, geom), a_(spec.diag_params()) {
    if (spec.kind() != InertiaSpec::Kind::SpecialOp) {
      throw std::invalid_argument(
          "reduced-special requires the special diagonal inertia");
    }
  }

  std::string name() const override { return "reduced-special"; }

  Vec field(const Vec& x) const override {
    const int n = spec_.n();
    Vec p, gamma;
    unpack_cotangent(x, n, p, gamma);
    const CotangentRates rates =
        reduced_field_special(a_, geom_.epsilon, p, gamma);
    return pack_cotangent(rates.p_dot, rates.gamma_dot);
  }

  double check_value(const std::string& name, const Vec& x) const override {
    return common_check(name, x, [&](const Vec& p, const Vec& gamma) {
      return reduced_energy_special(a_, geom_.epsilon, p, gamma);
    });
  }

 private:
  Vec a_;
};

class HamiltonizedSystem : public CotangentSystemBase {
 public:
  HamiltonizedSystem(const InertiaSpec& spec, const GeometryParams& geom)
      : CotangentSystemBase(spec, geom), a_(spec.diag_params()) {
    if (spec.kind() != InertiaSpec::Kind::SpecialOp) {
      throw std::invalid_argument(
          "hamiltonized requires the special diagonal inertia");
    }
  }

  std::string name() const override { return "hamiltonized"; }

  Vec field(const Vec& x) const override {
    const int n = spec_.n();
    Vec pt, gamma;
    unpack_cotangent(x, n, pt, gamma);
    const CotangentRates rates =
        hamiltonized_field(a_, geom_.epsilon, pt, gamma);
    return pack_cotangent(rates.p_dot, rates.gamma_dot);
  }

  double check_value(const std::string& name, const Vec& x) const override {
    return common_check(name, x, [&](const Vec& pt, const Vec& gamma) {
      return hamiltonized_energy(a_, geom_.epsilon, pt, gamma);
    });
  }

 private:
  Vec a_;
};

}  // namespace

std::unique_ptr<FlowSystem> make_system(SystemKind kind,
                                        const InertiaSpec& spec,
                                        const GeometryParams& geom) {
  switch (kind) {
    case SystemKind::NonrubberFull:
      return std::make_unique<NonrubberFullSystem>(spec, geom);
    case SystemKind::NonrubberReduced:
      return std::make_unique<NonrubberReducedSystem>(spec, geom);
    case SystemKind::Rubber:
      return std::make_unique<RubberSystem>(spec, geom);
    case SystemKind::RubberExtended:
      return std::make_unique<RubberExtendedSystem>(spec, geom);
    case SystemKind::ReducedGeneric:
      return std::make_unique<ReducedGenericSystem>(spec, geom);
    case SystemKind::ReducedSpecial:
      return std::make_unique<ReducedSpecialSystem>(spec, geom);
    case SystemKind::Hamiltonized:
      return std::make_unique<HamiltonizedSystem>(spec, geom);
  }
  throw std::logic_error("make_system: unreachable");
}

}  // namespace chapball
