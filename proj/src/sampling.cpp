#include "chapball/sampling.hpp"

namespace chapball {

double Sampler::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double Sampler::normal() {
  return std::normal_distribution<double>(0.0, 1.0)(engine_);
}

Vec Sampler::unit_vector(int n) {
  Vec v(n);
  do {
    for (int i = 0; i < n; ++i) v(i) = normal();
  } while (v.norm() < 1e-6);
  return v / v.norm();
}

Mat Sampler::skew(int n, double scale) {
  Mat X = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      X(i, j) = scale * normal();
      X(j, i) = -X(i, j);
    }
  return X;
}

Mat Sampler::rotation(int n) {
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = normal();
  const Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  if (q.determinant() < 0.0) q.col(0) *= -1.0;
  return q;
}

InertiaSpec Sampler::generic_inertia(int n) {
  const int N = so_dim(n);
  Mat B(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) B(i, j) = normal();
  const Eigen::HouseholderQR<Mat> qr(B);
  const Mat Q = qr.householderQ();
  Vec eig(N);
  for (int i = 0; i < N; ++i) eig(i) = uniform(0.5, 2.5);
  const Mat M = Q * eig.asDiagonal() * Q.transpose();
  return InertiaSpec::generic(0.5 * (M + M.transpose()));
}

InertiaSpec Sampler::chaplygin_inertia(int n, double* D_out) {
  Vec a(n);
  for (int i = 0; i < n; ++i) a(i) = uniform(0.5, 1.2);
  const double amax = a.maxCoeff();
  const double D = 1.5 * amax * amax;
  if (D_out != nullptr) *D_out = D;
  return InertiaSpec::chaplygin_op(a, D);
}

InertiaSpec Sampler::special_inertia(int n, double D) {
  Vec a(n);
  const double lo = std::max(1.0, 1.1 * std::sqrt(std::max(D, 0.0)));
  for (int i = 0; i < n; ++i) a(i) = uniform(lo, 2.0 * lo);
  return InertiaSpec::special_op(a, D);
}

Vec Sampler::state(const SystemKind kind, const InertiaSpec& spec,
                   const GeometryParams& geom, double scale) {
  const int n = spec.n();
  const Vec gamma = unit_vector(n);
  switch (kind) {
    case SystemKind::NonrubberReduced: {
      const Mat omega = skew(n, scale);
      return pack_nonrubber_reduced(kappa_apply(spec, geom.D, gamma, omega),
                                    gamma);
    }
    case SystemKind::NonrubberFull: {
      const Mat omega = skew(n, scale);
      return pack_nonrubber_full(kappa_apply(spec, geom.D, gamma, omega),
                                 rotation(n), gamma);
    }
    case SystemKind::Rubber: {
      const Mat omega = proj_v(skew(n, scale), gamma);
      const Mat frame = complete_frame(gamma);
      return pack_rubber(spec.apply_modified(omega, geom.D), frame);
    }
    case SystemKind::RubberExtended: {
      const Mat omega = proj_v(skew(n, scale), gamma);
      return pack_momentum_sphere(
          mixed_momentum(spec, geom.D, gamma, omega), gamma);
    }
    case SystemKind::ReducedGeneric:
    case SystemKind::ReducedSpecial:
    case SystemKind::Hamiltonized: {
      Vec p(n);
      for (int i = 0; i < n; ++i) p(i) = scale * normal();
      p -= p.dot(gamma) * gamma;
      return pack_cotangent(p, gamma);
    }
  }
  throw std::logic_error("Sampler::state: unreachable");
}

}  // namespace chapball
