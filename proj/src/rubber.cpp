#include "chapball/rubber.hpp"

#include <cmath>
#include <vector>

namespace chapball {

RubberState::RubberState(SkewMatrix m_, OrthFrame frame_)
    : m(std::move(m_)), frame(std::move(frame_)) {
  if (m.dim() != frame.dim()) {
    throw std::invalid_argument("RubberState: m and frame dimensions differ");
  }
}

double twist_residual(const InertiaSpec& spec, double D, const Mat& m,
                      const Vec& gamma) {
  const Mat omega = spec.solve_modified(m, D);
  const Mat h = proj_h(omega, gamma);
  return std::sqrt(pairing(h, h));
}

Mat lambda0_solve(const InertiaSpec& spec, const GeometryParams& geom,
                  const Mat& m, const Vec& gamma) {
  const int n = spec.n();
  const int H = so_dim(n - 1);
  const Mat omega = spec.solve_modified(m, geom.D);
  const Mat bracket = commutator(m, omega);
  if (H == 0) return Mat::Zero(n, n);  // h_γ trivial for n = 2

  const Mat frame = complete_frame(gamma);
  std::vector<Mat> basis;
  basis.reserve(H);
  for (int i = 0; i < n - 1; ++i)
    for (int j = i + 1; j < n - 1; ++j)
      basis.push_back(wedge(frame.col(i), frame.col(j)));

  Mat A(H, H);
  Vec b(H);
  for (int col = 0; col < H; ++col) {
    const Mat img = spec.solve_modified(basis[col], geom.D);
    for (int row = 0; row < H; ++row) A(row, col) = pairing(basis[row], img);
    b(col) = pairing(basis[col], spec.solve_modified(bracket, geom.D));
  }
  Eigen::LDLT<Mat> ldlt(A);
  if (ldlt.info() != Eigen::Success) {
    throw std::runtime_error("lambda0_solve: singular multiplier system");
  }
  const Vec coeff = ldlt.solve(-b);

  Mat lambda0 = Mat::Zero(n, n);
  for (int idx = 0; idx < H; ++idx) lambda0 += coeff(idx) * basis[idx];
  return lambda0;
}

RubberRates rubber_field(const InertiaSpec& spec, const GeometryParams& geom,
                         const Mat& m, const Mat& frame) {
  const int n = spec.n();
  const Vec gamma = frame.col(n - 1);
  const Mat omega = spec.solve_modified(m, geom.D);
  RubberRates rates;
  rates.m_dot = commutator(m, omega) + lambda0_solve(spec, geom, m, gamma);
  rates.frame_dot = -geom.epsilon * (omega * frame);
  return rates;
}

double rubber_energy(const InertiaSpec& spec, const GeometryParams& geom,
                     const Mat& m) {
  return 0.5 * pairing(m, spec.solve_modified(m, geom.D));
}

ExtMomentumState::ExtMomentumState(SkewMatrix mm_, UnitVector gamma_)
    : mm(std::move(mm_)), gamma(std::move(gamma_)) {
  if (mm.dim() != gamma.dim()) {
    throw std::invalid_argument(
        "ExtMomentumState: mm and gamma dimensions differ");
  }
}

Mat mixed_momentum(const InertiaSpec& spec, double D, const Vec& gamma,
                   const Mat& omega) {
  return proj_v(spec.apply_modified(omega, D), gamma) + proj_h(omega, gamma);
}

Mat mixed_momentum_solve(const InertiaSpec& spec, double D, const Vec& gamma,
                         const Mat& mm) {
  const int n = spec.n();
  const Mat T = operator_matrix(n, [&](const Mat& X) {
    return mixed_momentum(spec, D, gamma, X);
  });
  Eigen::PartialPivLU<Mat> lu(T);
  const Vec sol = lu.solve(vectorize(mm));
  if (!sol.allFinite()) {
    throw std::runtime_error("mixed_momentum_solve: singular recovery map");
  }
  return unvectorize(sol, n);
}

ExtMomentumRates ext_momentum_field(const InertiaSpec& spec,
                                    const GeometryParams& geom, const Mat& mm,
                                    const Vec& gamma) {
  const double eps = geom.epsilon;
  const Mat omega = mixed_momentum_solve(spec, geom.D, gamma, mm);
  const Mat Iw = spec.apply_modified(omega, geom.D);
  ExtMomentumRates rates;
  rates.mm_dot = eps * commutator(mm, omega) +
                 (1.0 - eps) * proj_v(commutator(Iw, omega), gamma);
  rates.gamma_dot = -eps * (omega * gamma);
  return rates;
}

double ext_momentum_energy(const InertiaSpec& spec, const GeometryParams& geom,
                           const Mat& mm, const Vec& gamma) {
  const Mat omega = mixed_momentum_solve(spec, geom.D, gamma, mm);
  return 0.5 * pairing(spec.apply_modified(omega, geom.D), omega);
}

Rubber3DRates rubber_field_3d(const Vec& vector_inertia, double D,
                              const GeometryParams& geom, const Vec& m,
                              const Vec& gamma) {
  if (vector_inertia.size() != 3 || m.size() != 3 || gamma.size() != 3) {
    throw std::invalid_argument("rubber_field_3d: need length-3 vectors");
  }
  const Eigen::Array3d Imod = vector_inertia.array() + D;
  const Eigen::Vector3d mv(m(0), m(1), m(2));
  const Eigen::Vector3d gv(gamma(0), gamma(1), gamma(2));
  const Eigen::Vector3d wv = (mv.array() / Imod).matrix();
  const Eigen::Vector3d mw = mv.cross(wv);

  // multiplier enforcing d/dt(γ,ω) = 0
  const double lambda = -gv.dot((mw.array() / Imod).matrix()) /
                        gv.dot((gv.array() / Imod).matrix());

  Rubber3DRates rates;
  rates.m_dot = mw + lambda * gv;
  rates.gamma_dot = geom.epsilon * gv.cross(wv);
  rates.lambda = lambda;
  return rates;
}

}  // namespace chapball
