#include "chapball/inertia.hpp"

#include <cmath>
#include <vector>

namespace chapball {

GeometryParams GeometryParams::from_radii(double sigma, double rho,
                                          double mass, Variant variant) {
  if (sigma <= 0.0 || rho <= 0.0 || mass <= 0.0) {
    throw std::invalid_argument("GeometryParams: radii and mass must be > 0");
  }
  GeometryParams g;
  g.sigma = sigma;
  g.rho = rho;
  g.mass = mass;
  g.variant = variant;
  g.D = mass * rho * rho;
  g.epsilon = epsilon_of(g);
  return g;
}

GeometryParams GeometryParams::direct(double epsilon, double D) {
  if (epsilon == 0.0) {
    throw std::invalid_argument("GeometryParams: epsilon must be nonzero");
  }
  if (D < 0.0) {
    throw std::invalid_argument("GeometryParams: D must be >= 0");
  }
  GeometryParams g;
  g.epsilon = epsilon;
  g.D = D;
  return g;
}

double GeometryParams::contact_sign() const {
  if (variant.has_value()) {
    return (*variant == Variant::Outside) ? 1.0 : -1.0;
  }
  // ε = σ/(σ+ρ) ∈ (0,1) for Outside; Inside gives ε > 1, Shell ε < 0.
  return (epsilon > 0.0 && epsilon < 1.0) ? 1.0 : -1.0;
}

double epsilon_of(const GeometryParams& geom) {
  if (!geom.has_radii()) return geom.epsilon;
  const double sigma = *geom.sigma;
  const double rho = *geom.rho;
  switch (*geom.variant) {
    case Variant::Outside:
      return sigma / (sigma + rho);
    case Variant::Inside:
      if (sigma <= rho) {
        throw std::invalid_argument("epsilon_of: inside rolling needs σ > ρ");
      }
      return sigma / (sigma - rho);
    case Variant::Shell:
      if (sigma >= rho) {
        throw std::invalid_argument("epsilon_of: shell rolling needs σ < ρ");
      }
      return sigma / (sigma - rho);
  }
  throw std::logic_error("epsilon_of: unreachable");
}

namespace {

int dim_from_so(int N) {
  // inverse of N = n(n-1)/2
  const int n = static_cast<int>(std::lround((1.0 + std::sqrt(1.0 + 8.0 * N)) / 2.0));
  if (so_dim(n) != N) {
    throw std::invalid_argument("InertiaSpec: matrix size is not n(n-1)/2");
  }
  return n;
}

Vec pair_products(const Vec& a) {
  const int n = static_cast<int>(a.size());
  Vec prod(so_dim(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) prod(pair_index(n, i, j)) = a(i) * a(j);
  return prod;
}

}  // namespace

InertiaSpec InertiaSpec::generic(const Mat& matrix) {
  if (matrix.rows() != matrix.cols()) {
    throw std::invalid_argument("InertiaSpec: matrix must be square");
  }
  const double asym = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) {
    throw std::invalid_argument("InertiaSpec: matrix must be symmetric");
  }
  Eigen::LDLT<Mat> ldlt(matrix);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw std::invalid_argument("InertiaSpec: matrix must be positive definite");
  }
  InertiaSpec spec;
  spec.kind_ = Kind::Generic;
  spec.n_ = dim_from_so(static_cast<int>(matrix.rows()));
  spec.matrix_ = 0.5 * (matrix + matrix.transpose());
  return spec;
}

InertiaSpec InertiaSpec::chaplygin_op(const Vec& a, double D) {
  const int n = static_cast<int>(a.size());
  if (n < 2) throw std::invalid_argument("InertiaSpec: need n >= 2");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double prod = a(i) * a(j);
      if (!(prod > 0.0 && prod < D)) {
        throw std::invalid_argument(
            "InertiaSpec: Chaplygin operator needs 0 < a_i a_j < D");
      }
    }
  InertiaSpec spec;
  spec.kind_ = Kind::ChaplyginOp;
  spec.n_ = n;
  spec.a_ = a;
  spec.family_D_ = D;
  const Vec prod = pair_products(a);
  spec.eigenvalues_ = (D * prod.array() / (D - prod.array())).matrix();
  spec.matrix_ = spec.eigenvalues_.asDiagonal();
  return spec;
}

InertiaSpec InertiaSpec::special_op(const Vec& a, double D) {
  const int n = static_cast<int>(a.size());
  if (n < 2) throw std::invalid_argument("InertiaSpec: need n >= 2");
  if (a.minCoeff() <= 0.0) {
    throw std::invalid_argument("InertiaSpec: parameters a_i must be > 0");
  }
  InertiaSpec spec;
  spec.kind_ = Kind::SpecialOp;
  spec.n_ = n;
  spec.a_ = a;
  spec.family_D_ = D;
  const Vec prod = pair_products(a);
  spec.eigenvalues_ = (prod.array() - D).matrix();
  spec.positive_ = spec.eigenvalues_.minCoeff() > 0.0;
  spec.matrix_ = spec.eigenvalues_.asDiagonal();
  return spec;
}

const Vec& InertiaSpec::diag_params() const {
  if (kind_ == Kind::Generic) {
    throw std::logic_error("InertiaSpec: generic operator has no a_i");
  }
  return a_;
}

double InertiaSpec::family_D() const {
  if (kind_ == Kind::Generic) {
    throw std::logic_error("InertiaSpec: generic operator has no family D");
  }
  return family_D_;
}

Mat InertiaSpec::apply(const Mat& omega) const {
  if (omega.rows() != n_) {
    throw std::invalid_argument("InertiaSpec::apply: dimension mismatch");
  }
  if (kind_ == Kind::Generic) {
    return unvectorize(matrix_ * vectorize(omega), n_);
  }
  return unvectorize(eigenvalues_.cwiseProduct(vectorize(omega)), n_);
}

Mat InertiaSpec::apply_modified(const Mat& omega, double D) const {
  return apply(omega) + D * omega;
}

Mat InertiaSpec::solve_modified(const Mat& X, double D) const {
  if (kind_ == Kind::Generic) {
    const Mat M = matrix_ + D * Mat::Identity(matrix_.rows(), matrix_.cols());
    return unvectorize(Eigen::LDLT<Mat>(M).solve(vectorize(X)), n_);
  }
  return unvectorize(
      (vectorize(X).array() / (eigenvalues_.array() + D)).matrix(), n_);
}

Mat InertiaSpec::modified_matrix(double D) const {
  return matrix_ + D * Mat::Identity(matrix_.rows(), matrix_.cols());
}

Mat kappa_apply(const InertiaSpec& spec, double D, const Vec& gamma,
                const Mat& omega) {
  return spec.apply(omega) + D * proj_v(omega, gamma);
}

Mat kappa_matrix(const InertiaSpec& spec, double D, const Vec& gamma) {
  const int n = spec.n();
  Mat P = operator_matrix(n, [&](const Mat& X) { return proj_v(X, gamma); });
  return spec.matrix() + D * P;
}

Mat kappa_solve(const InertiaSpec& spec, double D, const Vec& gamma,
                const Mat& k) {
  const Mat K = kappa_matrix(spec, D, gamma);
  Eigen::LDLT<Mat> ldlt(K);
  if (ldlt.info() != Eigen::Success) {
    throw std::runtime_error("kappa_solve: singular contact operator");
  }
  return unvectorize(ldlt.solve(vectorize(k)), spec.n());
}

double density_nonrubber(const InertiaSpec& spec, double D, const Vec& gamma) {
  return std::sqrt(kappa_matrix(spec, D, gamma).determinant());
}

namespace {

/// Gram matrix ⟨b_α, op(b_β)⟩ for columns of a basis list.
Mat gram(const std::vector<Mat>& basis, const std::function<Mat(const Mat&)>& op) {
  const int m = static_cast<int>(basis.size());
  Mat G(m, m);
  for (int b = 0; b < m; ++b) {
    const Mat img = op(basis[b]);
    for (int a = 0; a < m; ++a) G(a, b) = pairing(basis[a], img);
  }
  return G;
}

std::vector<Mat> v_basis(const Mat& frame) {
  const int n = static_cast<int>(frame.rows());
  std::vector<Mat> basis;
  basis.reserve(n - 1);
  const Vec gamma = frame.col(n - 1);
  for (int i = 0; i < n - 1; ++i) basis.push_back(wedge(frame.col(i), gamma));
  return basis;
}

std::vector<Mat> h_basis(const Mat& frame) {
  const int n = static_cast<int>(frame.rows());
  std::vector<Mat> basis;
  basis.reserve(so_dim(n - 1));
  for (int i = 0; i < n - 1; ++i)
    for (int j = i + 1; j < n - 1; ++j)
      basis.push_back(wedge(frame.col(i), frame.col(j)));
  return basis;
}

}  // namespace

double det_modified_on_v(const InertiaSpec& spec, double D, const Vec& gamma) {
  const Mat frame = complete_frame(gamma);
  return gram(v_basis(frame), [&](const Mat& X) {
           return spec.apply_modified(X, D);
         })
      .determinant();
}

double det_modified_inv_on_h(const InertiaSpec& spec, double D,
                             const Vec& gamma) {
  const Mat frame = complete_frame(gamma);
  return gram(h_basis(frame), [&](const Mat& X) {
           return spec.solve_modified(X, D);
         })
      .determinant();
}

double density_rubber_h(const InertiaSpec& spec, double D, const Vec& gamma,
                        double epsilon) {
  if (epsilon == 0.0) {
    throw std::invalid_argument("density_rubber_h: epsilon must be nonzero");
  }
  if (gamma.size() == 2) return 1.0;  // h_γ is trivial for n = 2
  return std::pow(det_modified_inv_on_h(spec, D, gamma), 0.5 / epsilon);
}

double density_rubber_v(const InertiaSpec& spec, double D, const Vec& gamma,
                        double epsilon) {
  if (epsilon == 0.0) {
    throw std::invalid_argument("density_rubber_v: epsilon must be nonzero");
  }
  return std::pow(det_modified_on_v(spec, D, gamma), 0.5 / epsilon - 1.0);
}

}  // namespace chapball
