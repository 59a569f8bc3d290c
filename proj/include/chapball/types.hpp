#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace chapball {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Contract tolerances. These are the defaults used by validating
/// constructors; every constructor also accepts an explicit tolerance.
namespace tol {
inline constexpr double skew = 1e-12;   // antisymmetry breach on construction
inline constexpr double unit = 1e-12;   // |γ| - 1 on construction
inline constexpr double frame = 1e-10;  // ‖EᵀE - Id‖ on construction
inline constexpr double twist = 1e-8;   // rubber no-twist residual
inline constexpr double cot = 1e-10;    // (γ,p) residual on T*S^{n-1}
}  // namespace tol

/// Element of so(n): a real n×n skew-symmetric matrix. Used both for
/// angular velocities and (via the pairing) for momenta.
///
/// Construction checks ‖X + Xᵀ‖ against the tolerance and then stores the
/// exact antisymmetrization (X - Xᵀ)/2.
class SkewMatrix {
 public:
  explicit SkewMatrix(const Mat& raw, double tolerance = tol::skew) {
    if (raw.rows() != raw.cols()) {
      throw std::invalid_argument("SkewMatrix: matrix must be square");
    }
    if (raw.rows() < 2) {
      throw std::invalid_argument("SkewMatrix: dimension must be >= 2");
    }
    const double breach = (raw + raw.transpose()).cwiseAbs().maxCoeff();
    if (breach > tolerance) {
      throw std::invalid_argument("SkewMatrix: antisymmetry breach " +
                                  std::to_string(breach));
    }
    m_ = 0.5 * (raw - raw.transpose());
  }

  static SkewMatrix zero(int n) { return SkewMatrix(Mat::Zero(n, n)); }

  const Mat& m() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }

 private:
  Mat m_;
};

/// Point on the unit sphere S^{n-1}. Normalized on construction after the
/// tolerance check.
class UnitVector {
 public:
  explicit UnitVector(const Vec& raw, double tolerance = tol::unit) {
    const double norm = raw.norm();
    if (std::abs(norm - 1.0) > tolerance) {
      throw std::invalid_argument("UnitVector: |v| - 1 = " +
                                  std::to_string(norm - 1.0));
    }
    v_ = raw / norm;
  }

  const Vec& v() const { return v_; }
  int dim() const { return static_cast<int>(v_.size()); }

 private:
  Vec v_;
};

/// Orthonormal frame e_1,...,e_n (columns), det = +1. The last column is
/// the contact normal γ by convention.
class OrthFrame {
 public:
  explicit OrthFrame(const Mat& columns, double tolerance = tol::frame) {
    const int n = static_cast<int>(columns.rows());
    if (columns.cols() != n) {
      throw std::invalid_argument("OrthFrame: matrix must be square");
    }
    const double breach =
        (columns.transpose() * columns - Mat::Identity(n, n))
            .cwiseAbs()
            .maxCoeff();
    if (breach > tolerance) {
      throw std::invalid_argument("OrthFrame: orthonormality breach " +
                                  std::to_string(breach));
    }
    if (columns.determinant() < 0.0) {
      throw std::invalid_argument("OrthFrame: determinant must be +1");
    }
    e_ = columns;
  }

  const Mat& matrix() const { return e_; }
  Vec column(int i) const { return e_.col(i); }
  /// The distinguished last column e_n = γ.
  Vec gamma() const { return e_.col(e_.cols() - 1); }
  int dim() const { return static_cast<int>(e_.rows()); }

 private:
  Mat e_;
};

}  // namespace chapball
