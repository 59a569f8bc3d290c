#include "chapball/son.hpp"

#include <cmath>

namespace chapball {

Mat wedge(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("wedge: dimension mismatch");
  }
  return x * y.transpose() - y * x.transpose();
}

double pairing(const Mat& X, const Mat& Y) {
  if (X.rows() != Y.rows() || X.cols() != Y.cols()) {
    throw std::invalid_argument("pairing: dimension mismatch");
  }
  return -0.5 * (X * Y).trace();
}

Mat commutator(const Mat& X, const Mat& Y) {
  if (X.rows() != Y.rows()) {
    throw std::invalid_argument("commutator: dimension mismatch");
  }
  return X * Y - Y * X;
}

Mat adjoint(const Mat& g, const Mat& X, double tolerance) {
  const int n = static_cast<int>(g.rows());
  const double breach =
      (g.transpose() * g - Mat::Identity(n, n)).cwiseAbs().maxCoeff();
  if (breach > tolerance) {
    throw std::invalid_argument("adjoint: g is not orthogonal (breach " +
                                std::to_string(breach) + ")");
  }
  return g * X * g.transpose();
}

Mat proj_v(const Mat& X, const Vec& gamma) {
  // (Xγ)∧γ = Xγ⊗γ + γ⊗γX
  const Vec Xg = X * gamma;
  return Xg * gamma.transpose() - gamma * Xg.transpose();
}

Mat proj_h(const Mat& X, const Vec& gamma) { return X - proj_v(X, gamma); }

Mat complete_frame(const Vec& gamma) {
  const int n = static_cast<int>(gamma.size());
  Vec en = Vec::Zero(n);
  en(n - 1) = 1.0;

  // Reflect through whichever of E_n ± γ is farther from zero, then patch
  // the sign so that e_n = γ and det = +1. The branch set is γ_n = 0.
  Mat frame(n, n);
  if (gamma(n - 1) > 0.0) {
    const Vec w = en + gamma;  // ‖w‖² = 2(1 + γ_n) ≥ 2
    frame = Mat::Identity(n, n) - (2.0 / w.squaredNorm()) * (w * w.transpose());
    frame.col(n - 1) = -frame.col(n - 1);  // reflection sends E_n to -γ
  } else {
    const Vec w = en - gamma;  // ‖w‖² = 2(1 - γ_n) ≥ 2
    frame = Mat::Identity(n, n) - (2.0 / w.squaredNorm()) * (w * w.transpose());
    frame.col(0) = -frame.col(0);  // restore det = +1
  }
  return frame;
}

int so_dim(int n) { return n * (n - 1) / 2; }

int pair_index(int n, int i, int j) {
  if (i < 0 || j <= i || j >= n) {
    throw std::invalid_argument("pair_index: need 0 <= i < j < n");
  }
  // pairs (0,1),(0,2),...,(0,n-1),(1,2),... in lexicographic order
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::pair<int, int> index_pair(int n, int idx) {
  for (int i = 0; i < n - 1; ++i) {
    const int row = n - 1 - i;
    if (idx < row) return {i, i + 1 + idx};
    idx -= row;
  }
  throw std::invalid_argument("index_pair: index out of range");
}

Mat basis_element(int n, int i, int j) {
  Mat X = Mat::Zero(n, n);
  X(i, j) = 1.0;
  X(j, i) = -1.0;
  return X;
}

Vec vectorize(const Mat& X) {
  const int n = static_cast<int>(X.rows());
  Vec v(so_dim(n));
  int idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) v(idx++) = X(i, j);
  return v;
}

Mat unvectorize(const Vec& v, int n) {
  if (v.size() != so_dim(n)) {
    throw std::invalid_argument("unvectorize: wrong length");
  }
  Mat X = Mat::Zero(n, n);
  int idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      X(i, j) = v(idx);
      X(j, i) = -v(idx);
      ++idx;
    }
  return X;
}

Mat operator_matrix(int n, const std::function<Mat(const Mat&)>& op) {
  const int N = so_dim(n);
  Mat M(N, N);
  for (int beta = 0; beta < N; ++beta) {
    const auto [i, j] = index_pair(n, beta);
    M.col(beta) = vectorize(op(basis_element(n, i, j)));
  }
  return M;
}

Mat hat(const Vec& x) {
  if (x.size() != 3) throw std::invalid_argument("hat: need length 3");
  Mat X(3, 3);
  X << 0.0, -x(2), x(1), x(2), 0.0, -x(0), -x(1), x(0), 0.0;
  return X;
}

Vec unhat(const Mat& X) {
  if (X.rows() != 3 || X.cols() != 3) {
    throw std::invalid_argument("unhat: need a 3x3 matrix");
  }
  Vec x(3);
  x << X(2, 1), X(0, 2), X(1, 0);
  return x;
}

}  // namespace chapball
