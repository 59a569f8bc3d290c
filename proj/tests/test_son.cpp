#include <doctest.h>

#include "chapball/sampling.hpp"
#include "chapball/son.hpp"
#include "oracles.hpp"

using namespace chapball;

namespace {
Vec basis_vec(int n, int i) {
  Vec e = Vec::Zero(n);
  e(i) = 1.0;
  return e;
}
}  // namespace

TEST_CASE("wedge of basis vectors") {
  const Mat w = wedge(basis_vec(4, 0), basis_vec(4, 1));
  CHECK(w(0, 1) == doctest::Approx(1.0));
  CHECK(w(1, 0) == doctest::Approx(-1.0));
  CHECK(w.cwiseAbs().sum() == doctest::Approx(2.0));
}

TEST_CASE("wedge of a vector with itself vanishes") {
  Sampler rng(11);
  const Vec x = rng.unit_vector(5);
  CHECK(wedge(x, x).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("wedge dimension mismatch throws") {
  CHECK_THROWS_AS(wedge(Vec::Ones(3), Vec::Ones(4)), std::invalid_argument);
}

TEST_CASE("pairing of wedges matches the Gram identity and the trace oracle") {
  Sampler rng(17);
  for (int n : {3, 4, 5}) {
    for (int rep = 0; rep < 20; ++rep) {
      Vec x(n), y(n), z(n), w(n);
      for (int i = 0; i < n; ++i) {
        x(i) = rng.normal();
        y(i) = rng.normal();
        z(i) = rng.normal();
        w(i) = rng.normal();
      }
      const double gram = x.dot(z) * y.dot(w) - x.dot(w) * y.dot(z);
      const Mat a = x * y.transpose() - y * x.transpose();
      const Mat b = z * w.transpose() - w * z.transpose();
      const double trace_oracle = -0.5 * (a * b).trace();
      CHECK(pairing(wedge(x, y), wedge(z, w)) ==
            doctest::Approx(gram).epsilon(1e-12));
      CHECK(pairing(wedge(x, y), wedge(z, w)) ==
            doctest::Approx(trace_oracle).epsilon(1e-12));
    }
  }
}

TEST_CASE("pairing on basis elements") {
  CHECK(pairing(basis_element(4, 0, 1), basis_element(4, 0, 1)) ==
        doctest::Approx(1.0));
  CHECK(pairing(basis_element(4, 0, 1), basis_element(4, 0, 2)) ==
        doctest::Approx(0.0));
}

TEST_CASE("pairing equals the entrywise sum over i<j") {
  Sampler rng(23);
  const Mat X = rng.skew(5);
  double sum = 0.0;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) sum += X(i, j) * X(i, j);
  CHECK(pairing(X, X) == doctest::Approx(sum).epsilon(1e-13));
}

TEST_CASE("commutator of X with itself vanishes") {
  Sampler rng(5);
  const Mat X = rng.skew(4);
  CHECK(commutator(X, X).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("adjoint by the identity is the identity") {
  Sampler rng(7);
  const Mat X = rng.skew(4);
  CHECK((adjoint(Mat::Identity(4, 4), X) - X).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0));
}

TEST_CASE("adjoint preserves the pairing") {
  Sampler rng(31);
  for (int n : {3, 4, 5}) {
    for (int rep = 0; rep < 10; ++rep) {
      const Mat g = rng.rotation(n);
      const Mat X = rng.skew(n);
      const Mat Y = rng.skew(n);
      CHECK(std::abs(pairing(adjoint(g, X), adjoint(g, Y)) - pairing(X, Y)) <
            1e-12);
    }
  }
}

TEST_CASE("adjoint rejects non-orthogonal matrices") {
  Sampler rng(3);
  Mat g = Mat::Identity(3, 3);
  g(0, 1) = 0.5;
  CHECK_THROWS_AS(adjoint(g, rng.skew(3)), std::invalid_argument);
}

TEST_CASE("proj_v at gamma = E3 keeps the moving components only") {
  Sampler rng(13);
  const Mat X = rng.skew(3);
  const Vec gamma = basis_vec(3, 2);
  const Mat P = proj_v(X, gamma);
  // entrywise expansion of (Xγ)∧γ for γ = E₃: rows/cols 3 survive
  CHECK(P(0, 1) == doctest::Approx(0.0));
  CHECK(P(0, 2) == doctest::Approx(X(0, 2)).epsilon(1e-14));
  CHECK(P(1, 2) == doctest::Approx(X(1, 2)).epsilon(1e-14));
  CHECK((P + P.transpose()).cwiseAbs().maxCoeff() < 1e-14);  // stays in so(3)
}

TEST_CASE("proj_v is idempotent and self-adjoint") {
  Sampler rng(41);
  for (int n : {3, 4, 5}) {
    const Vec gamma = rng.unit_vector(n);
    const Mat X = rng.skew(n);
    const Mat Y = rng.skew(n);
    const Mat P = proj_v(X, gamma);
    CHECK((proj_v(P, gamma) - P).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(pairing(proj_v(X, gamma), Y - proj_v(Y, gamma))) < 1e-12);
  }
}

TEST_CASE("projections sum to the identity") {
  Sampler rng(43);
  for (int n : {3, 4, 5, 6}) {
    const Vec gamma = rng.unit_vector(n);
    const Mat X = rng.skew(n);
    const Mat sum = proj_v(X, gamma) + proj_h(X, gamma);
    CHECK((sum - X).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("proj_h kills wedges with gamma") {
  Sampler rng(47);
  const int n = 4;
  const Vec gamma = rng.unit_vector(n);
  Vec x(n);
  for (int i = 0; i < n; ++i) x(i) = rng.normal();
  CHECK(proj_h(wedge(x, gamma), gamma).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("proj_h has rank (n-1)(n-2)/2 as an operator") {
  Sampler rng(53);
  for (int n : {3, 4, 5}) {
    const Vec gamma = rng.unit_vector(n);
    const Mat P =
        operator_matrix(n, [&](const Mat& X) { return proj_h(X, gamma); });
    Eigen::FullPivLU<Mat> lu(P);
    lu.setThreshold(1e-10);
    CHECK(lu.rank() == (n - 1) * (n - 2) / 2);
  }
}

TEST_CASE("complete_frame at the north pole is the standard basis") {
  Vec gamma = Vec::Zero(4);
  gamma(3) = 1.0;
  const Mat frame = complete_frame(gamma);
  CHECK((frame - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0));
}

TEST_CASE("complete_frame is orthonormal, oriented, deterministic") {
  Sampler rng(59);
  for (int n : {3, 4, 5, 6}) {
    for (int rep = 0; rep < 10; ++rep) {
      const Vec gamma = rng.unit_vector(n);
      const Mat frame = complete_frame(gamma);
      CHECK((frame.transpose() * frame - Mat::Identity(n, n))
                .cwiseAbs()
                .maxCoeff() < 1e-12);
      CHECK(frame.determinant() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK((frame.col(n - 1) - gamma).cwiseAbs().maxCoeff() < 1e-14);
      const Mat again = complete_frame(gamma);
      CHECK((frame - again).cwiseAbs().maxCoeff() == 0.0);  // bit-identical
    }
  }
}

TEST_CASE("vectorization is a pairing isometry") {
  Sampler rng(61);
  const Mat X = rng.skew(5);
  const Mat Y = rng.skew(5);
  CHECK(vectorize(X).dot(vectorize(Y)) ==
        doctest::Approx(pairing(X, Y)).epsilon(1e-13));
  CHECK((unvectorize(vectorize(X), 5) - X).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pair_index and index_pair are inverse") {
  for (int n : {3, 5, 6}) {
    for (int idx = 0; idx < so_dim(n); ++idx) {
      const auto [i, j] = index_pair(n, idx);
      CHECK(pair_index(n, i, j) == idx);
    }
  }
}

TEST_CASE("hat map matches the cross product, wedge the opposite sign") {
  Sampler rng(67);
  Vec x(3), y(3);
  for (int i = 0; i < 3; ++i) {
    x(i) = rng.normal();
    y(i) = rng.normal();
  }
  const Vec xy = oracles::cross(x, y);
  // hat(x)y = x×y and [hat x, hat y] = hat(x×y)
  CHECK(((hat(x) * y) - xy).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((commutator(hat(x), hat(y)) - hat(xy)).cwiseAbs().maxCoeff() < 1e-14);
  // the wedge carries the opposite sign: x∧y = -hat(x×y)
  CHECK((wedge(x, y) + hat(xy)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((unhat(hat(x)) - x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("SkewMatrix construction validates and antisymmetrizes") {
  Mat raw = Mat::Zero(3, 3);
  raw(0, 1) = 1.0;
  raw(1, 0) = -1.0 + 1e-15;
  const SkewMatrix X(raw);
  CHECK((X.m() + X.m().transpose()).cwiseAbs().maxCoeff() == 0.0);

  raw(1, 0) = -0.5;  // gross violation
  CHECK_THROWS_AS(SkewMatrix{raw}, std::invalid_argument);
  CHECK_THROWS_AS(SkewMatrix{Mat::Zero(1, 1)}, std::invalid_argument);
}

TEST_CASE("UnitVector normalizes and validates") {
  Vec v = Vec::Zero(3);
  v(0) = 1.0 + 1e-14;
  CHECK(UnitVector(v).v().norm() == doctest::Approx(1.0).epsilon(1e-16));
  v(0) = 1.1;
  CHECK_THROWS_AS(UnitVector{v}, std::invalid_argument);
}

TEST_CASE("OrthFrame validates orthonormality and orientation") {
  CHECK_NOTHROW(OrthFrame{Mat::Identity(4, 4)});
  Mat flipped = Mat::Identity(4, 4);
  flipped(0, 0) = -1.0;
  CHECK_THROWS_AS(OrthFrame{flipped}, std::invalid_argument);
  Mat sheared = Mat::Identity(4, 4);
  sheared(0, 1) = 1e-4;
  CHECK_THROWS_AS(OrthFrame{sheared}, std::invalid_argument);
}
