#pragma once

#include <functional>

#include "chapball/types.hpp"

namespace chapball {

// ---------------------------------------------------------------------------
// so(n) linear algebra: wedge products, the invariant pairing, adjoint
// actions, and the γ-dependent orthogonal splitting so(n) = v_γ ⊕ h_γ,
// where v_γ = ℝⁿ∧γ (rotations moving γ) and h_γ is its orthogonal
// complement (rotations fixing the γ-line).
// ---------------------------------------------------------------------------

/// x∧y = xyᵀ - yxᵀ.
Mat wedge(const Vec& x, const Vec& y);

/// Invariant scalar product ⟨X,Y⟩ = -½ tr(XY) on so(n). The basis
/// {E_i∧E_j : i<j} is orthonormal for it.
double pairing(const Mat& X, const Mat& Y);

/// [X,Y] = XY - YX.
Mat commutator(const Mat& X, const Mat& Y);

/// Ad_g X = g X g⁻¹ for g ∈ SO(n). Throws if g is not orthogonal within
/// the given tolerance.
Mat adjoint(const Mat& g, const Mat& X, double tolerance = tol::frame);

/// Orthogonal projection of X onto v_γ = ℝⁿ∧γ:  (Xγ)∧γ = Xγ⊗γ + γ⊗γX.
Mat proj_v(const Mat& X, const Vec& gamma);

/// Complementary projection onto h_γ: X - proj_v(X, γ).
Mat proj_h(const Mat& X, const Vec& gamma);

/// Deterministic orthonormal frame with e_n = γ and det = +1, built from a
/// Householder reflection taking E_n to γ. Two calls with the same γ give
/// bit-identical results; the map is continuous in γ away from the
/// equator γ_n = 0.
Mat complete_frame(const Vec& gamma);

// --- vectorization on the ordered basis {E_i∧E_j : i<j} -------------------

/// Dimension n(n-1)/2 of so(n).
int so_dim(int n);

/// Index of the pair (i,j), i<j, in lexicographic order.
int pair_index(int n, int i, int j);

/// Inverse of pair_index.
std::pair<int, int> index_pair(int n, int idx);

/// Basis element E_i∧E_j (i<j).
Mat basis_element(int n, int i, int j);

/// Coordinates of X in the basis {E_i∧E_j : i<j}; because the basis is
/// orthonormal under the pairing, vectorize(X)·vectorize(Y) = ⟨X,Y⟩.
Vec vectorize(const Mat& X);

/// Inverse of vectorize.
Mat unvectorize(const Vec& v, int n);

/// Matrix of a linear operator on so(n) in the vectorized basis:
/// M(α,β) = ⟨E_α, op(E_β)⟩.
Mat operator_matrix(int n, const std::function<Mat(const Mat&)>& op);

// --- n = 3 isomorphism -----------------------------------------------------
//
// The hat map sends x ∈ ℝ³ to the matrix with hat(x)v = x×v. Under it the
// commutator corresponds to the cross product, [hat(x),hat(y)] = hat(x×y),
// while the wedge picks up a sign: x∧y = hat(y×x) = -hat(x×y).

/// ℝ³ → so(3).
Mat hat(const Vec& x);

/// so(3) → ℝ³, inverse of hat.
Vec unhat(const Mat& X);

}  // namespace chapball
