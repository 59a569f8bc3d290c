#pragma once

#include "chapball/inertia.hpp"

namespace chapball {

// ---------------------------------------------------------------------------
// Rubber Chaplygin ball: rolling without slipping and without twisting.
// The no-twist condition restricts ω = 𝐈⁻¹m to the subspace v_γ; the flow
// enforces it through a Lagrange multiplier λ₀ ∈ h_γ. A moving orthonormal
// frame e_1..e_n with e_n = γ is carried along, evolving by ė_i = -εωe_i.
// ---------------------------------------------------------------------------

struct RubberState {
  SkewMatrix m;     // momentum 𝐈ω
  OrthFrame frame;  // moving frame, last column is γ

  RubberState(SkewMatrix m_, OrthFrame frame_);
  Vec gamma() const { return frame.gamma(); }
};

/// ‖proj_h(𝐈⁻¹m, γ)‖ — the no-twist residual; zero on admissible states.
double twist_residual(const InertiaSpec& spec, double D, const Mat& m,
                      const Vec& gamma);

/// Multiplier λ₀ ∈ h_γ making proj_h(𝐈⁻¹([m,ω] + λ₀), γ) = 0; found by
/// solving the linear system with the Gram matrix of 𝐈⁻¹ on an orthonormal
/// basis of h_γ (the result does not depend on the basis choice).
Mat lambda0_solve(const InertiaSpec& spec, const GeometryParams& geom,
                  const Mat& m, const Vec& gamma);

struct RubberRates {
  Mat m_dot;
  Mat frame_dot;  // column i is ė_i; the last column is γ̇
};

/// ṁ = [m,ω] + λ₀,  ė_i = -εωe_i  (ω = 𝐈⁻¹m).
RubberRates rubber_field(const InertiaSpec& spec, const GeometryParams& geom,
                         const Mat& m, const Mat& frame);

/// Rubber energy ½⟨m, ω⟩.
double rubber_energy(const InertiaSpec& spec, const GeometryParams& geom,
                     const Mat& m);

// --- extended momentum formulation ----------------------------------------
//
// The mixed momentum 𝐦 = proj_v(𝐈ω) + proj_h(ω) closes the extended system
// on so(n)*×S^{n-1} without carrying a frame:
//     𝐦̇ = ε[𝐦,ω] + (1-ε)·proj_v([𝐈ω,ω], γ),   γ̇ = -εωγ.

struct ExtMomentumState {
  SkewMatrix mm;
  UnitVector gamma;

  ExtMomentumState(SkewMatrix mm_, UnitVector gamma_);
};

/// 𝐦 from ω.
Mat mixed_momentum(const InertiaSpec& spec, double D, const Vec& gamma,
                   const Mat& omega);

/// ω from 𝐦 (inverts the linear map above; always solvable for positive 𝐈).
Mat mixed_momentum_solve(const InertiaSpec& spec, double D, const Vec& gamma,
                         const Mat& mm);

struct ExtMomentumRates {
  Mat mm_dot;
  Vec gamma_dot;
};

ExtMomentumRates ext_momentum_field(const InertiaSpec& spec,
                                    const GeometryParams& geom, const Mat& mm,
                                    const Vec& gamma);

/// Energy ½⟨𝐈ω,ω⟩ of the extended system (an integral on the rubber
/// submanifold ω ∈ v_γ, where it is the rubber energy).
double ext_momentum_energy(const InertiaSpec& spec, const GeometryParams& geom,
                           const Mat& mm, const Vec& gamma);

// --- n = 3 specialization ---------------------------------------------------

struct Rubber3DRates {
  Vec m_dot;
  Vec gamma_dot;
  double lambda;
};

/// ṁ⃗ = m⃗×ω⃗ + λγ⃗, γ̇⃗ = ε γ⃗×ω⃗ with ω⃗ = 𝐈⁻¹m⃗ and
/// λ = -(m⃗, 𝐈⁻¹(m⃗×ω⃗))/(γ⃗, 𝐈⁻¹γ⃗), for vector inertia 𝐈 = diag(I_i + D).
Rubber3DRates rubber_field_3d(const Vec& vector_inertia, double D,
                              const GeometryParams& geom, const Vec& m,
                              const Vec& gamma);

}  // namespace chapball
