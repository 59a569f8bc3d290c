#pragma once

#include <optional>

#include "chapball/inertia.hpp"

namespace chapball {

// ---------------------------------------------------------------------------
// Non-rubber Chaplygin ball rolling over a fixed sphere. The reduced state
// is (k, γ) with k the contact-point momentum and γ the contact normal in
// the body frame; the angular velocity is always recovered by inverting
// the contact operator, ω = κ⁻¹k. The full system carries the attitude g
// in addition.
// ---------------------------------------------------------------------------

struct BallState {
  SkewMatrix k;
  UnitVector gamma;
  std::optional<Mat> g;  // attitude, when the full system is tracked

  BallState(SkewMatrix k_, UnitVector gamma_,
            std::optional<Mat> g_ = std::nullopt);
};

struct BallRates {
  Mat k_dot;
  Vec gamma_dot;
  Mat g_dot;  // empty unless requested from the full field
};

/// Reduced flow:  k̇ = [k, ω],  γ̇ = -ε ω γ,  ω = κ⁻¹k.
BallRates reduced_field(const InertiaSpec& spec, const GeometryParams& geom,
                        const Mat& k, const Vec& gamma);

/// Full flow on T*SO(n)×S^{n-1}: adds ġ = g·ω.
BallRates full_field(const InertiaSpec& spec, const GeometryParams& geom,
                     const Mat& k, const Mat& g, const Vec& gamma);

/// Kinetic energy ½⟨κω, ω⟩ = ½⟨k, ω⟩; the conserved quantity of the flow.
double energy(const InertiaSpec& spec, const GeometryParams& geom,
              const Mat& k, const Vec& gamma);

/// Angular acceleration ω̇ implied by the reduced flow: differentiates
/// k = κ_γ(ω) along the flow and solves for ω̇. Used by the fixed-frame
/// diagnostics and by the flow in (ω, γ) variables.
Mat omega_dot(const InertiaSpec& spec, const GeometryParams& geom,
              const Mat& omega, const Vec& gamma);

/// The same reduced flow written in (ω, γ) variables, where the invariant
/// measure has density μ(γ) = √det κ.
BallRates reduced_field_omega(const InertiaSpec& spec,
                              const GeometryParams& geom, const Mat& omega,
                              const Vec& gamma);

/// Fixed-frame quantities reconstructed from a full-system state:
/// center position and velocity, momentum M = Ad_g(𝕀ω), and the
/// constraint reaction Λ = ±mρ(Ω̇Γ + ΩΓ̇) with the analytic Ω̇.
struct FixedFrameDiag {
  Vec r;       // center position, (σ±ρ)·gγ
  Vec V;       // center velocity, ±ρ·Ω·Γ
  Mat M;       // fixed-frame angular momentum
  Vec Lambda;  // constraint reaction force
  Vec Gamma;   // contact direction gγ
  Mat Omega;   // fixed-frame angular velocity
};

/// Requires geometry constructed from radii and a state carrying g.
FixedFrameDiag diag_fixed_frame(const InertiaSpec& spec,
                                const GeometryParams& geom,
                                const BallState& state);

/// The classical n = 3 first integrals. F4 is an integral only for ε = 1;
/// F4tilde only for ε = -1 (with diagonal vector inertia I₁,I₂,I₃).
struct Integrals3D {
  double F1;        // (γ,γ)
  double F2;        // ½(k,ω)
  double F3;        // (k,k)
  double F4;        // (k,γ)
  double F4_tilde;  // Σ (I_j+I_k-I_i+D) k_i γ_i over cyclic i
};

/// The vector inertia diag(I₁,I₂,I₃) equivalent to the spec's operator on
/// so(3); throws if the operator is not diagonal in the {E_i∧E_j} basis.
Vec vector_inertia_3d(const InertiaSpec& spec);

Integrals3D integrals_3d(const InertiaSpec& spec, const GeometryParams& geom,
                         const Mat& k, const Vec& gamma);

}  // namespace chapball
