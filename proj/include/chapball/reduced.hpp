#pragma once

#include "chapball/inertia.hpp"

namespace chapball {

// ---------------------------------------------------------------------------
// Reduction of the rubber ball to T*S^{n-1}. The reduced Lagrangian is
//     L_red(γ̇,γ) = (1/2ε²)⟨𝐈(γ∧γ̇), γ∧γ̇⟩,
// the reduced flow carries a curvature correction proportional to
// (2ε-1)/ε², and for inertia operators with 𝐈(E_i∧E_j) = a_i a_j E_i∧E_j
// the flow is Hamiltonizable: after dτ = ν dt, p̃ = νp with
// ν = ε(Aγ,γ)^{1/(2ε)-1} it becomes the geodesic flow of a metric on the
// sphere.
// ---------------------------------------------------------------------------

/// Point of T*S^{n-1} realized in ℝ²ⁿ by (γ,γ) = 1, (γ,p) = 0.
struct CotangentState {
  Vec p;
  UnitVector gamma;

  CotangentState(Vec p_, UnitVector gamma_, double tolerance = tol::cot);
};

/// L_red(γ̇,γ); throws when γ̇ is not tangent within the tolerance.
double reduced_lagrangian(const InertiaSpec& spec, const GeometryParams& geom,
                          const Vec& gamma_dot, const Vec& gamma,
                          double tangency_tol = tol::cot);

/// Closed form of L_red for A = diag(a):
/// (1/2ε²)[(Aγ̇,γ̇)(Aγ,γ) - (Aγ,γ̇)²].
double reduced_lagrangian_special(const Vec& a, double epsilon,
                                  const Vec& gamma_dot, const Vec& gamma);

/// Horizontal lift of γ̇ at (g, r): ω = (1/ε)γ∧γ̇ and
/// V = -(σ±ρ)(±ρ/σ)·gγ̇. Requires geometry with radii.
struct HorizontalLift {
  Mat omega;
  Vec V;
};
HorizontalLift horizontal_lift(const GeometryParams& geom,
                               const Vec& gamma_dot, const Vec& gamma,
                               const Mat& g);

/// Curvature factor (2ε-1)/ε² = 1 - ρ²/σ²; vanishes at ε = 1/2, where the
/// constraints are holonomic.
double jk_coefficient(double epsilon);

/// J-K pairing value ((2ε-1)/ε³)(𝐈(γ∧γ̇)γ̇, ξ).
double jk_term(const InertiaSpec& spec, double D, double epsilon,
               const Vec& gamma_dot, const Vec& gamma, const Vec& xi);

/// Legendre transformation p = -(1/ε²)𝐈(γ∧γ̇)γ and its inverse; the
/// inverse solves an (n-1)-dimensional SPD system in a tangent basis.
Vec legendre_apply(const InertiaSpec& spec, const GeometryParams& geom,
                   const Vec& gamma_dot, const Vec& gamma);
Vec legendre_solve(const InertiaSpec& spec, const GeometryParams& geom,
                   const Vec& p, const Vec& gamma);

struct CotangentRates {
  Vec p_dot;
  Vec gamma_dot;
};

/// Reduced flow for arbitrary 𝐈: γ̇ from the inverse Legendre transform,
/// ṗ = ((1-ε)/ε)Υ + μγ with Υ = (1/ε²)𝐈(γ∧γ̇)γ̇ and μ enforcing
/// d/dt(γ,p) = 0.
CotangentRates reduced_field_generic(const InertiaSpec& spec,
                                     const GeometryParams& geom, const Vec& p,
                                     const Vec& gamma);

/// Closed form for A = diag(a):
///   γ̇ = (ε²/(γ,Aγ))(A⁻¹p - (p,A⁻¹γ)γ),
///   ṗ = (ε(1-ε)/(γ,Aγ)²)[(A⁻¹p,p)Aγ + (p,A⁻¹γ)(Aγ,γ)p]
///       - (ε/(γ,Aγ))(p,A⁻¹p)γ.
CotangentRates reduced_field_special(const Vec& a, double epsilon,
                                     const Vec& p, const Vec& gamma);

/// Energy of the reduced flow; for the special operator equals
/// (ε²/2)(p,A⁻¹p)/(γ,Aγ).
double reduced_energy_generic(const InertiaSpec& spec,
                              const GeometryParams& geom, const Vec& p,
                              const Vec& gamma);
double reduced_energy_special(const Vec& a, double epsilon, const Vec& p,
                              const Vec& gamma);

/// Hamiltonian flow of H = ½(γ,Aγ)^{1-1/ε}(p̃,A⁻¹p̃) on T*S^{n-1},
/// realized with ψ₁ = (γ,γ) = 1, ψ₂ = (p̃,γ) = 0; the flow runs in the
/// rescaled time τ.
CotangentRates hamiltonized_field(const Vec& a, double epsilon, const Vec& pt,
                                  const Vec& gamma);

double hamiltonized_energy(const Vec& a, double epsilon, const Vec& pt,
                           const Vec& gamma);

/// Reducing multiplier ν = ε(Aγ,γ)^{1/(2ε)-1}.
double multiplier(const Vec& a, double epsilon, const Vec& gamma);

/// ds²_{A,ε}(dγ) = (γ,Aγ)^{1/ε-2}[(Adγ,dγ)(Aγ,γ) - (Aγ,dγ)²]; ε = 1
/// recovers the horizontal-rolling metric ds²_A.
double metric_eval(const Vec& a, double epsilon, const Vec& gamma,
                   const Vec& dgamma);
double metric_horizontal(const Vec& a, const Vec& gamma, const Vec& dgamma);

/// Pointwise check that the reduced field is ν times the Hamiltonian field
/// under (p,γ) ↦ (νp,γ), the momentum chain rule included. Returns the max
/// componentwise discrepancy; the contract is < 1e-10 on valid states.
double verify_hamiltonization(const Vec& a, double epsilon, const Vec& p,
                              const Vec& gamma);

/// Trajectory-level check of the time substitution dτ = ν dt: integrates
/// the reduced special flow in t and the Hamiltonian flow in τ (carrying
/// t(τ) as a quadrature) from matched initial data p̃₀ = ν(γ₀)p₀, then
/// compares γ at equal t by Hermite interpolation.
struct ReparamResult {
  double max_gamma_error = 0.0;
  double t_end = 0.0;
  int compared_samples = 0;
};
ReparamResult check_time_reparametrization(const Vec& a, double epsilon,
                                           const Vec& p0, const Vec& gamma0,
                                           double t_end, double h);

}  // namespace chapball
