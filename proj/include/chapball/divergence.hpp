#pragma once

#include <functional>

#include "chapball/inertia.hpp"

namespace chapball {

// ---------------------------------------------------------------------------
// Liouville-type verification: a density ρ is an invariant-measure density
// for the field f exactly when div(ρf) = 0. The divergence is evaluated by
// central differences in an explicit chart around the test point; the
// sphere factor uses the normalization chart u ↦ (γ₀+Tu)/|γ₀+Tu| whose
// volume distortion has zero gradient at u = 0, so it does not pollute the
// first-derivative estimate.
// ---------------------------------------------------------------------------

/// Σ_i ∂_i(ρ f_i) at chart coordinate 0 by central differences of step h.
double divergence_fd(int dim, const std::function<Vec(const Vec&)>& field,
                     const std::function<double(const Vec&)>& density,
                     double fd_step);

/// divergence_fd at the given step with a Richardson fallback: when the
/// estimates at h and 10h disagree by more than 10%, the h²-extrapolated
/// combination is returned instead.
double divergence_check(int dim, const std::function<Vec(const Vec&)>& field,
                        const std::function<double(const Vec&)>& density,
                        double fd_step = 1e-5);

/// Normalization chart of S^{n-1} centered at γ₀, with tangent directions
/// from complete_frame. All derivatives are closed-form.
class SphereChart {
 public:
  explicit SphereChart(const Vec& gamma0);

  int ambient_dim() const { return n_; }
  int dim() const { return n_ - 1; }
  const Mat& tangent_basis() const { return tangent_; }

  /// ψ(u) = (γ₀ + Tu)/|γ₀ + Tu|.
  Vec point(const Vec& u) const;
  /// n×(n-1) Jacobian ∂ψ/∂u.
  Mat jacobian(const Vec& u) const;
  /// d/dt of the Jacobian columns along chart velocity u̇.
  Mat jacobian_dot(const Vec& u, const Vec& u_dot) const;
  /// Chart velocity u̇ with dψ/dt = γ̇ (γ̇ tangent at ψ(u)).
  Vec pull_velocity(const Vec& u, const Vec& gamma_dot) const;

  /// Rotation R(u) ∈ SO(n) taking γ₀ to ψ(u) in their common plane
  /// (identity at u = 0) and its partial derivatives; used to transport
  /// frames across the chart.
  Mat transport(const Vec& u) const;
  Mat transport_derivative(const Vec& u, int c) const;

 private:
  int n_;
  Vec gamma0_;
  Mat tangent_;  // n×(n-1)
};

// --- invariant-measure checks ------------------------------------------------
// Each returns the finite-difference divergence at the given admissible
// state; a genuinely invariant density gives a value near zero.

/// Non-rubber flow in (ω,γ) with density μ(γ) = √det κ.
double measure_div_nonrubber_omega(const InertiaSpec& spec,
                                   const GeometryParams& geom, const Mat& omega,
                                   const Vec& gamma, double fd_step = 1e-5);

/// Non-rubber flow in (k,γ) with density 1/μ(γ).
double measure_div_nonrubber_k(const InertiaSpec& spec,
                               const GeometryParams& geom, const Mat& k,
                               const Vec& gamma, double fd_step = 1e-5);

/// Rubber flow restricted to the constraint manifold ω ∈ v_γ, in the
/// frame-adapted chart (v, u) where v are the coordinates of ω in the
/// transported basis of v_γ; density μ_ε(γ).
double measure_div_rubber(const InertiaSpec& spec, const GeometryParams& geom,
                          const Mat& m, const Vec& gamma,
                          double fd_step = 1e-5);

/// Extended momentum flow in (𝐦,γ) with density μ̃_ε(γ).
double measure_div_extended(const InertiaSpec& spec,
                            const GeometryParams& geom, const Mat& mm,
                            const Vec& gamma, double fd_step = 1e-5);

/// Reduced flow on T*S^{n-1} in tautological cotangent coordinates with
/// density (det 𝐈|_{v_γ})^{1/(2ε)-1}.
double measure_div_reduced_generic(const InertiaSpec& spec,
                                   const GeometryParams& geom, const Vec& p,
                                   const Vec& gamma, double fd_step = 1e-5);

/// Special-operator reduced flow with density (Aγ,γ)^e; the default
/// exponent is the invariant-measure value (n-2)/(2ε)+2-n, and an override
/// is accepted so that a deliberately wrong exponent can serve as a
/// negative control.
double measure_div_reduced_special(const Vec& a, double epsilon, const Vec& p,
                                   const Vec& gamma, double fd_step = 1e-5,
                                   std::optional<double> exponent_override =
                                       std::nullopt);

}  // namespace chapball
