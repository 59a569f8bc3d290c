#pragma once

#include <optional>

#include "chapball/son.hpp"

namespace chapball {

/// Rolling configuration:
///   Outside — ball rolls on the outer surface of the fixed sphere,
///   Inside  — ball rolls on the inner surface (σ > ρ),
///   Shell   — the ball is a shell enclosing the fixed sphere (σ < ρ).
enum class Variant { Outside, Inside, Shell };

/// Geometry of the rolling problem. The dynamics depend on it only through
/// ε = σ/(σ±ρ) ("+" for Outside, "-" otherwise) and D = mρ²; fixed-frame
/// diagnostics additionally need the radii themselves.
///
/// ε = 1 corresponds to rolling on a plane (σ → ∞), ε = 1/2 to σ = ρ, and
/// ε = -1 to the shell with ρ = 2σ.
struct GeometryParams {
  double epsilon = 1.0;
  double D = 0.0;  // mρ², kg·m²

  // Set when constructed from radii; diagnostics require them.
  std::optional<double> sigma;
  std::optional<double> rho;
  std::optional<double> mass;
  std::optional<Variant> variant;

  static GeometryParams from_radii(double sigma, double rho, double mass,
                                   Variant variant);
  /// Direct (ε, D) construction, bypassing radii. No diagnostics.
  static GeometryParams direct(double epsilon, double D);

  bool has_radii() const { return sigma.has_value(); }
  /// +1 for Outside, -1 for Inside/Shell.
  double contact_sign() const;
};

/// ε = σ/(σ+ρ) for Outside, σ/(σ-ρ) for Inside and Shell. Throws when the
/// variant's radius ordering makes ε undefined or sign-inconsistent.
double epsilon_of(const GeometryParams& geom);

/// Inertia operator 𝕀 on so(n). Three forms:
///   Generic     — an SPD matrix in the vectorized basis {E_i∧E_j};
///   ChaplyginOp — 𝕀(E_i∧E_j) = D a_i a_j/(D - a_i a_j) E_i∧E_j,
///                 valid for 0 < a_i a_j < D;
///   SpecialOp   — 𝕀(E_i∧E_j) = (a_i a_j - D) E_i∧E_j. 𝕀 itself is
///                 positive only when a_i a_j > D; the modified operator
///                 𝐈 = 𝕀 + D·Id, with eigenvalues a_i a_j, is always
///                 positive, so an indefinite 𝕀 is flagged, not fatal.
class InertiaSpec {
 public:
  enum class Kind { Generic, ChaplyginOp, SpecialOp };

  static InertiaSpec generic(const Mat& matrix);
  static InertiaSpec chaplygin_op(const Vec& a, double D);
  static InertiaSpec special_op(const Vec& a, double D);

  Kind kind() const { return kind_; }
  int n() const { return n_; }
  /// Diagonal parameters a_1..a_n (ChaplyginOp/SpecialOp only).
  const Vec& diag_params() const;
  /// The D baked into the diagonal families' eigenvalues.
  double family_D() const;
  /// False when a SpecialOp has a_i a_j <= D somewhere (indefinite 𝕀).
  bool positive_definite() const { return positive_; }

  /// 𝕀ω.
  Mat apply(const Mat& omega) const;
  /// 𝐈ω = 𝕀ω + Dω.
  Mat apply_modified(const Mat& omega, double D) const;
  /// 𝐈⁻¹X.
  Mat solve_modified(const Mat& X, double D) const;

  /// Matrix of 𝕀 in the vectorized basis.
  const Mat& matrix() const { return matrix_; }
  /// Matrix of 𝐈 = 𝕀 + D·Id.
  Mat modified_matrix(double D) const;

 private:
  InertiaSpec() = default;

  Kind kind_ = Kind::Generic;
  int n_ = 0;
  Vec a_;
  double family_D_ = 0.0;
  bool positive_ = true;
  Mat matrix_;       // 𝕀 in the vectorized basis
  Vec eigenvalues_;  // per-pair eigenvalues for the diagonal families
};

/// Contact-point operator κ(ω) = 𝕀ω + D·proj_v(ω, γ); the momentum of the
/// ball relative to the contact point is k = κ(ω), and ½⟨κω,ω⟩ is the
/// kinetic energy of the constrained system.
Mat kappa_apply(const InertiaSpec& spec, double D, const Vec& gamma,
                const Mat& omega);

/// Matrix of κ in the vectorized basis (symmetric positive definite).
Mat kappa_matrix(const InertiaSpec& spec, double D, const Vec& gamma);

/// Inverts κ: returns ω with κ(ω) = k. Throws if the factorization fails
/// (possible only for an invalid Generic spec).
Mat kappa_solve(const InertiaSpec& spec, double D, const Vec& gamma,
                const Mat& k);

/// Invariant-measure density of the non-rubber rolling, μ(γ) = √det κ.
double density_nonrubber(const InertiaSpec& spec, double D, const Vec& gamma);

/// Rubber densities for 𝐈 = 𝕀 + D·Id and ε ≠ 0:
///   density_rubber_h = (det 𝐈⁻¹|_{h_γ})^{1/(2ε)}   — constrained system,
///   density_rubber_v = (det 𝐈|_{v_γ})^{1/(2ε)-1}   — extended momentum
/// system. Subspace determinants are Gram determinants on orthonormal
/// bases of h_γ / v_γ and do not depend on the basis choice.
double density_rubber_h(const InertiaSpec& spec, double D, const Vec& gamma,
                        double epsilon);
double density_rubber_v(const InertiaSpec& spec, double D, const Vec& gamma,
                        double epsilon);

/// det 𝐈|_{v_γ} as a Gram determinant over an explicit orthonormal basis
/// of v_γ (columns of the frame wedge γ). Exposed for the reduced-system
/// measure, whose density is a power of this determinant.
double det_modified_on_v(const InertiaSpec& spec, double D, const Vec& gamma);

/// det 𝐈⁻¹|_{h_γ} over an explicit orthonormal basis {e_i∧e_j : i<j<n} of
/// h_γ built from the given frame columns (defaults to complete_frame).
double det_modified_inv_on_h(const InertiaSpec& spec, double D,
                             const Vec& gamma);

}  // namespace chapball
