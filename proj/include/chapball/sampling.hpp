#pragma once

#include <random>

#include "chapball/systems.hpp"

namespace chapball {

/// Deterministic draws for admissible states and inertia operators. All
/// randomness in the artifact flows through a seeded engine, so scenarios
/// and verification commands are reproducible.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi);
  double normal();

  Vec unit_vector(int n);
  Mat skew(int n, double scale = 1.0);
  /// Rotation from the QR factor of a Gaussian matrix.
  Mat rotation(int n);

  /// Generic SPD inertia with eigenvalues in [0.5, 2.5].
  InertiaSpec generic_inertia(int n);
  /// Chaplygin diagonal family, a_i ∈ [0.5, 1.2] and D above max a_i a_j.
  InertiaSpec chaplygin_inertia(int n, double* D_out = nullptr);
  /// Special diagonal family, a_i ∈ [1, 2] with positive 𝕀 for the given D.
  InertiaSpec special_inertia(int n, double D);

  /// Admissible flat state for the given system at modest energies.
  Vec state(const SystemKind kind, const InertiaSpec& spec,
            const GeometryParams& geom, double scale = 1.0);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace chapball
