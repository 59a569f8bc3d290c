#pragma once

#include "chapball/ball.hpp"
#include "chapball/integrate.hpp"
#include "chapball/reduced.hpp"
#include "chapball/rubber.hpp"

namespace chapball {

/// Scenario system identifiers (also the names used in config files).
enum class SystemKind {
  NonrubberFull,
  NonrubberReduced,
  Rubber,
  RubberExtended,
  ReducedGeneric,
  ReducedSpecial,
  Hamiltonized,
};

SystemKind system_kind_from_string(const std::string& name);
std::string to_string(SystemKind kind);

/// Builds the flat-state bridge for a scenario system. Systems built on
/// the special-operator closed forms (ReducedSpecial, Hamiltonized)
/// require a SpecialOp inertia.
std::unique_ptr<FlowSystem> make_system(SystemKind kind,
                                        const InertiaSpec& spec,
                                        const GeometryParams& geom);

// --- flat-state packing ------------------------------------------------------

Vec pack_nonrubber_reduced(const Mat& k, const Vec& gamma);
void unpack_nonrubber_reduced(const Vec& x, int n, Mat& k, Vec& gamma);

Vec pack_nonrubber_full(const Mat& k, const Mat& g, const Vec& gamma);
void unpack_nonrubber_full(const Vec& x, int n, Mat& k, Mat& g, Vec& gamma);

Vec pack_rubber(const Mat& m, const Mat& frame);
void unpack_rubber(const Vec& x, int n, Mat& m, Mat& frame);

Vec pack_momentum_sphere(const Mat& mm, const Vec& gamma);
void unpack_momentum_sphere(const Vec& x, int n, Mat& mm, Vec& gamma);

Vec pack_cotangent(const Vec& p, const Vec& gamma);
void unpack_cotangent(const Vec& x, int n, Vec& p, Vec& gamma);

/// Nearest rotation matrix (polar factor via SVD).
Mat polar_rotation(const Mat& g);

}  // namespace chapball
