#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hopflink/geometry.hpp"

namespace hopflink {

// Fixed-capacity vectors sized for the largest supported case (n = 4,
// ambient R^7, intrinsic dimension 3).
constexpr int kMaxAmbient = 7;
using AmbientVec = std::array<double, kMaxAmbient>;
using Param = std::array<double, 3>;

// Closed oriented (n-1)-manifold embedded in R^{2n-1} via a parameter-grid
// chart. eval fills the embedding point and the coordinate tangent vectors.
struct ParametricManifold {
  int dim = 1;      // n-1
  int ambient = 3;  // 2n-1
  Param dom_min{}, dom_max{};
  std::function<void(const Param&, AmbientVec&, std::array<AmbientVec, 3>&)> eval;

  double domain_volume() const {
    double v = 1.0;
    for (int i = 0; i < dim; ++i) v *= dom_max[i] - dom_min[i];
    return v;
  }
};

struct LinkingResult {
  double value = 0.0;
  long long rounded = 0;
  std::string method;
  double error_estimate = 0.0;
  long long samples = 0;  // per-axis resolution for quadrature, pairs for MC
  std::uint64_t seed = 0;
  bool reliable = false;  // |value - rounded| <= 0.5
};

// e(u,v) = (x - y)/|x - y|; throws on coincident points.
AmbientVec gauss_map(const AmbientVec& x, const AmbientVec& y, int ambient);

// Manifold constructors -----------------------------------------------------

ParametricManifold circle_manifold(const Vec3& center, const Vec3& f1,
                                   const Vec3& f2, double radius);
// Component of the (p, p*q)-style torus link family:
// ((R + r cos(q t + phase)) cos t, (R + r cos(q t + phase)) sin t, r sin(q t + phase)).
ParametricManifold torus_curve_manifold(double R, double r, int q, double phase);
ParametricManifold polyline_manifold(const std::vector<Vec3>& vertices);
// Round (n-1)-sphere in the n-flat spanned by `frame` (orthonormal) at `center`.
ParametricManifold sphere_manifold(const AmbientVec& center,
                                   const std::vector<AmbientVec>& frame,
                                   double radius, int ambient);

// Flat spanning disk of such a sphere, for the intersection oracle.
struct FlatDisk {
  AmbientVec center{};
  std::vector<AmbientVec> frame;  // orthonormal, spans the n-flat
  double radius = 1.0;
  int ambient = 3;
};

struct SpherePair {
  ParametricManifold first, second;
  FlatDisk second_disk;  // spanning disk of `second`
};

// Canonical generalized Hopf link: unit (n-1)-spheres in complementary-ish
// coordinate flats meeting each other's spanning disks exactly once.
// Supported n: 2 and 4.
SpherePair sphere_pair_standard(int n);

// Rigidly transform a manifold: x -> R x + t (R given column-major 7x7 block,
// only the leading ambient x ambient block is used).
ParametricManifold transform_manifold(const ParametricManifold& m,
                                      const std::array<AmbientVec, kMaxAmbient>& rot,
                                      const AmbientVec& shift);

// Backends ------------------------------------------------------------------

// Product trapezoid rule on the (periodic) parameter grids; n = 2 only.
LinkingResult gauss_linking_quadrature(const ParametricManifold& P,
                                       const ParametricManifold& Q,
                                       int resolution);

// Stratified Monte Carlo over the product parameter domain; any supported n.
LinkingResult gauss_linking_montecarlo(const ParametricManifold& P,
                                       const ParametricManifold& Q,
                                       long long samples, std::uint64_t seed);

// Exact signed-crossing count oracle for closed disjoint polylines in R^3.
long long polyline_linking_exact(const std::vector<Vec3>& P,
                                 const std::vector<Vec3>& Q);

// Exact oracle: signed transversal intersections of a simplicial approximation
// of P with the flat spanning disk of Q.
long long intersection_linking(const ParametricManifold& P, const FlatDisk& disk,
                               int resolution = 64);

// Minimum distance between sample points of the two manifolds; used for the
// disjointness precondition. Throws std::runtime_error when the manifolds are
// too close to resolve (min distance below 3x the max local sample spacing).
double check_disjoint(const ParametricManifold& P, const ParametricManifold& Q,
                      int resolution = 32);

std::vector<Vec3> sample_polyline(const ParametricManifold& curve, int segments);

}  // namespace hopflink
