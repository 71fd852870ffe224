#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "hopflink/grid.hpp"

namespace hopflink {

struct DefectCurve {
  std::vector<Vec3> vertices;  // orientation = vertex order
  bool closed = false;
  int W = 0;     // winding number
  int beta = 0;  // |W|
  int eta = 0;   // sign(W)
  std::shared_ptr<DefectCurve> pushoff;

  double length() const;
  Vec3 centroid() const;
};

struct TransversalPatch {
  Vec3 center;
  Vec3 f1, f2;  // orthonormal, spanning the plane normal to the local tangent
  double radius = 0.0;
  Vec3 normal() const { return cross(f1, f2); }
};

struct ExtractStats {
  int degenerate_tets = 0;
  int open_curves = 0;
  int discarded_fragments = 0;
  int perturbed_nodes = 0;
  // sign-flip curves along poles of the field (node values large, not small)
  int pole_artifacts = 0;
};

// Marching tetrahedra (6 tets per cube, consistent main diagonal) on the
// 2-component field; emits chained polylines. Curves touching the box
// boundary come back open.
std::vector<DefectCurve> extract_zero_curves(const VectorLattice& phi,
                                             ExtractStats* stats = nullptr);

// Fix vertex order so the polyline tangent aligns with D = grad phi1 x grad phi2.
// Throws on a non-regular zero (vanishing current along the whole curve).
void orient_by_current(DefectCurve& curve, const VectorLattice& phi);

// Field evaluation for winding computations; either an analytic field or a
// lattice interpolator.
using PlaneSampler = std::function<Vec2(const Vec3&)>;
PlaneSampler lattice_sampler(const VectorLattice& phi);

// Angle-sum degree of phi restricted to the patch circle. Retries with
// radius * {0.5, 2} (up to 4 retries) when a sample falls below the floor, and
// densifies sampling until every wrapped increment is < pi/2.
int winding_number(const PlaneSampler& phi, const TransversalPatch& patch,
                   int samples = 128, double floor = 0.0);

// Patch at the given vertex, frame right-handed around the local tangent.
TransversalPatch make_patch(const DefectCurve& curve, std::size_t vertex_index,
                            double radius);

// W at >= 3 well-separated patches; all must agree. Fills W, beta, eta.
void attach_winding(DefectCurve& curve, const VectorLattice& phi,
                    int patches = 3, double radius = 0.0);

// Flux of j through the patch disk (polar quadrature, trilinear interpolation).
double flux_check(const CurrentLattice& j, const TransversalPatch& patch);

// Level curve {phi = (delta*s, 0)} near the given closed curve, where s is the
// median gradient scale of phi along it; defines the framing for self-linking.
DefectCurve pushoff_curve(const VectorLattice& phi, const DefectCurve& curve,
                          double delta);

}  // namespace hopflink
