#pragma once

#include <functional>
#include <string>

#include "hopflink/grid.hpp"

namespace hopflink {

// Analytic fields are plain callables; constructors below build the canonical
// ones. All of them are total and deterministic.
using S2Field = std::function<Vec3(const Vec3&)>;
using R2Field = std::function<Vec2(const Vec3&)>;

// Unit 3-vector field realizing the Hopf map after one-point compactification
// of R^3: inverse-stereographic lift to S^3 followed by the standard fibration.
// n(0) = n(inf) = (0,0,-1); every fiber is a round circle.
Vec3 hopf_unit_point(const Vec3& x);
S2Field hopf_unit_field();

enum class MilnorTag { u2_minus_v2, z1z2, z1sq };
MilnorTag milnor_tag_from_string(const std::string& s);
std::string to_string(MilnorTag t);

// Complex polynomial in the inverse-stereographic coordinates (u, v) of S^3,
// returned as a real 2-vector. Zero sets: u^2-v^2 -> two linked circles,
// u*v -> ring plus axis line, u^2 -> one circle of multiplicity 2.
Vec2 milnor_point(MilnorTag tag, const Vec3& x);
R2Field milnor_field(MilnorTag tag);

// phi(x) = stereographic projection of n(x) from the pole -p into the plane
// through the sphere center orthogonal to p. phi = 0 iff n = p.
// Throws std::invalid_argument if p collides with the field's boundary value.
R2Field preimage_phi(const S2Field& nfield, const Vec3& p);

// Orthonormal (e1, e2) with (e1, e2, p) right-handed; deterministic in p.
std::array<Vec3, 2> tangent_basis(const Vec3& p);

// Inverse stereographic lift of an order-parameter field to S^2:
// n = (2 phi, |phi|^2 - 1) / (|phi|^2 + 1).
Vec3 lift_point(const Vec2& phi);
S2Field lift_to_sphere(const R2Field& phi);

S2Field constant_s2(const Vec3& value);
R2Field constant_r2(const Vec2& value);

// Boundary value probe: field evaluated at a fixed far point.
Vec3 far_value(const S2Field& f);
Vec2 far_value(const R2Field& f);

UnitSphereLattice sample(const S2Field& f, const GridSpec& grid);
VectorLattice sample(const R2Field& f, const GridSpec& grid);

// m = phi/|phi| with Euclidean norm; nodes with |phi| < floor are masked.
// floor <= 0 selects the default 1e-8 * median|phi|.
DirectionLattice normalize_phi(const VectorLattice& phi, double floor = 0.0);

double median_phi_norm(const VectorLattice& phi);

struct BoundaryCheck {
  bool pass = false;
  double max_deviation = 0.0;
};

BoundaryCheck check_boundary(const UnitSphereLattice& lat, const Vec3& n0, double tol);
BoundaryCheck check_boundary(const VectorLattice& lat, const Vec2& phi0, double tol);

}  // namespace hopflink
