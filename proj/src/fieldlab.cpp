#include "hopflink/fieldlab.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace hopflink {

Vec3 hopf_unit_point(const Vec3& x) {
  const double r2 = dot(x, x);
  const double s = 1.0 / (r2 + 1.0);
  // u in S^3
  const double u1 = 2.0 * x[0] * s;
  const double u2 = 2.0 * x[1] * s;
  const double u3 = 2.0 * x[2] * s;
  const double u4 = (r2 - 1.0) * s;
  return {2.0 * (u1 * u3 + u2 * u4),
          2.0 * (u2 * u3 - u1 * u4),
          u1 * u1 + u2 * u2 - u3 * u3 - u4 * u4};
}

S2Field hopf_unit_field() {
  return [](const Vec3& x) { return hopf_unit_point(x); };
}

MilnorTag milnor_tag_from_string(const std::string& s) {
  if (s == "u2_minus_v2") return MilnorTag::u2_minus_v2;
  if (s == "z1z2") return MilnorTag::z1z2;
  if (s == "z1sq") return MilnorTag::z1sq;
  throw std::invalid_argument("unknown milnor tag: " + s);
}

std::string to_string(MilnorTag t) {
  switch (t) {
    case MilnorTag::u2_minus_v2: return "u2_minus_v2";
    case MilnorTag::z1z2: return "z1z2";
    case MilnorTag::z1sq: return "z1sq";
  }
  return "?";
}

Vec2 milnor_point(MilnorTag tag, const Vec3& x) {
  const double r2 = dot(x, x);
  const double s = 1.0 / (r2 + 1.0);
  const std::complex<double> u((r2 - 1.0) * s, 2.0 * x[2] * s);
  const std::complex<double> v(2.0 * x[0] * s, 2.0 * x[1] * s);
  std::complex<double> f;
  switch (tag) {
    case MilnorTag::u2_minus_v2: f = u * u - v * v; break;
    case MilnorTag::z1z2: f = u * v; break;
    case MilnorTag::z1sq: f = u * u; break;
  }
  return {f.real(), f.imag()};
}

R2Field milnor_field(MilnorTag tag) {
  return [tag](const Vec3& x) { return milnor_point(tag, x); };
}

std::array<Vec3, 2> tangent_basis(const Vec3& p) {
  // Seed axis: the one least aligned with p.
  int a = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(p[i]) < std::abs(p[a])) a = i;
  Vec3 seed{0, 0, 0};
  seed[a] = 1.0;
  Vec3 e1 = normalized(seed - dot(seed, p) * p);
  Vec3 e2 = cross(p, e1);  // (e1, e2, p) right-handed
  return {e1, e2};
}

static const Vec3 kFarPoint{737000.1, -413000.7, 551000.3};

Vec3 far_value(const S2Field& f) { return f(kFarPoint); }
Vec2 far_value(const R2Field& f) { return f(kFarPoint); }

R2Field preimage_phi(const S2Field& nfield, const Vec3& p) {
  const Vec3 pu = normalized(p);
  const Vec3 n0 = far_value(nfield);
  if (std::abs(dot(pu, n0)) > 1.0 - 1e-6)
    throw std::invalid_argument(
        "preimage_phi: target collides with the field's boundary value");
  const auto basis = tangent_basis(pu);
  return [nfield, pu, basis](const Vec3& x) -> Vec2 {
    const Vec3 n = nfield(x);
    const double denom = 1.0 + dot(n, pu);
    return {dot(n, basis[0]) / denom, dot(n, basis[1]) / denom};
  };
}

Vec3 lift_point(const Vec2& phi) {
  const double q = phi[0] * phi[0] + phi[1] * phi[1];
  const double s = 1.0 / (q + 1.0);
  return {2.0 * phi[0] * s, 2.0 * phi[1] * s, (q - 1.0) * s};
}

S2Field lift_to_sphere(const R2Field& phi) {
  return [phi](const Vec3& x) { return lift_point(phi(x)); };
}

S2Field constant_s2(const Vec3& value) {
  const Vec3 v = normalized(value);
  return [v](const Vec3&) { return v; };
}

R2Field constant_r2(const Vec2& value) {
  return [value](const Vec3&) { return value; };
}

namespace {

template <class Lat, class Field>
void sample_into(Lat& lat, const Field& f) {
  const GridSpec& g = lat.grid;
  for (int k = 0; k < g.nodes[2]; ++k)
    for (int j = 0; j < g.nodes[1]; ++j)
      for (int i = 0; i < g.nodes[0]; ++i) {
        const auto v = f(g.coord(i, j, k));
        for (double c : v)
          if (!std::isfinite(c)) {
            const Vec3 x = g.coord(i, j, k);
            std::ostringstream msg;
            msg << "sample: non-finite field value at (" << x[0] << ", " << x[1]
                << ", " << x[2] << ")";
            throw std::runtime_error(msg.str());
          }
        lat.at(i, j, k) = v;
      }
}

}  // namespace

UnitSphereLattice sample(const S2Field& f, const GridSpec& grid) {
  UnitSphereLattice lat(grid);
  sample_into(lat, f);
  lat.boundary_value = far_value(f);
  return lat;
}

VectorLattice sample(const R2Field& f, const GridSpec& grid) {
  VectorLattice lat(grid);
  sample_into(lat, f);
  lat.boundary_value = far_value(f);
  return lat;
}

double median_phi_norm(const VectorLattice& phi) {
  std::vector<double> norms(phi.values.size());
  for (std::size_t i = 0; i < phi.values.size(); ++i)
    norms[i] = std::hypot(phi.values[i][0], phi.values[i][1]);
  auto mid = norms.begin() + norms.size() / 2;
  std::nth_element(norms.begin(), mid, norms.end());
  return *mid;
}

DirectionLattice normalize_phi(const VectorLattice& phi, double floor) {
  if (floor <= 0.0) floor = 1e-8 * median_phi_norm(phi);
  if (floor <= 0.0)
    throw std::invalid_argument("normalize_phi: field is identically zero");
  DirectionLattice m(phi.grid);
  m.mask.assign(phi.values.size(), 0);
  for (std::size_t i = 0; i < phi.values.size(); ++i) {
    const double r = std::hypot(phi.values[i][0], phi.values[i][1]);
    if (r >= floor) {
      m.values[i] = {phi.values[i][0] / r, phi.values[i][1] / r};
      m.mask[i] = 1;
    } else {
      m.values[i] = {0.0, 0.0};
    }
  }
  return m;
}

namespace {

template <class Lat, class Val>
BoundaryCheck check_boundary_impl(const Lat& lat, const Val& ref, double tol) {
  const GridSpec& g = lat.grid;
  double worst = 0.0;
  auto visit = [&](int i, int j, int k) {
    const auto& v = lat.at(i, j, k);
    double d2 = 0.0;
    for (std::size_t m = 0; m < ref.size(); ++m) {
      const double d = v[m] - ref[m];
      d2 += d * d;
    }
    worst = std::max(worst, std::sqrt(d2));
  };
  for (int k = 0; k < g.nodes[2]; ++k)
    for (int j = 0; j < g.nodes[1]; ++j)
      for (int i = 0; i < g.nodes[0]; ++i)
        if (i == 0 || j == 0 || k == 0 || i == g.nodes[0] - 1 ||
            j == g.nodes[1] - 1 || k == g.nodes[2] - 1)
          visit(i, j, k);
  return {worst <= tol, worst};
}

}  // namespace

BoundaryCheck check_boundary(const UnitSphereLattice& lat, const Vec3& n0, double tol) {
  return check_boundary_impl(lat, n0, tol);
}

BoundaryCheck check_boundary(const VectorLattice& lat, const Vec2& phi0, double tol) {
  return check_boundary_impl(lat, phi0, tol);
}

}  // namespace hopflink
