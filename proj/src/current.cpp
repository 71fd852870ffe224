#include "hopflink/current.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "hopflink/geometry.hpp"

namespace hopflink {

namespace {

struct NodeRef {
  int idx[3];
  int step(int axis, int delta) const {
    int c[3] = {idx[0], idx[1], idx[2]};
    c[axis] += delta;
    return c[axis];
  }
};

// Second-order difference of a scalar accessor along one axis: central in the
// interior, one-sided at faces.
template <class Get>
double diff2(const GridSpec& g, const Get& get, int i, int j, int k, int axis) {
  const double h = g.spacing(axis);
  int c[3] = {i, j, k};
  auto at = [&](int delta) {
    int p[3] = {c[0], c[1], c[2]};
    p[axis] += delta;
    return get(p[0], p[1], p[2]);
  };
  const int n = g.nodes[axis];
  const int pos = c[axis];
  if (pos >= 1 && pos <= n - 2)
    return (at(1) - at(-1)) / (2.0 * h);
  if (pos == 0)
    return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
  return (3.0 * at(0) - 4.0 * at(-1) + at(-2)) / (2.0 * h);
}

// Mask-aware variant: returns nullopt if no admissible 2nd-order stencil.
template <class Get, class Valid>
std::optional<double> diff2_masked(const GridSpec& g, const Get& get,
                                   const Valid& valid, int i, int j, int k,
                                   int axis) {
  const double h = g.spacing(axis);
  int c[3] = {i, j, k};
  auto node = [&](int delta) {
    int p[3] = {c[0], c[1], c[2]};
    p[axis] += delta;
    return std::array<int, 3>{p[0], p[1], p[2]};
  };
  auto ok = [&](int delta) {
    auto p = node(delta);
    if (p[axis] < 0 || p[axis] >= g.nodes[axis]) return false;
    return valid(p[0], p[1], p[2]);
  };
  auto val = [&](int delta) {
    auto p = node(delta);
    return get(p[0], p[1], p[2]);
  };
  if (ok(1) && ok(-1)) return (val(1) - val(-1)) / (2.0 * h);
  if (ok(1) && ok(2)) return (-3.0 * val(0) + 4.0 * val(1) - val(2)) / (2.0 * h);
  if (ok(-1) && ok(-2)) return (3.0 * val(0) - 4.0 * val(-1) + val(-2)) / (2.0 * h);
  return std::nullopt;
}

}  // namespace

OmegaLattice omega_from_direction(const DirectionLattice& m) {
  const GridSpec& g = m.grid;
  bool any_valid = false;
  for (auto f : m.mask)
    if (f) { any_valid = true; break; }
  if (!any_valid)
    throw std::runtime_error("omega_from_direction: all nodes masked");

  OmegaLattice w(g);
  w.mask.assign(g.node_count(), 0);
  const double scale = 1.0 / sphere_area(1);
  auto valid = [&](int i, int j, int k) { return m.mask[g.index(i, j, k)] != 0; };
  for (int k = 0; k < g.nodes[2]; ++k)
    for (int j = 0; j < g.nodes[1]; ++j)
      for (int i = 0; i < g.nodes[0]; ++i) {
        const std::size_t idx = g.index(i, j, k);
        if (!m.mask[idx]) continue;
        const auto& mv = m.values[idx];
        bool all_ok = true;
        std::array<double, 3> comp{};
        for (int a = 0; a < 3 && all_ok; ++a) {
          auto d1 = diff2_masked(
              g, [&](int x, int y, int z) { return m.at(x, y, z)[0]; }, valid,
              i, j, k, a);
          auto d2 = diff2_masked(
              g, [&](int x, int y, int z) { return m.at(x, y, z)[1]; }, valid,
              i, j, k, a);
          if (!d1 || !d2) {
            all_ok = false;
            break;
          }
          comp[a] = scale * (mv[0] * (*d2) - mv[1] * (*d1));
        }
        if (all_ok) {
          w.values[idx] = comp;
          w.mask[idx] = 1;
        }
      }
  return w;
}

namespace {

template <class LatOut, class LatIn>
LatOut curl_of(const LatIn& v) {
  const GridSpec& g = v.grid;
  LatOut out(g);
  for (int k = 0; k < g.nodes[2]; ++k)
    for (int j = 0; j < g.nodes[1]; ++j)
      for (int i = 0; i < g.nodes[0]; ++i) {
        auto d = [&](int comp, int axis) {
          return diff2(
              g, [&](int x, int y, int z) { return v.at(x, y, z)[comp]; }, i, j,
              k, axis);
        };
        out.at(i, j, k) = {d(2, 1) - d(1, 2), d(0, 2) - d(2, 0),
                           d(1, 0) - d(0, 1)};
      }
  return out;
}

}  // namespace

CurrentLattice current_from_omega(const OmegaLattice& omega) {
  return curl_of<CurrentLattice>(omega);
}

CurrentLattice pullback_volume(const UnitSphereLattice& nf) {
  const GridSpec& g = nf.grid;
  CurrentLattice f(g);
  // 1/8pi, times the eps sum's factor 2; sign chosen so that for lifted
  // order-parameter fields F is parallel to grad phi1 x grad phi2 near zeros
  // (the lift chart itself is orientation-reversing on S^2).
  const double scale = -1.0 / (2.0 * sphere_area(2));
  for (int k = 0; k < g.nodes[2]; ++k)
    for (int j = 0; j < g.nodes[1]; ++j)
      for (int i = 0; i < g.nodes[0]; ++i) {
        Vec3 dn[3];
        for (int a = 0; a < 3; ++a)
          for (int c = 0; c < 3; ++c)
            dn[a][c] = diff2(
                g, [&](int x, int y, int z) { return nf.at(x, y, z)[c]; }, i, j,
                k, a);
        const Vec3& n = nf.at(i, j, k);
        // F^mu = (1/8pi) * 2 * n . (d_nu n x d_la n), (mu,nu,la) cyclic
        f.at(i, j, k) = {2.0 * scale * det3(n, dn[1], dn[2]),
                         2.0 * scale * det3(n, dn[2], dn[0]),
                         2.0 * scale * det3(n, dn[0], dn[1])};
      }
  return f;
}

JacobianLattice jacobian_tensor(const VectorLattice& phi) {
  const GridSpec& g = phi.grid;
  JacobianLattice d(g);
  for (int k = 0; k < g.nodes[2]; ++k)
    for (int j = 0; j < g.nodes[1]; ++j)
      for (int i = 0; i < g.nodes[0]; ++i) {
        Vec3 g1, g2;
        for (int a = 0; a < 3; ++a) {
          g1[a] = diff2(
              g, [&](int x, int y, int z) { return phi.at(x, y, z)[0]; }, i, j,
              k, a);
          g2[a] = diff2(
              g, [&](int x, int y, int z) { return phi.at(x, y, z)[1]; }, i, j,
              k, a);
        }
        d.at(i, j, k) = cross(g1, g2);
      }
  return d;
}

DivergenceReport divergence(const Lattice<3>& v) {
  const GridSpec& g = v.grid;
  DivergenceReport rep{ScalarLattice(g), 0.0};
  for (int k = 0; k < g.nodes[2]; ++k)
    for (int j = 0; j < g.nodes[1]; ++j)
      for (int i = 0; i < g.nodes[0]; ++i) {
        double div = 0.0;
        for (int a = 0; a < 3; ++a)
          div += diff2(
              g, [&](int x, int y, int z) { return v.at(x, y, z)[a]; }, i, j, k,
              a);
        rep.residual.at(i, j, k) = {div};
        const bool interior = i >= 2 && j >= 2 && k >= 2 &&
                              i < g.nodes[0] - 2 && j < g.nodes[1] - 2 &&
                              k < g.nodes[2] - 2;
        if (interior) rep.max_interior = std::max(rep.max_interior, std::abs(div));
      }
  return rep;
}

double boundary_mass_fraction(const Lattice<3>& v) {
  const GridSpec& g = v.grid;
  double total = 0.0, boundary = 0.0;
  for (int k = 0; k < g.nodes[2]; ++k)
    for (int j = 0; j < g.nodes[1]; ++j)
      for (int i = 0; i < g.nodes[0]; ++i) {
        const auto& val = v.at(i, j, k);
        const double m = std::abs(val[0]) + std::abs(val[1]) + std::abs(val[2]);
        total += m;
        const bool outer = i < 2 || j < 2 || k < 2 || i >= g.nodes[0] - 2 ||
                           j >= g.nodes[1] - 2 || k >= g.nodes[2] - 2;
        if (outer) boundary += m;
      }
  return total > 0.0 ? boundary / total : 0.0;
}

OmegaLattice solve_omega_coulomb(const CurrentLattice& j) {
  const double frac = boundary_mass_fraction(j);
  if (frac > 0.05)
    throw std::runtime_error(
        "solve_omega_coulomb: current has significant boundary support (" +
        std::to_string(frac * 100.0) + "% of L1 mass on outer layers)");
  // Vector potential with lap A = -j, then omega = curl A. The discrete curl
  // followed by the discrete central-difference divergence cancels exactly, so
  // the Coulomb condition holds to rounding in the interior.
  Lattice<3> a = free_space_poisson(j);
  return curl_of<OmegaLattice>(a);
}

double line_integral(const Lattice<3>& w, const std::vector<Vec3>& vertices,
                     bool closed) {
  if (vertices.size() < 2) return 0.0;
  double sum = 0.0;
  const std::size_t nseg = closed ? vertices.size() : vertices.size() - 1;
  for (std::size_t s = 0; s < nseg; ++s) {
    const Vec3& a = vertices[s];
    const Vec3& b = vertices[(s + 1) % vertices.size()];
    const Vec3 mid = 0.5 * (a + b);
    if (!w.grid.contains(mid))
      throw std::runtime_error("line_integral: polyline exits the lattice box");
    const auto val = w.interpolate(mid);
    const Vec3 dx = b - a;
    sum += val[0] * dx[0] + val[1] * dx[1] + val[2] * dx[2];
  }
  return sum;
}

}  // namespace hopflink
