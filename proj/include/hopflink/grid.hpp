#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hopflink/geometry.hpp"

namespace hopflink {

// Regular node-centered grid over a box in R^3.
struct GridSpec {
  Vec3 box_min{-8.0, -8.0, -8.0};
  Vec3 box_max{8.0, 8.0, 8.0};
  std::array<int, 3> nodes{64, 64, 64};

  void validate() const {
    for (int a = 0; a < 3; ++a) {
      if (!(box_max[a] > box_min[a]))
        throw std::invalid_argument("GridSpec: box_max must exceed box_min");
      if (nodes[a] < 8)
        throw std::invalid_argument("GridSpec: need at least 8 nodes per axis");
    }
  }

  double spacing(int axis) const {
    return (box_max[axis] - box_min[axis]) / (nodes[axis] - 1);
  }
  double max_spacing() const {
    double h = 0.0;
    for (int a = 0; a < 3; ++a) h = std::max(h, spacing(a));
    return h;
  }
  std::size_t node_count() const {
    return std::size_t(nodes[0]) * nodes[1] * nodes[2];
  }
  // Row-major: x fastest.
  std::size_t index(int i, int j, int k) const {
    return std::size_t(i) + nodes[0] * (std::size_t(j) + std::size_t(nodes[1]) * k);
  }
  Vec3 coord(int i, int j, int k) const {
    return {box_min[0] + i * spacing(0),
            box_min[1] + j * spacing(1),
            box_min[2] + k * spacing(2)};
  }
  bool contains(const Vec3& x) const {
    for (int a = 0; a < 3; ++a)
      if (x[a] < box_min[a] || x[a] > box_max[a]) return false;
    return true;
  }
  bool operator==(const GridSpec& o) const {
    return box_min == o.box_min && box_max == o.box_max && nodes == o.nodes;
  }
};

// NC real components per node, stored as structure-of-node-tuples.
template <int NC>
struct Lattice {
  GridSpec grid;
  std::vector<std::array<double, NC>> values;

  Lattice() = default;
  explicit Lattice(const GridSpec& g) : grid(g), values(g.node_count()) {
    grid.validate();
  }

  std::array<double, NC>& at(int i, int j, int k) { return values[grid.index(i, j, k)]; }
  const std::array<double, NC>& at(int i, int j, int k) const {
    return values[grid.index(i, j, k)];
  }

  // Trilinear interpolation; x must lie inside the box.
  std::array<double, NC> interpolate(const Vec3& x) const {
    std::array<double, NC> out{};
    double f[3];
    int c[3];
    for (int a = 0; a < 3; ++a) {
      double t = (x[a] - grid.box_min[a]) / grid.spacing(a);
      int i = int(std::floor(t));
      if (i < 0) i = 0;
      if (i > grid.nodes[a] - 2) i = grid.nodes[a] - 2;
      c[a] = i;
      f[a] = t - i;
    }
    for (int dz = 0; dz < 2; ++dz)
      for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx) {
          double w = (dx ? f[0] : 1 - f[0]) * (dy ? f[1] : 1 - f[1]) * (dz ? f[2] : 1 - f[2]);
          const auto& v = at(c[0] + dx, c[1] + dy, c[2] + dz);
          for (int m = 0; m < NC; ++m) out[m] += w * v[m];
        }
    return out;
  }
};

// Order-parameter field phi (n = 2 components) with its asserted boundary value.
struct VectorLattice : Lattice<2> {
  Vec2 boundary_value{0.0, 0.0};
  using Lattice<2>::Lattice;
};

// Unit (n+1)-vector field on the grid (n = 2, so 3 components).
struct UnitSphereLattice : Lattice<3> {
  Vec3 boundary_value{0.0, 0.0, 0.0};
  using Lattice<3>::Lattice;
};

// Unit direction field m = phi/|phi|; nodes where |phi| fell below the floor
// are masked invalid.
struct DirectionLattice : Lattice<2> {
  std::vector<std::uint8_t> mask;  // 1 = valid
  using Lattice<2>::Lattice;
};

// For n = 2 the rank-1 current j^mu and the 1-form omega_mu are both plain
// 3-component node fields; antisymmetry is trivial at rank 1.
struct CurrentLattice : Lattice<3> {
  using Lattice<3>::Lattice;
};
struct OmegaLattice : Lattice<3> {
  // Empty mask means every node is valid (smooth-route omega).
  std::vector<std::uint8_t> mask;
  using Lattice<3>::Lattice;
  bool valid(std::size_t idx) const { return mask.empty() || mask[idx]; }
};
struct JacobianLattice : Lattice<3> {
  using Lattice<3>::Lattice;
};
struct ScalarLattice : Lattice<1> {
  using Lattice<1>::Lattice;
};

}  // namespace hopflink
