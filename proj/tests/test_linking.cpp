#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hopflink/linking.hpp"

using namespace hopflink;

namespace {

std::array<AmbientVec, kMaxAmbient> rotation_xyz(double ax, double ay, double az) {
  // column-major 3x3 rotation embedded in the 7x7 identity
  std::array<AmbientVec, kMaxAmbient> r{};
  for (int i = 0; i < kMaxAmbient; ++i) r[i][i] = 1.0;
  const double cx = std::cos(ax), sx = std::sin(ax);
  const double cy = std::cos(ay), sy = std::sin(ay);
  const double cz = std::cos(az), sz = std::sin(az);
  const double m[3][3] = {
      {cy * cz, cz * sx * sy - cx * sz, cx * cz * sy + sx * sz},
      {cy * sz, cx * cz + sx * sy * sz, cx * sy * sz - cz * sx},
      {-sy, cy * sx, cx * cy}};
  for (int col = 0; col < 3; ++col)
    for (int row = 0; row < 3; ++row) r[col][row] = m[row][col];
  return r;
}

}  // namespace

TEST_CASE("all four backends agree on the standard circle pair") {
  SpherePair pair = sphere_pair_standard(2);
  const long long oracle = intersection_linking(pair.first, pair.second_disk);
  CHECK(std::abs(oracle) == 1);

  auto quad = gauss_linking_quadrature(pair.first, pair.second, 128);
  CHECK(quad.reliable);
  CHECK(quad.rounded == oracle);
  CHECK(std::abs(quad.value - double(oracle)) < 1e-6);

  const auto pv = sample_polyline(pair.first, 512);
  const auto qv = sample_polyline(pair.second, 512);
  CHECK(polyline_linking_exact(pv, qv) == oracle);

  auto mc = gauss_linking_montecarlo(pair.first, pair.second, 200000, 7);
  CHECK(mc.rounded == oracle);
  CHECK(std::abs(mc.value - double(oracle)) <= 3.0 * mc.error_estimate + 0.05);
}

TEST_CASE("torus curve pair links twice") {
  auto p = torus_curve_manifold(2.0, 0.5, 2, 0.0);
  auto q = torus_curve_manifold(2.0, 0.5, 2, M_PI);
  auto quad = gauss_linking_quadrature(p, q, 256);
  CHECK(std::abs(quad.rounded) == 2);
  CHECK(std::abs(quad.value - double(quad.rounded)) < 1e-4);
  const long long oracle =
      polyline_linking_exact(sample_polyline(p, 1024), sample_polyline(q, 1024));
  CHECK(oracle == quad.rounded);
}

TEST_CASE("linking is symmetric in its arguments") {
  SpherePair pair = sphere_pair_standard(2);
  auto ab = gauss_linking_quadrature(pair.first, pair.second, 96);
  auto ba = gauss_linking_quadrature(pair.second, pair.first, 96);
  CHECK(ab.value == doctest::Approx(ba.value).epsilon(1e-10));
}

TEST_CASE("rigid motions leave the linking number unchanged") {
  SpherePair pair = sphere_pair_standard(2);
  auto rot = rotation_xyz(0.4, -0.9, 1.3);
  AmbientVec shift{};
  shift[0] = 2.5;
  shift[1] = -1.0;
  shift[2] = 0.75;
  auto p2 = transform_manifold(pair.first, rot, shift);
  auto q2 = transform_manifold(pair.second, rot, shift);
  auto base = gauss_linking_quadrature(pair.first, pair.second, 128);
  auto moved = gauss_linking_quadrature(p2, q2, 128);
  CHECK(moved.value == doctest::Approx(base.value).epsilon(1e-9));
  CHECK(polyline_linking_exact(sample_polyline(p2, 512), sample_polyline(q2, 512)) ==
        base.rounded);
}

TEST_CASE("separated circles do not link") {
  auto a = circle_manifold({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 1.0);
  auto b = circle_manifold({10, 0, 0}, {1, 0, 0}, {0, 0, 1}, 1.0);
  auto quad = gauss_linking_quadrature(a, b, 192);
  CHECK(std::abs(quad.value) < 1e-8);
  CHECK(quad.rounded == 0);
}

TEST_CASE("intersecting inputs are rejected up front") {
  auto a = circle_manifold({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 1.0);
  auto b = circle_manifold({0, 0, 0}, {1, 0, 0}, {0, 0, 1}, 1.0);
  CHECK_THROWS_AS((void)check_disjoint(a, b), std::runtime_error);
  SpherePair pair = sphere_pair_standard(2);
  CHECK(check_disjoint(pair.first, pair.second) > 0.5);
}

TEST_CASE("monte carlo is deterministic per seed") {
  SpherePair pair = sphere_pair_standard(2);
  auto a = gauss_linking_montecarlo(pair.first, pair.second, 50000, 42);
  auto b = gauss_linking_montecarlo(pair.first, pair.second, 50000, 42);
  CHECK(a.value == b.value);
  CHECK(a.error_estimate == b.error_estimate);
  auto c = gauss_linking_montecarlo(pair.first, pair.second, 50000, 43);
  CHECK(c.value != a.value);
}

TEST_CASE("generalized pair of 3-spheres in R^7") {
  SpherePair pair = sphere_pair_standard(4);
  const long long oracle = intersection_linking(pair.first, pair.second_disk, 48);
  CHECK(std::abs(oracle) == 1);
  auto mc = gauss_linking_montecarlo(pair.first, pair.second, 400000, 11);
  CHECK(std::abs(mc.value - double(oracle)) < 0.3);
  CHECK(mc.rounded == oracle);

  AmbientVec shift{};
  shift[4] = 9.0;
  std::array<AmbientVec, kMaxAmbient> eye{};
  for (int i = 0; i < kMaxAmbient; ++i) eye[i][i] = 1.0;
  auto far = transform_manifold(pair.second, eye, shift);
  auto mc0 = gauss_linking_montecarlo(pair.first, far, 200000, 11);
  CHECK(std::abs(mc0.value) <= 3.0 * mc0.error_estimate + 0.02);
}

TEST_CASE("hand-built polyline links") {
  std::vector<Vec3> a, b, far;
  for (int i = 0; i < 64; ++i) {
    const double t = 2.0 * M_PI * i / 64;
    a.push_back({std::cos(t), std::sin(t), 0.0});
    b.push_back({1.0 + std::cos(t), 0.0, std::sin(t)});
    far.push_back({6.0 + std::cos(t), 0.0, std::sin(t)});
  }
  CHECK(std::abs(polyline_linking_exact(a, b)) == 1);
  CHECK(polyline_linking_exact(a, far) == 0);
  // reversing one orientation flips the sign
  std::vector<Vec3> br(b.rbegin(), b.rend());
  CHECK(polyline_linking_exact(a, br) == -polyline_linking_exact(a, b));
}

TEST_CASE("quadrature error estimate brackets the truth") {
  SpherePair pair = sphere_pair_standard(2);
  auto quad = gauss_linking_quadrature(pair.first, pair.second, 64);
  CHECK(std::abs(quad.value - double(quad.rounded)) <=
        std::max(quad.error_estimate * 4.0, 1e-9));
}
