#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace hopflink {

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;

template <std::size_t N>
using VecN = std::array<double, N>;

template <std::size_t N>
inline double dot(const VecN<N>& a, const VecN<N>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += a[i] * b[i];
  return s;
}

template <std::size_t N>
inline double norm(const VecN<N>& a) {
  return std::sqrt(dot(a, a));
}

template <std::size_t N>
inline VecN<N> operator+(const VecN<N>& a, const VecN<N>& b) {
  VecN<N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + b[i];
  return r;
}

template <std::size_t N>
inline VecN<N> operator-(const VecN<N>& a, const VecN<N>& b) {
  VecN<N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = a[i] - b[i];
  return r;
}

template <std::size_t N>
inline VecN<N> operator*(double s, const VecN<N>& a) {
  VecN<N> r;
  for (std::size_t i = 0; i < N; ++i) r[i] = s * a[i];
  return r;
}

template <std::size_t N>
inline VecN<N> normalized(const VecN<N>& a) {
  return (1.0 / norm(a)) * a;
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1],
          a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

inline double det3(const Vec3& a, const Vec3& b, const Vec3& c) {
  return dot(a, cross(b, c));
}

// Surface area of the unit k-sphere S^k embedded in R^{k+1}.
// A(S^1) = 2*pi, A(S^2) = 4*pi, A(S^3) = 2*pi^2, ...
inline double sphere_area(int k) {
  const double p = 0.5 * (k + 1);
  return 2.0 * std::pow(M_PI, p) / std::tgamma(p);
}

}  // namespace hopflink
