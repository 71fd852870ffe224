#include "hopflink/linking.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "hopflink/fieldlab.hpp"

namespace hopflink {

AmbientVec gauss_map(const AmbientVec& x, const AmbientVec& y, int ambient) {
  AmbientVec e{};
  double r2 = 0.0;
  for (int i = 0; i < ambient; ++i) {
    e[i] = x[i] - y[i];
    r2 += e[i] * e[i];
  }
  if (r2 == 0.0)
    throw std::runtime_error("gauss_map: coincident points (manifolds must be disjoint)");
  const double inv = 1.0 / std::sqrt(r2);
  for (int i = 0; i < ambient; ++i) e[i] *= inv;
  return e;
}

namespace {

// --- epsilon-contraction table ---------------------------------------------
//
// One term per way of splitting the ambient indices into (P-block, kernel
// index, Q-block); the blocks enter through the d x d minors of the tangent
// matrices, so the d! permutations inside each block are already summed.

struct Term {
  int pc = 0;  // index into the sorted-combination list
  int g = 0;   // ambient index carried by the kernel gradient
  int qc = 0;
  double sign = 1.0;
};

struct Table {
  int n = 2, d = 1, ambient = 3;
  std::vector<std::array<int, 3>> combos;  // sorted d-subsets (unused slots = -1)
  std::vector<Term> terms;
  double norm = 1.0;  // 1 / ((2n-3) A(S^{2n-2}))
};

int perm_sign(const std::vector<int>& p) {
  int inv = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inv;
  return (inv % 2) ? -1 : 1;
}

Table build_table(int n) {
  Table t;
  t.n = n;
  t.d = n - 1;
  t.ambient = 2 * n - 1;
  const int D = t.ambient;

  // enumerate sorted d-subsets of {0..D-1}
  std::vector<int> idx(t.d);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == t.d) {
      std::array<int, 3> c{-1, -1, -1};
      for (int i = 0; i < t.d; ++i) c[i] = idx[i];
      t.combos.push_back(c);
      return;
    }
    for (int v = start; v < D; ++v) {
      idx[depth] = v;
      rec(v + 1, depth + 1);
    }
  };
  rec(0, 0);

  auto combo_pos = [&](const std::vector<int>& sorted) {
    for (std::size_t i = 0; i < t.combos.size(); ++i) {
      bool ok = true;
      for (int k = 0; k < t.d; ++k)
        if (t.combos[i][k] != sorted[k]) ok = false;
      if (ok) return int(i);
    }
    throw std::logic_error("combo_pos");
  };

  for (std::size_t pi = 0; pi < t.combos.size(); ++pi) {
    std::vector<int> rest;
    for (int v = 0; v < D; ++v) {
      bool in_p = false;
      for (int k = 0; k < t.d; ++k)
        if (t.combos[pi][k] == v) in_p = true;
      if (!in_p) rest.push_back(v);
    }
    for (std::size_t gi = 0; gi < rest.size(); ++gi) {
      std::vector<int> q;
      for (std::size_t r = 0; r < rest.size(); ++r)
        if (r != gi) q.push_back(rest[r]);
      std::vector<int> perm;
      for (int k = 0; k < t.d; ++k) perm.push_back(t.combos[pi][k]);
      perm.push_back(rest[gi]);
      for (int v : q) perm.push_back(v);
      Term term;
      term.pc = int(pi);
      term.g = rest[gi];
      term.qc = combo_pos(q);
      term.sign = perm_sign(perm);
      t.terms.push_back(term);
    }
  }
  t.norm = 1.0 / ((2.0 * n - 3.0) * sphere_area(2 * n - 2));
  return t;
}

const Table& table_for(int n) {
  static const Table t2 = build_table(2);
  static const Table t4 = build_table(4);
  if (n == 2) return t2;
  if (n == 4) return t4;
  throw std::invalid_argument("gauss_linking: only n in {2, 4} supported");
}

// d x d minors of the tangent matrix for every sorted index combination.
void minors(const Table& t, const std::array<AmbientVec, 3>& tang,
            std::vector<double>& out) {
  out.resize(t.combos.size());
  if (t.d == 1) {
    for (std::size_t c = 0; c < t.combos.size(); ++c)
      out[c] = tang[0][t.combos[c][0]];
    return;
  }
  // d == 3
  for (std::size_t c = 0; c < t.combos.size(); ++c) {
    const int i = t.combos[c][0], j = t.combos[c][1], k = t.combos[c][2];
    const double a0 = tang[0][i], a1 = tang[0][j], a2 = tang[0][k];
    const double b0 = tang[1][i], b1 = tang[1][j], b2 = tang[1][k];
    const double c0 = tang[2][i], c1 = tang[2][j], c2 = tang[2][k];
    out[c] = a0 * (b1 * c2 - b2 * c1) - a1 * (b0 * c2 - b2 * c0) +
             a2 * (b0 * c1 - b1 * c0);
  }
}

double contract(const Table& t, const std::vector<double>& pmin,
                const AmbientVec& x, const AmbientVec& y,
                const std::vector<double>& qmin) {
  AmbientVec diff{};
  double r2 = 0.0;
  for (int i = 0; i < t.ambient; ++i) {
    diff[i] = x[i] - y[i];
    r2 += diff[i] * diff[i];
  }
  const double r = std::sqrt(r2);
  // grad_x |x-y|^{-(2n-3)} = -(2n-3) (x-y) / r^{2n-1}
  const double gscale = -(2.0 * t.n - 3.0) / std::pow(r, 2.0 * t.n - 1.0);
  double sum = 0.0;
  for (const Term& term : t.terms)
    sum += term.sign * pmin[term.pc] * (gscale * diff[term.g]) * qmin[term.qc];
  return sum * t.norm;
}

}  // namespace

// --- manifold constructors --------------------------------------------------

ParametricManifold circle_manifold(const Vec3& center, const Vec3& f1,
                                   const Vec3& f2, double radius) {
  ParametricManifold m;
  m.dim = 1;
  m.ambient = 3;
  m.dom_min = {0, 0, 0};
  m.dom_max = {2.0 * M_PI, 0, 0};
  m.eval = [=](const Param& u, AmbientVec& x, std::array<AmbientVec, 3>& tang) {
    const double c = std::cos(u[0]), s = std::sin(u[0]);
    for (int i = 0; i < 3; ++i) {
      x[i] = center[i] + radius * (c * f1[i] + s * f2[i]);
      tang[0][i] = radius * (-s * f1[i] + c * f2[i]);
    }
  };
  return m;
}

ParametricManifold torus_curve_manifold(double R, double r, int q, double phase) {
  ParametricManifold m;
  m.dim = 1;
  m.ambient = 3;
  m.dom_min = {0, 0, 0};
  m.dom_max = {2.0 * M_PI, 0, 0};
  m.eval = [=](const Param& u, AmbientVec& x, std::array<AmbientVec, 3>& tang) {
    const double t = u[0];
    const double w = q * t + phase;
    const double rad = R + r * std::cos(w);
    x[0] = rad * std::cos(t);
    x[1] = rad * std::sin(t);
    x[2] = r * std::sin(w);
    const double drad = -r * q * std::sin(w);
    tang[0][0] = drad * std::cos(t) - rad * std::sin(t);
    tang[0][1] = drad * std::sin(t) + rad * std::cos(t);
    tang[0][2] = r * q * std::cos(w);
  };
  return m;
}

ParametricManifold polyline_manifold(const std::vector<Vec3>& vertices) {
  if (vertices.size() < 3)
    throw std::invalid_argument("polyline_manifold: need at least 3 vertices");
  // arc-length parametrization of the closed polyline
  auto verts = std::make_shared<std::vector<Vec3>>(vertices);
  auto cum = std::make_shared<std::vector<double>>();
  cum->push_back(0.0);
  for (std::size_t i = 0; i < verts->size(); ++i) {
    const Vec3 d = (*verts)[(i + 1) % verts->size()] - (*verts)[i];
    cum->push_back(cum->back() + norm(d));
  }
  const double total = cum->back();
  ParametricManifold m;
  m.dim = 1;
  m.ambient = 3;
  m.dom_min = {0, 0, 0};
  m.dom_max = {total, 0, 0};
  m.eval = [verts, cum, total](const Param& u, AmbientVec& x,
                               std::array<AmbientVec, 3>& tang) {
    double s = std::fmod(u[0], total);
    if (s < 0) s += total;
    const auto it = std::upper_bound(cum->begin(), cum->end(), s);
    std::size_t seg = std::min(verts->size() - 1,
                               std::size_t(std::distance(cum->begin(), it)) - 1);
    const Vec3& a = (*verts)[seg];
    const Vec3& b = (*verts)[(seg + 1) % verts->size()];
    const double len = (*cum)[seg + 1] - (*cum)[seg];
    const double f = len > 0 ? (s - (*cum)[seg]) / len : 0.0;
    for (int i = 0; i < 3; ++i) {
      x[i] = a[i] + f * (b[i] - a[i]);
      tang[0][i] = len > 0 ? (b[i] - a[i]) / len : 0.0;
    }
  };
  return m;
}

ParametricManifold sphere_manifold(const AmbientVec& center,
                                   const std::vector<AmbientVec>& frame,
                                   double radius, int ambient) {
  if (frame.size() != 4)
    throw std::invalid_argument("sphere_manifold: need a 4-vector frame (3-sphere)");
  ParametricManifold m;
  m.dim = 3;
  m.ambient = ambient;
  m.dom_min = {0, 0, 0};
  m.dom_max = {M_PI, M_PI, 2.0 * M_PI};
  m.eval = [=](const Param& u, AmbientVec& x, std::array<AmbientVec, 3>& tang) {
    const double cp = std::cos(u[0]), sp = std::sin(u[0]);
    const double ct = std::cos(u[1]), st = std::sin(u[1]);
    const double cf = std::cos(u[2]), sf = std::sin(u[2]);
    const double w[4] = {cp, sp * ct, sp * st * cf, sp * st * sf};
    const double dpsi[4] = {-sp, cp * ct, cp * st * cf, cp * st * sf};
    const double dth[4] = {0.0, -sp * st, sp * ct * cf, sp * ct * sf};
    const double dph[4] = {0.0, 0.0, -sp * st * sf, sp * st * cf};
    for (int i = 0; i < ambient; ++i) {
      double xx = center[i], t0 = 0, t1 = 0, t2 = 0;
      for (int a = 0; a < 4; ++a) {
        xx += radius * w[a] * frame[a][i];
        t0 += radius * dpsi[a] * frame[a][i];
        t1 += radius * dth[a] * frame[a][i];
        t2 += radius * dph[a] * frame[a][i];
      }
      x[i] = xx;
      tang[0][i] = t0;
      tang[1][i] = t1;
      tang[2][i] = t2;
    }
  };
  return m;
}

SpherePair sphere_pair_standard(int n) {
  auto axis = [](int i) {
    AmbientVec v{};
    v[i] = 1.0;
    return v;
  };
  if (n == 2) {
    SpherePair pair;
    pair.first = circle_manifold({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, 1.0);
    pair.second = circle_manifold({1, 0, 0}, {1, 0, 0}, {0, 0, 1}, 1.0);
    pair.second_disk = FlatDisk{axis(0), {axis(0), axis(2)}, 1.0, 3};
    return pair;
  }
  if (n == 4) {
    SpherePair pair;
    // frame ordered so the crossing with the partner disk (at +e1) sits away
    // from the chart poles of the hyperspherical parametrization
    pair.first = sphere_manifold(AmbientVec{}, {axis(1), axis(2), axis(3), axis(0)},
                                 1.0, 7);
    pair.second = sphere_manifold(axis(0), {axis(4), axis(5), axis(6), axis(0)},
                                  1.0, 7);
    pair.second_disk = FlatDisk{axis(0), {axis(4), axis(5), axis(6), axis(0)}, 1.0, 7};
    return pair;
  }
  throw std::invalid_argument("sphere_pair_standard: n must be 2 or 4");
}

ParametricManifold transform_manifold(const ParametricManifold& m,
                                      const std::array<AmbientVec, kMaxAmbient>& rot,
                                      const AmbientVec& shift) {
  ParametricManifold out = m;
  const int D = m.ambient;
  auto inner = m.eval;
  out.eval = [inner, rot, shift, D](const Param& u, AmbientVec& x,
                                    std::array<AmbientVec, 3>& tang) {
    AmbientVec x0;
    std::array<AmbientVec, 3> t0;
    inner(u, x0, t0);
    for (int i = 0; i < D; ++i) {
      double xi = shift[i];
      for (int j = 0; j < D; ++j) xi += rot[j][i] * x0[j];
      x[i] = xi;
      for (int a = 0; a < 3; ++a) {
        double ti = 0.0;
        for (int j = 0; j < D; ++j) ti += rot[j][i] * t0[a][j];
        tang[a][i] = ti;
      }
    }
  };
  return out;
}

// --- quadrature -------------------------------------------------------------

namespace {

double quadrature_value(const ParametricManifold& P, const ParametricManifold& Q,
                        int res) {
  const Table& t = table_for(2);
  const double du = (P.dom_max[0] - P.dom_min[0]) / res;
  const double dv = (Q.dom_max[0] - Q.dom_min[0]) / res;

  std::vector<AmbientVec> ys(res);
  std::vector<std::vector<double>> qmins(res);
  {
    AmbientVec y;
    std::array<AmbientVec, 3> tang;
    for (int j = 0; j < res; ++j) {
      Q.eval({Q.dom_min[0] + j * dv, 0, 0}, y, tang);
      ys[j] = y;
      minors(t, tang, qmins[j]);
    }
  }
  double sum = 0.0;
  AmbientVec x;
  std::array<AmbientVec, 3> tang;
  std::vector<double> pmin;
  for (int i = 0; i < res; ++i) {
    P.eval({P.dom_min[0] + i * du, 0, 0}, x, tang);
    minors(t, tang, pmin);
    for (int j = 0; j < res; ++j)
      sum += contract(t, pmin, x, ys[j], qmins[j]);
  }
  return sum * du * dv;
}

}  // namespace

LinkingResult gauss_linking_quadrature(const ParametricManifold& P,
                                       const ParametricManifold& Q,
                                       int resolution) {
  if (P.dim != 1 || Q.dim != 1)
    throw std::invalid_argument("quadrature backend supports curves (n = 2) only");
  check_disjoint(P, Q);
  LinkingResult res;
  res.method = "quadrature";
  res.samples = resolution;
  res.value = quadrature_value(P, Q, resolution);
  const double coarse = quadrature_value(P, Q, std::max(8, resolution / 2));
  res.error_estimate = std::abs(res.value - coarse);
  res.rounded = std::llround(res.value);
  res.reliable = std::abs(res.value - double(res.rounded)) <= 0.5;
  return res;
}

// --- Monte Carlo ------------------------------------------------------------

namespace {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline double uniform01(std::uint64_t& state) {
  return (splitmix64(state) >> 11) * 0x1.0p-53;
}

}  // namespace

LinkingResult gauss_linking_montecarlo(const ParametricManifold& P,
                                       const ParametricManifold& Q,
                                       long long samples, std::uint64_t seed) {
  const int n = (P.ambient + 1) / 2;
  const Table& t = table_for(n);
  if (P.ambient != Q.ambient || P.dim != n - 1 || Q.dim != n - 1)
    throw std::invalid_argument("gauss_linking: dimension mismatch");
  check_disjoint(P, Q, P.dim == 1 ? 256 : 24);

  const int axes = P.dim + Q.dim;
  // coarse stratification grid over the product parameter domain
  int strata = 1;
  while (std::pow(strata + 1, axes) <= std::min<double>(4096.0, double(samples)))
    ++strata;
  long long cells = 1;
  for (int a = 0; a < axes; ++a) cells *= strata;

  const double volume = P.domain_volume() * Q.domain_volume();
  double sum = 0.0, sumsq = 0.0;
  AmbientVec x, y;
  std::array<AmbientVec, 3> tp, tq;
  std::vector<double> pmin, qmin;

  for (long long s = 0; s < samples; ++s) {
    std::uint64_t state = seed ^ (0x2545F4914F6CDD1Dull * std::uint64_t(s + 1));
    const long long cell = s % cells;
    long long c = cell;
    Param up{}, vq{};
    for (int a = 0; a < axes; ++a) {
      const int stratum = int(c % strata);
      c /= strata;
      const double frac = (stratum + uniform01(state)) / strata;
      if (a < P.dim)
        up[a] = P.dom_min[a] + frac * (P.dom_max[a] - P.dom_min[a]);
      else
        vq[a - P.dim] = Q.dom_min[a - P.dim] +
                        frac * (Q.dom_max[a - P.dim] - Q.dom_min[a - P.dim]);
    }
    P.eval(up, x, tp);
    Q.eval(vq, y, tq);
    minors(t, tp, pmin);
    minors(t, tq, qmin);
    const double f = contract(t, pmin, x, y, qmin);
    sum += f;
    sumsq += f * f;
  }
  const double mean = sum / double(samples);
  const double var = std::max(0.0, sumsq / double(samples) - mean * mean);

  LinkingResult res;
  res.method = "montecarlo";
  res.samples = samples;
  res.seed = seed;
  res.value = mean * volume;
  res.error_estimate = volume * std::sqrt(var / double(samples));
  res.rounded = std::llround(res.value);
  res.reliable = std::abs(res.value - double(res.rounded)) <= 0.5;
  return res;
}

// --- polyline crossing oracle ----------------------------------------------

long long polyline_linking_exact(const std::vector<Vec3>& P,
                                 const std::vector<Vec3>& Q) {
  if (P.size() < 3 || Q.size() < 3)
    throw std::invalid_argument("polyline_linking_exact: need closed polylines");
  for (int attempt = 0; attempt < 8; ++attempt) {
    // deterministic pseudo-random projection direction
    std::uint64_t state = 0xC0FFEE123456789Aull + 7919ull * attempt;
    Vec3 w{2.0 * uniform01(state) - 1.0, 2.0 * uniform01(state) - 1.0,
           2.0 * uniform01(state) - 1.0};
    if (norm(w) < 1e-3) continue;
    w = normalized(w);
    const auto basis = tangent_basis(w);  // (a, b, w) right-handed
    const Vec3 &a = basis[0], &b = basis[1];

    auto project = [&](const std::vector<Vec3>& curve) {
      std::vector<Vec3> out(curve.size());  // (pa, pb, depth)
      for (std::size_t i = 0; i < curve.size(); ++i)
        out[i] = {dot(curve[i], a), dot(curve[i], b), dot(curve[i], w)};
      return out;
    };
    const auto p2 = project(P);
    const auto q2 = project(Q);

    long long signed_sum = 0;
    bool degenerate = false;
    for (std::size_t i = 0; i < p2.size() && !degenerate; ++i) {
      const Vec3& s0 = p2[i];
      const Vec3& s1 = p2[(i + 1) % p2.size()];
      for (std::size_t j = 0; j < q2.size(); ++j) {
        const Vec3& r0 = q2[j];
        const Vec3& r1 = q2[(j + 1) % q2.size()];
        const double dpx = s1[0] - s0[0], dpy = s1[1] - s0[1];
        const double dqx = r1[0] - r0[0], dqy = r1[1] - r0[1];
        const double denom = dpx * dqy - dpy * dqx;
        const double scale = (std::abs(dpx) + std::abs(dpy)) *
                             (std::abs(dqx) + std::abs(dqy));
        if (std::abs(denom) <= 1e-12 * std::max(scale, 1e-30)) continue;
        const double rx = r0[0] - s0[0], ry = r0[1] - s0[1];
        const double tp = (rx * dqy - ry * dqx) / denom;
        const double tq = (rx * dpy - ry * dpx) / denom;
        if (tp <= 0.0 || tp >= 1.0 || tq <= 0.0 || tq >= 1.0) {
          if ((tp > -1e-10 && tp < 1e-10) || (tp > 1 - 1e-10 && tp < 1 + 1e-10) ||
              (tq > -1e-10 && tq < 1e-10) || (tq > 1 - 1e-10 && tq < 1 + 1e-10))
            degenerate = true;
          continue;
        }
        const double depth_p = s0[2] + tp * (s1[2] - s0[2]);
        const double depth_q = r0[2] + tq * (r1[2] - r0[2]);
        if (std::abs(depth_p - depth_q) < 1e-12) {
          degenerate = true;
          break;
        }
        const int orient = denom > 0 ? 1 : -1;
        // crossing sign is the orientation of (over-strand, under-strand)
        signed_sum += (depth_p > depth_q) ? orient : -orient;
      }
    }
    if (degenerate) continue;
    if (signed_sum % 2 != 0) continue;  // inconsistent projection, retry
    return signed_sum / 2;
  }
  throw std::runtime_error("polyline_linking_exact: degenerate projection after 8 retries");
}

// --- intersection oracle ----------------------------------------------------

namespace {

// Solve a dense k x k system in place; returns false if singular.
bool solve_dense(std::vector<double>& a, std::vector<double>& b, int k) {
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int r = col + 1; r < k; ++r)
      if (std::abs(a[r * k + col]) > std::abs(a[piv * k + col])) piv = r;
    if (std::abs(a[piv * k + col]) < 1e-300) return false;
    if (piv != col) {
      for (int c = 0; c < k; ++c) std::swap(a[col * k + c], a[piv * k + c]);
      std::swap(b[col], b[piv]);
    }
    const double inv = 1.0 / a[col * k + col];
    for (int r = 0; r < k; ++r) {
      if (r == col) continue;
      const double f = a[r * k + col] * inv;
      if (f == 0.0) continue;
      for (int c = col; c < k; ++c) a[r * k + c] -= f * a[col * k + c];
      b[r] -= f * b[col];
    }
  }
  for (int r = 0; r < k; ++r) b[r] /= a[r * k + r];
  return true;
}

double dense_det(std::vector<double>& a, int k) {
  double det = 1.0;
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int r = col + 1; r < k; ++r)
      if (std::abs(a[r * k + col]) > std::abs(a[piv * k + col])) piv = r;
    if (std::abs(a[piv * k + col]) < 1e-300) return 0.0;
    if (piv != col) {
      for (int c = 0; c < k; ++c) std::swap(a[col * k + c], a[piv * k + c]);
      det = -det;
    }
    det *= a[col * k + col];
    const double inv = 1.0 / a[col * k + col];
    for (int r = col + 1; r < k; ++r) {
      const double f = a[r * k + col] * inv;
      for (int c = col; c < k; ++c) a[r * k + c] -= f * a[col * k + c];
    }
  }
  return det;
}

// Orthonormal basis of the orthogonal complement of the disk flat.
std::vector<AmbientVec> complement_basis(const FlatDisk& disk) {
  std::vector<AmbientVec> basis = disk.frame;
  std::vector<AmbientVec> out;
  for (int i = 0; i < disk.ambient && int(basis.size()) < disk.ambient; ++i) {
    AmbientVec v{};
    v[i] = 1.0;
    for (const auto& b : basis) {
      double d = 0.0;
      for (int c = 0; c < disk.ambient; ++c) d += v[c] * b[c];
      for (int c = 0; c < disk.ambient; ++c) v[c] -= d * b[c];
    }
    double nn = 0.0;
    for (int c = 0; c < disk.ambient; ++c) nn += v[c] * v[c];
    if (nn < 1e-12) continue;
    const double inv = 1.0 / std::sqrt(nn);
    for (int c = 0; c < disk.ambient; ++c) v[c] *= inv;
    basis.push_back(v);
    out.push_back(v);
  }
  return out;
}

struct Simplex {
  std::vector<AmbientVec> verts;  // dim+1 vertices
  double orient = 1.0;            // parametric orientation factor
};

// Deterministic per-position jitter breaking exact vertex/flat coincidences.
// Keyed on quantized coordinates so coincident chart points (poles, seams)
// move together and the simplicial surface stays watertight.
void jitter_points(std::vector<AmbientVec>& pts, int ambient) {
  double scale = 1.0;
  for (const auto& p : pts)
    for (int c = 0; c < ambient; ++c) scale = std::max(scale, std::abs(p[c]));
  const double eps = 1e-7 * scale;
  for (auto& p : pts) {
    std::uint64_t h = 0x6A09E667F3BCC909ull;
    for (int c = 0; c < ambient; ++c) {
      const long long q = llround(p[c] / (1e-9 * scale));
      h ^= std::uint64_t(q) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    }
    for (int c = 0; c < ambient; ++c)
      p[c] += eps * (2.0 * uniform01(h) - 1.0);
  }
}

std::vector<Simplex> triangulate(const ParametricManifold& P, int res) {
  std::vector<Simplex> out;
  AmbientVec x;
  std::array<AmbientVec, 3> tang;
  if (P.dim == 1) {
    std::vector<AmbientVec> pts(res);
    for (int i = 0; i < res; ++i) {
      const double u =
          P.dom_min[0] + (P.dom_max[0] - P.dom_min[0]) * double(i) / res;
      P.eval({u, 0, 0}, x, tang);
      pts[i] = x;
    }
    jitter_points(pts, P.ambient);
    for (int i = 0; i < res; ++i)
      out.push_back({{pts[i], pts[(i + 1) % res]}, 1.0});
    return out;
  }
  // dim == 3: vertex grid, last axis periodic (hyperspherical phi)
  const int n0 = res + 1, n1 = res + 1, n2 = res;
  std::vector<AmbientVec> pts(std::size_t(n0) * n1 * n2);
  auto vid = [&](int i, int j, int k) {
    return std::size_t(i) + std::size_t(n0) * (std::size_t(j) + std::size_t(n1) * (k % n2));
  };
  for (int k = 0; k < n2; ++k)
    for (int j = 0; j < n1; ++j)
      for (int i = 0; i < n0; ++i) {
        const Param u{
            P.dom_min[0] + (P.dom_max[0] - P.dom_min[0]) * double(i) / res,
            P.dom_min[1] + (P.dom_max[1] - P.dom_min[1]) * double(j) / res,
            P.dom_min[2] + (P.dom_max[2] - P.dom_min[2]) * double(k) / res};
        P.eval(u, x, tang);
        pts[vid(i, j, k)] = x;
      }
  jitter_points(pts, P.ambient);
  static const int kTets[6][4] = {{0, 1, 5, 7}, {0, 5, 4, 7}, {0, 4, 6, 7},
                                  {0, 6, 2, 7}, {0, 2, 3, 7}, {0, 3, 1, 7}};
  for (int k = 0; k < res; ++k)
    for (int j = 0; j < res; ++j)
      for (int i = 0; i < res; ++i) {
        std::size_t corner[8];
        double pu[8][3];
        for (int b = 0; b < 8; ++b) {
          const int bx = b & 1, by = (b >> 1) & 1, bz = (b >> 2) & 1;
          corner[b] = vid(i + bx, j + by, k + bz);
          pu[b][0] = i + bx;
          pu[b][1] = j + by;
          pu[b][2] = k + bz;
        }
        for (const auto& tet : kTets) {
          Simplex s;
          for (int v = 0; v < 4; ++v) s.verts.push_back(pts[corner[tet[v]]]);
          // orientation of the tet in parameter space
          Vec3 e[3];
          for (int e_i = 0; e_i < 3; ++e_i)
            for (int c = 0; c < 3; ++c)
              e[e_i][c] = pu[tet[e_i + 1]][c] - pu[tet[0]][c];
          s.orient = det3(e[0], e[1], e[2]) > 0 ? 1.0 : -1.0;
          out.push_back(std::move(s));
        }
      }
  return out;
}

}  // namespace

long long intersection_linking(const ParametricManifold& P, const FlatDisk& disk,
                               int resolution) {
  const int D = disk.ambient;
  const int flat_dim = int(disk.frame.size());
  const auto normals = complement_basis(disk);
  if (int(normals.size()) != D - flat_dim)
    throw std::runtime_error("intersection_linking: bad disk frame");
  const int k = P.dim + 1;  // unknowns per simplex
  if (int(normals.size()) + 1 != k)
    throw std::invalid_argument("intersection_linking: dimension mismatch");

  for (int refine = 0; refine < 3; ++refine) {
    const int res = resolution << refine;
    bool marginal = false;
    long long total = 0;
    for (const Simplex& s : triangulate(P, res)) {
      // constraints: normals . (sum l_i v_i - c) = 0, sum l_i = 1
      std::vector<double> A(k * k), b(k, 0.0);
      for (std::size_t r = 0; r + 1 < std::size_t(k); ++r) {
        double rhs = 0.0;
        for (int c = 0; c < D; ++c) rhs += normals[r][c] * disk.center[c];
        b[r] = rhs;
        for (int col = 0; col < k; ++col) {
          double e = 0.0;
          for (int c = 0; c < D; ++c) e += normals[r][c] * s.verts[col][c];
          A[r * k + col] = e;
        }
      }
      for (int col = 0; col < k; ++col) A[(k - 1) * k + col] = 1.0;
      b[k - 1] = 1.0;
      std::vector<double> Asolve = A, lambda = b;
      if (!solve_dense(Asolve, lambda, k)) continue;
      double lmin = 1e300;
      for (double l : lambda) lmin = std::min(lmin, l);
      if (lmin < -1e-9) continue;
      if (lmin < 1e-9) {
        marginal = true;
        break;
      }
      // crossing point and in-disk test
      AmbientVec pt{};
      for (int col = 0; col < k; ++col)
        for (int c = 0; c < D; ++c) pt[c] += lambda[col] * s.verts[col][c];
      double rad2 = 0.0;
      for (const auto& f : disk.frame) {
        double d = 0.0;
        for (int c = 0; c < D; ++c) d += f[c] * (pt[c] - disk.center[c]);
        rad2 += d * d;
      }
      const double rad = std::sqrt(rad2);
      if (std::abs(rad - disk.radius) < 1e-9) {
        marginal = true;
        break;
      }
      if (rad > disk.radius) continue;
      // sign: orientation of (simplex edges, disk frame) in R^D
      std::vector<double> M(D * D);
      for (int e = 0; e < k - 1; ++e)
        for (int c = 0; c < D; ++c)
          M[c * D + e] = s.verts[e + 1][c] - s.verts[0][c];
      for (int f = 0; f < flat_dim; ++f)
        for (int c = 0; c < D; ++c)
          M[c * D + (k - 1 + f)] = disk.frame[f][c];
      const double det = dense_det(M, D);
      if (det == 0.0) {
        marginal = true;
        break;
      }
      total += (det > 0 ? 1 : -1) * (s.orient > 0 ? 1 : -1);
    }
    if (!marginal) return total;
  }
  throw std::runtime_error(
      "intersection_linking: non-transversal crossing persisted through refinement");
}

// --- utilities --------------------------------------------------------------

double check_disjoint(const ParametricManifold& P, const ParametricManifold& Q,
                      int resolution) {
  auto samples = [&](const ParametricManifold& m, double& max_spacing) {
    std::vector<AmbientVec> pts;
    AmbientVec x;
    std::array<AmbientVec, 3> tang;
    const int res = m.dim == 1 ? std::max(resolution, 64) : resolution;
    max_spacing = 0.0;
    if (m.dim == 1) {
      pts.resize(res);
      for (int i = 0; i < res; ++i) {
        const double u =
            m.dom_min[0] + (m.dom_max[0] - m.dom_min[0]) * double(i) / res;
        m.eval({u, 0, 0}, x, tang);
        pts[i] = x;
      }
      for (int i = 0; i < res; ++i) {
        double d2 = 0.0;
        for (int c = 0; c < m.ambient; ++c) {
          const double d = pts[(i + 1) % res][c] - pts[i][c];
          d2 += d * d;
        }
        max_spacing = std::max(max_spacing, std::sqrt(d2));
      }
    } else {
      for (int k = 0; k <= res; ++k)
        for (int j = 0; j <= res; ++j)
          for (int i = 0; i <= res; ++i) {
            const Param u{
                m.dom_min[0] + (m.dom_max[0] - m.dom_min[0]) * double(i) / res,
                m.dom_min[1] + (m.dom_max[1] - m.dom_min[1]) * double(j) / res,
                m.dom_min[2] + (m.dom_max[2] - m.dom_min[2]) * double(k) / res};
            m.eval(u, x, tang);
            pts.push_back(x);
          }
      // crude spacing bound from tangent magnitudes at a midpoint sample
      const Param mid{0.5 * (m.dom_min[0] + m.dom_max[0]),
                      0.5 * (m.dom_min[1] + m.dom_max[1]),
                      0.5 * (m.dom_min[2] + m.dom_max[2])};
      m.eval(mid, x, tang);
      for (int a = 0; a < m.dim; ++a) {
        double tn = 0.0;
        for (int c = 0; c < m.ambient; ++c) tn += tang[a][c] * tang[a][c];
        max_spacing = std::max(
            max_spacing,
            std::sqrt(tn) * (m.dom_max[a] - m.dom_min[a]) / res);
      }
    }
    return pts;
  };

  double sp_p = 0.0, sp_q = 0.0;
  const auto pp = samples(P, sp_p);
  const auto qq = samples(Q, sp_q);
  double min_d2 = 1e300;
  for (const auto& a : pp)
    for (const auto& b : qq) {
      double d2 = 0.0;
      for (int c = 0; c < P.ambient; ++c) {
        const double d = a[c] - b[c];
        d2 += d * d;
      }
      min_d2 = std::min(min_d2, d2);
    }
  const double min_d = std::sqrt(min_d2);
  if (min_d < 3.0 * std::max(sp_p, sp_q))
    throw std::runtime_error(
        "gauss_linking: manifolds too close to resolve (disjointness check)");
  return min_d;
}

std::vector<Vec3> sample_polyline(const ParametricManifold& curve, int segments) {
  if (curve.dim != 1 || curve.ambient != 3)
    throw std::invalid_argument("sample_polyline: expects a curve in R^3");
  std::vector<Vec3> out(segments);
  AmbientVec x;
  std::array<AmbientVec, 3> tang;
  for (int i = 0; i < segments; ++i) {
    const double u = curve.dom_min[0] +
                     (curve.dom_max[0] - curve.dom_min[0]) * double(i) / segments;
    curve.eval({u, 0, 0}, x, tang);
    out[i] = {x[0], x[1], x[2]};
  }
  return out;
}

}  // namespace hopflink
