#include "hopflink/defects.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>

#include "hopflink/current.hpp"
#include "hopflink/fieldlab.hpp"

namespace hopflink {

double DefectCurve::length() const {
  double l = 0.0;
  const std::size_t nseg = closed ? vertices.size() : vertices.size() - 1;
  for (std::size_t s = 0; s + 1 <= nseg; ++s)
    l += norm(vertices[(s + 1) % vertices.size()] - vertices[s]);
  return l;
}

Vec3 DefectCurve::centroid() const {
  Vec3 c{0, 0, 0};
  for (const auto& v : vertices) c = c + v;
  return (1.0 / double(vertices.size())) * c;
}

namespace {

// Triangle face identified by its three (sorted) global node ids.
struct FaceKey {
  std::array<std::size_t, 3> n;
  bool operator==(const FaceKey& o) const { return n == o.n; }
};

struct FaceKeyHash {
  std::size_t operator()(const FaceKey& f) const {
    std::size_t h = 1469598103934665603ull;
    for (auto v : f.n) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return h;
  }
};

FaceKey make_face(std::size_t a, std::size_t b, std::size_t c) {
  std::array<std::size_t, 3> n{a, b, c};
  std::sort(n.begin(), n.end());
  return {n};
}

// Zero crossing of the linearly interpolated 2-component field on a triangle.
std::optional<Vec3> face_crossing(const Vec3& p0, const Vec3& p1, const Vec3& p2,
                                  const Vec2& v0, const Vec2& v1, const Vec2& v2,
                                  bool* degenerate) {
  const double a00 = v0[0] - v2[0], a01 = v1[0] - v2[0];
  const double a10 = v0[1] - v2[1], a11 = v1[1] - v2[1];
  const double det = a00 * a11 - a01 * a10;
  double scale = std::abs(a00) + std::abs(a01) + std::abs(a10) + std::abs(a11);
  if (std::abs(det) <= 1e-14 * scale * scale) {
    if (degenerate) *degenerate = true;
    return std::nullopt;
  }
  const double b0 = -v2[0], b1 = -v2[1];
  const double a = (b0 * a11 - b1 * a01) / det;
  const double b = (a00 * b1 - a10 * b0) / det;
  const double c = 1.0 - a - b;
  const double eps = 1e-9;
  if (a < -eps || b < -eps || c < -eps) return std::nullopt;
  return Vec3{a * p0[0] + b * p1[0] + c * p2[0],
              a * p0[1] + b * p1[1] + c * p2[1],
              a * p0[2] + b * p1[2] + c * p2[2]};
}

}  // namespace

std::vector<DefectCurve> extract_zero_curves(const VectorLattice& phi,
                                             ExtractStats* stats_out) {
  const GridSpec& g = phi.grid;
  ExtractStats stats;

  // Deterministic nudge for exact node zeros.
  std::vector<Vec2> vals = phi.values;
  {
    const double scale = 1e-12 * std::max(median_phi_norm(phi), 1e-300);
    for (auto& v : vals)
      if (v[0] == 0.0 && v[1] == 0.0) {
        v = {scale, scale};
        ++stats.perturbed_nodes;
      }
  }

  // Six tetrahedra per cube sharing the main diagonal 0-7
  // (corner bit order: x -> bit0, y -> bit1, z -> bit2).
  static const int kTets[6][4] = {{0, 1, 5, 7}, {0, 5, 4, 7}, {0, 4, 6, 7},
                                  {0, 6, 2, 7}, {0, 2, 3, 7}, {0, 3, 1, 7}};

  std::unordered_map<FaceKey, Vec3, FaceKeyHash> crossing_cache;
  std::unordered_map<FaceKey, bool, FaceKeyHash> has_crossing;
  struct Segment {
    FaceKey a, b;
  };
  std::vector<Segment> segments;

  auto global_id = [&](int i, int j, int k) { return g.index(i, j, k); };

  for (int k = 0; k + 1 < g.nodes[2]; ++k)
    for (int j = 0; j + 1 < g.nodes[1]; ++j)
      for (int i = 0; i + 1 < g.nodes[0]; ++i) {
        std::size_t gid[8];
        Vec3 pos[8];
        Vec2 val[8];
        for (int b = 0; b < 8; ++b) {
          const int bx = b & 1, by = (b >> 1) & 1, bz = (b >> 2) & 1;
          gid[b] = global_id(i + bx, j + by, k + bz);
          pos[b] = g.coord(i + bx, j + by, k + bz);
          val[b] = vals[gid[b]];
        }
        for (const auto& tet : kTets) {
          FaceKey crossed[4];
          int ncross = 0;
          bool degenerate = false;
          for (int f = 0; f < 4; ++f) {
            // face = tet minus vertex f
            int tv[3];
            int m = 0;
            for (int t = 0; t < 4; ++t)
              if (t != f) tv[m++] = tet[t];
            const FaceKey key = make_face(gid[tv[0]], gid[tv[1]], gid[tv[2]]);
            auto it = has_crossing.find(key);
            bool crossing;
            if (it != has_crossing.end()) {
              crossing = it->second;
            } else {
              auto pt = face_crossing(pos[tv[0]], pos[tv[1]], pos[tv[2]],
                                      val[tv[0]], val[tv[1]], val[tv[2]],
                                      &degenerate);
              crossing = pt.has_value();
              has_crossing.emplace(key, crossing);
              if (crossing) crossing_cache.emplace(key, *pt);
            }
            if (crossing && ncross < 4) crossed[ncross++] = key;
          }
          if (ncross == 2) {
            segments.push_back({crossed[0], crossed[1]});
          } else if (ncross != 0 || degenerate) {
            if (ncross != 0) ++stats.degenerate_tets;
          }
        }
      }

  // Chain segments through shared faces.
  std::unordered_map<FaceKey, std::vector<std::size_t>, FaceKeyHash> incident;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    incident[segments[s].a].push_back(s);
    incident[segments[s].b].push_back(s);
  }

  std::vector<bool> used(segments.size(), false);
  std::vector<DefectCurve> curves;

  auto walk = [&](std::size_t seg0, const FaceKey& start) {
    DefectCurve curve;
    FaceKey face = start;
    std::size_t seg = seg0;
    curve.vertices.push_back(crossing_cache.at(face));
    while (true) {
      used[seg] = true;
      const FaceKey next =
          (segments[seg].a == face) ? segments[seg].b : segments[seg].a;
      if (next == start) {
        curve.closed = true;
        break;
      }
      curve.vertices.push_back(crossing_cache.at(next));
      const auto& inc = incident[next];
      std::size_t cont = SIZE_MAX;
      for (auto s : inc)
        if (!used[s]) {
          cont = s;
          break;
        }
      if (cont == SIZE_MAX) break;  // open end
      face = next;
      seg = cont;
    }
    return curve;
  };

  // Open chains first (their end faces have a single incident segment).
  for (auto& [face, inc] : incident) {
    if (inc.size() != 1 || used[inc[0]]) continue;
    curves.push_back(walk(inc[0], face));
  }
  // Remaining segments form cycles.
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    curves.push_back(walk(s, segments[s].a));
  }

  // A linear-interpolation "zero" is genuine only if the surrounding node
  // values are small (O(h * grad)); a sign flip across a pole of the field
  // also crosses zero in the linear model but with large node values.
  const double med = median_phi_norm(phi);
  auto node_scale = [&](const DefectCurve& c) {
    std::vector<double> scales;
    for (const auto& v : c.vertices) {
      int ci[3];
      for (int a = 0; a < 3; ++a) {
        int idx = int(std::floor((v[a] - g.box_min[a]) / g.spacing(a)));
        ci[a] = std::clamp(idx, 0, g.nodes[a] - 2);
      }
      double mn = 1e300;
      for (int b = 0; b < 8; ++b) {
        const auto& nv =
            vals[g.index(ci[0] + (b & 1), ci[1] + ((b >> 1) & 1),
                         ci[2] + ((b >> 2) & 1))];
        mn = std::min(mn, std::hypot(nv[0], nv[1]));
      }
      scales.push_back(mn);
    }
    auto mid = scales.begin() + scales.size() / 2;
    std::nth_element(scales.begin(), mid, scales.end());
    return *mid;
  };

  // Drop sub-grid fragments and pole artifacts.
  std::vector<DefectCurve> kept;
  for (auto& c : curves) {
    if (c.vertices.size() < 8) {
      ++stats.discarded_fragments;
      continue;
    }
    if (node_scale(c) > med) {
      ++stats.pole_artifacts;
      continue;
    }
    if (!c.closed) ++stats.open_curves;
    kept.push_back(std::move(c));
  }

  // Deterministic order: by centroid, lexicographic.
  std::sort(kept.begin(), kept.end(), [](const DefectCurve& a, const DefectCurve& b) {
    return a.centroid() < b.centroid();
  });

  if (stats_out) *stats_out = stats;
  return kept;
}

void orient_by_current(DefectCurve& curve, const VectorLattice& phi) {
  if (!curve.closed)
    throw std::runtime_error("orient_by_current: curve must be closed");
  const JacobianLattice d = jacobian_tensor(phi);
  double align = 0.0, mag = 0.0;
  const std::size_t n = curve.vertices.size();
  for (std::size_t s = 0; s < n; ++s) {
    const Vec3& a = curve.vertices[s];
    const Vec3& b = curve.vertices[(s + 1) % n];
    const Vec3 mid = 0.5 * (a + b);
    if (!d.grid.contains(mid)) continue;
    const auto dv = d.interpolate(mid);
    const Vec3 dvec{dv[0], dv[1], dv[2]};
    const Vec3 dx = b - a;
    align += dot(dx, dvec);
    mag += norm(dx) * norm(dvec);
  }
  if (!(mag > 0.0) || !std::isfinite(align))
    throw std::runtime_error("orient_by_current: non-regular zero");
  if (align < 0.0) std::reverse(curve.vertices.begin(), curve.vertices.end());
}

PlaneSampler lattice_sampler(const VectorLattice& phi) {
  return [&phi](const Vec3& x) {
    const auto v = phi.interpolate(x);
    return Vec2{v[0], v[1]};
  };
}

int winding_number(const PlaneSampler& phi, const TransversalPatch& patch,
                   int samples, double floor) {
  const double radii[5] = {1.0, 0.5, 2.0, 0.25, 4.0};
  for (double rf : radii) {
    const double r = patch.radius * rf;
    int ns = samples;
    while (ns <= 4096) {
      bool clean = true;
      double total = 0.0, max_step = 0.0;
      Vec2 prev{}, first{};
      for (int s = 0; s <= ns; ++s) {
        const double alpha = 2.0 * M_PI * (s % ns) / ns;
        const Vec3 x = patch.center + (r * std::cos(alpha)) * patch.f1 +
                       (r * std::sin(alpha)) * patch.f2;
        const Vec2 v = phi(x);
        const double vn = std::hypot(v[0], v[1]);
        if (!(vn > floor) || !std::isfinite(vn)) {
          clean = false;
          break;
        }
        if (s == 0) {
          prev = first = v;
          continue;
        }
        const double d = std::atan2(prev[0] * v[1] - prev[1] * v[0],
                                    prev[0] * v[0] + prev[1] * v[1]);
        total += d;
        max_step = std::max(max_step, std::abs(d));
        prev = v;
      }
      if (!clean) break;  // try next radius
      if (max_step < M_PI / 2.0)
        return int(std::lround(total / (2.0 * M_PI)));
      ns *= 2;
    }
  }
  throw std::runtime_error("winding_number: no clean transversal loop");
}

TransversalPatch make_patch(const DefectCurve& curve, std::size_t vertex_index,
                            double radius) {
  const std::size_t n = curve.vertices.size();
  if (n < 3) throw std::runtime_error("make_patch: degenerate curve");
  // chord over a few vertices smooths the per-vertex extraction jitter
  const std::size_t span = std::min<std::size_t>(3, (n - 1) / 2);
  const Vec3& prev = curve.vertices[(vertex_index + n - span) % n];
  const Vec3& next = curve.vertices[(vertex_index + span) % n];
  const Vec3 t = normalized(next - prev);
  const auto basis = tangent_basis(t);  // (f1, f2, t) right-handed
  return {curve.vertices[vertex_index], basis[0], basis[1], radius};
}

void attach_winding(DefectCurve& curve, const VectorLattice& phi, int patches,
                    double radius) {
  if (!curve.closed)
    throw std::runtime_error("attach_winding: curve must be closed");
  if (patches < 3) patches = 3;
  if (radius <= 0.0) radius = 3.0 * phi.grid.max_spacing();
  const PlaneSampler sampler = lattice_sampler(phi);
  int w = 0;
  for (int p = 0; p < patches; ++p) {
    const std::size_t idx = curve.vertices.size() * p / patches;
    const TransversalPatch patch = make_patch(curve, idx, radius);
    const int wp = winding_number(sampler, patch);
    if (p == 0)
      w = wp;
    else if (wp != w)
      throw std::runtime_error(
          "attach_winding: inconsistent winding across patches (under-resolved)");
  }
  curve.W = w;
  curve.beta = std::abs(w);
  curve.eta = (w > 0) - (w < 0);
}

double flux_check(const CurrentLattice& j, const TransversalPatch& patch) {
  const Vec3 n = patch.normal();
  const int nr = 32, na = 64;
  const double dr = patch.radius / nr;
  double flux = 0.0;
  for (int q = 0; q < nr; ++q) {
    const double r = (q + 0.5) * dr;
    for (int s = 0; s < na; ++s) {
      const double alpha = 2.0 * M_PI * (s + 0.5) / na;
      const Vec3 x = patch.center + (r * std::cos(alpha)) * patch.f1 +
                     (r * std::sin(alpha)) * patch.f2;
      if (!j.grid.contains(x))
        throw std::runtime_error("flux_check: patch disk exits the lattice box");
      const auto v = j.interpolate(x);
      flux += (v[0] * n[0] + v[1] * n[1] + v[2] * n[2]) * r;
    }
  }
  return flux * dr * (2.0 * M_PI / na);
}

DefectCurve pushoff_curve(const VectorLattice& phi, const DefectCurve& curve,
                          double delta) {
  const double h = phi.grid.max_spacing();
  if (!curve.closed)
    throw std::runtime_error("pushoff_curve: curve must be closed");
  if (!(delta > h) || !(delta < 5.0 * h))
    throw std::runtime_error("pushoff_curve: delta must lie in (h, 5h)");

  // Median gradient scale along the curve, from |D|^(1/2).
  const JacobianLattice d = jacobian_tensor(phi);
  std::vector<double> mags;
  for (const auto& v : curve.vertices) {
    if (!d.grid.contains(v)) continue;
    const auto dv = d.interpolate(v);
    mags.push_back(std::sqrt(norm(Vec3{dv[0], dv[1], dv[2]})));
  }
  if (mags.empty()) throw std::runtime_error("pushoff_curve: curve outside grid");
  auto mid = mags.begin() + mags.size() / 2;
  std::nth_element(mags.begin(), mid, mags.end());
  const double level = delta * (*mid);

  VectorLattice shifted = phi;
  for (auto& v : shifted.values) v[0] -= level;
  shifted.boundary_value[0] -= level;

  auto candidates = extract_zero_curves(shifted);
  const DefectCurve* best = nullptr;
  double best_dist = 0.0;
  auto mean_dist = [&](const DefectCurve& c) {
    double s = 0.0;
    for (const auto& v : c.vertices) {
      double dmin = 1e300;
      for (const auto& w : curve.vertices) dmin = std::min(dmin, norm(v - w));
      s += dmin;
    }
    return s / double(c.vertices.size());
  };
  for (const auto& c : candidates) {
    if (!c.closed) continue;
    const double dist = mean_dist(c);
    if (!best || dist < best_dist) {
      best = &c;
      best_dist = dist;
    }
  }
  if (!best)
    throw std::runtime_error("pushoff_curve: no closed level curve found");

  // The pushoff must stay clear of the original curve.
  for (const auto& v : best->vertices) {
    double dmin = 1e300;
    for (const auto& w : curve.vertices) dmin = std::min(dmin, norm(v - w));
    if (dmin < 0.5 * h)
      throw std::runtime_error(
          "pushoff_curve: framing unresolved at this resolution");
  }

  DefectCurve push = *best;
  orient_by_current(push, shifted);
  return push;
}

}  // namespace hopflink
