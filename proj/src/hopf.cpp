#include "hopflink/hopf.hpp"

#include <cmath>
#include <stdexcept>

#include "hopflink/linking.hpp"

namespace hopflink {

double volume_integral_dot(const Lattice<3>& a, const Lattice<3>& b) {
  if (!(a.grid == b.grid))
    throw std::invalid_argument("volume_integral_dot: grid mismatch");
  const GridSpec& g = a.grid;
  const double cell = g.spacing(0) * g.spacing(1) * g.spacing(2);
  auto axis_w = [](int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; };
  double sum = 0.0;
  for (int k = 0; k < g.nodes[2]; ++k)
    for (int j = 0; j < g.nodes[1]; ++j)
      for (int i = 0; i < g.nodes[0]; ++i) {
        const auto& va = a.at(i, j, k);
        const auto& vb = b.at(i, j, k);
        const double w = axis_w(i, g.nodes[0]) * axis_w(j, g.nodes[1]) *
                         axis_w(k, g.nodes[2]);
        sum += w * (va[0] * vb[0] + va[1] * vb[1] + va[2] * vb[2]);
      }
  return sum * cell;
}

HopfDirectResult hopf_direct(const UnitSphereLattice& nf) {
  const CurrentLattice j = pullback_volume(nf);
  HopfDirectResult res;
  res.divergence_residual = divergence(j).max_interior;
  res.boundary_fraction = boundary_mass_fraction(j);
  const OmegaLattice omega = solve_omega_coulomb(j);
  res.H = volume_integral_dot(omega, j);
  return res;
}

double hopf_direct_with_omega(const UnitSphereLattice& nf, const OmegaLattice& omega) {
  const CurrentLattice j = pullback_volume(nf);
  return volume_integral_dot(omega, j);
}

double omega_integral_over_defect(const OmegaLattice& omega, const DefectCurve& curve) {
  return line_integral(omega, curve.vertices, curve.closed);
}

namespace {

// Segment-pair midpoint estimate of the writhe of a closed polyline.
double polyline_writhe(const std::vector<Vec3>& v) {
  const std::size_t m = v.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Vec3 ti = v[(i + 1) % m] - v[i];
    const Vec3 mi = 0.5 * (v[(i + 1) % m] + v[i]);
    for (std::size_t j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;  // adjacent around the seam
      const Vec3 tj = v[(j + 1) % m] - v[j];
      const Vec3 mj = 0.5 * (v[(j + 1) % m] + v[j]);
      const Vec3 r = mi - mj;
      const double rn = norm(r);
      if (rn < 1e-12) continue;
      sum += 2.0 * det3(ti, tj, r) / (rn * rn * rn);
    }
  }
  return sum / (4.0 * M_PI);
}

}  // namespace

DefectLinkReport hopf_from_defects(const std::vector<DefectCurve>& curves) {
  DefectLinkReport rep;
  const std::size_t n = curves.size();
  for (std::size_t k = 0; k < n; ++k) {
    const DefectCurve& c = curves[k];
    if (!c.closed) {
      const Vec3 cen = c.centroid();
      throw std::runtime_error(
          "hopf_from_defects: open defect curve near (" + std::to_string(cen[0]) +
          ", " + std::to_string(cen[1]) + ", " + std::to_string(cen[2]) +
          "); enlarge the box until all defects close up");
    }
    if (!c.pushoff)
      throw std::runtime_error("hopf_from_defects: curve " + std::to_string(k) +
                               " has no pushoff framing");
    CurveSummary s;
    s.closed = true;
    s.W = c.W;
    s.beta = c.beta;
    s.eta = c.eta;
    s.length = c.length();
    s.centroid = c.centroid();
    s.self_link = polyline_linking_exact(c.vertices, c.pushoff->vertices);
    s.writhe = polyline_writhe(c.vertices);
    rep.curves.push_back(s);
  }
  rep.link.assign(n, std::vector<long long>(n, 0));
  for (std::size_t k = 0; k < n; ++k) {
    rep.link[k][k] = rep.curves[k].self_link;
    for (std::size_t l = k + 1; l < n; ++l) {
      const long long lk =
          polyline_linking_exact(curves[k].vertices, curves[l].vertices);
      rep.link[k][l] = lk;
      rep.link[l][k] = lk;
    }
  }
  long long H = 0;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l)
      H += (long long)curves[k].W * curves[l].W * rep.link[k][l];
  rep.H_links = H;
  return rep;
}

HopfReconciliation reconcile(const HopfDirectResult& direct,
                             const DefectLinkReport& links, double tolerance) {
  HopfReconciliation r;
  r.H_direct = direct.H;
  r.H_links = links.H_links;
  r.rounded = std::llround(direct.H);
  r.residual = std::abs(direct.H - double(links.H_links));
  r.tolerance = tolerance;
  r.consistent = r.residual <= tolerance;
  r.integer_match = r.rounded == links.H_links;
  return r;
}

PipelineResult run_pipeline(const R2Field& phi, const GridSpec& grid,
                            const PipelineOptions& opt) {
  grid.validate();
  PipelineResult out;

  const VectorLattice phil = sample(phi, grid);
  const Vec2 phi0 = far_value(phi);
  // reported, not enforced: the topological outputs only need the defects
  // well inside the box, not strict face constancy
  out.boundary_deviation = check_boundary(phil, phi0, opt.boundary_tol).max_deviation;

  const UnitSphereLattice nl = sample(lift_to_sphere(phi), grid);
  out.direct = hopf_direct(nl);

  const double h = grid.max_spacing();
  out.curves = extract_zero_curves(phil, &out.stats);
  for (DefectCurve& c : out.curves) {
    orient_by_current(c, phil);
    attach_winding(c, phil, opt.patches, opt.patch_radius_h * h);
    if (c.closed)
      c.pushoff = std::make_shared<DefectCurve>(
          pushoff_curve(phil, c, opt.pushoff_delta_h * h));
  }
  out.links = hopf_from_defects(out.curves);
  out.summary = reconcile(out.direct, out.links);
  return out;
}

}  // namespace hopflink
