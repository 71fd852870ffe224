#pragma once

#include <string>
#include <vector>

#include "hopflink/current.hpp"
#include "hopflink/defects.hpp"
#include "hopflink/fieldlab.hpp"

namespace hopflink {

// Trapezoid-weighted integral of dot(a, b) over the grid box.
double volume_integral_dot(const Lattice<3>& a, const Lattice<3>& b);

struct HopfDirectResult {
  double H = 0.0;
  double divergence_residual = 0.0;  // max interior |div j| before the solve
  double boundary_fraction = 0.0;    // L1 mass of j in the outer two layers
};

// H = int omega . j with j the pulled-back volume current of the unit field
// and omega its Coulomb-gauge potential.
HopfDirectResult hopf_direct(const UnitSphereLattice& nf);

// Same contraction against a caller-supplied omega (gauge experiments).
double hopf_direct_with_omega(const UnitSphereLattice& nf, const OmegaLattice& omega);

double omega_integral_over_defect(const OmegaLattice& omega, const DefectCurve& curve);

struct CurveSummary {
  bool closed = false;
  int W = 0, beta = 0, eta = 0;
  double length = 0.0;
  Vec3 centroid{};
  long long self_link = 0;  // Lk(curve, pushoff)
  double writhe = 0.0;      // reported only; never enters H
};

struct DefectLinkReport {
  std::vector<CurveSummary> curves;
  // symmetric; diag holds framing self-links
  std::vector<std::vector<long long>> link;
  long long H_links = 0;  // sum_{k,l} W_k W_l Lk_{kl}
};

// Requires every curve closed, oriented, with winding attached and a pushoff
// present; throws otherwise naming the offending curve.
DefectLinkReport hopf_from_defects(const std::vector<DefectCurve>& curves);

struct HopfReconciliation {
  double H_direct = 0.0;
  long long H_links = 0;
  long long rounded = 0;  // llround(H_direct)
  double residual = 0.0;  // |H_direct - H_links|
  double tolerance = 0.0;
  bool consistent = false;
  bool integer_match = false;  // rounded == H_links
};

HopfReconciliation reconcile(const HopfDirectResult& direct,
                             const DefectLinkReport& links,
                             double tolerance = 0.2);

struct PipelineOptions {
  double pushoff_delta_h = 2.0;  // pushoff level in units of max grid spacing
  int patches = 3;
  double patch_radius_h = 3.0;  // transversal patch radius, same units
  double boundary_tol = 1e-2;   // far-field constancy requirement on the box faces
};

struct PipelineResult {
  HopfDirectResult direct;
  std::vector<DefectCurve> curves;
  DefectLinkReport links;
  HopfReconciliation summary;
  ExtractStats stats;
  double boundary_deviation = 0.0;
};

// Full two-route evaluation of an order-parameter field on a grid.
PipelineResult run_pipeline(const R2Field& phi, const GridSpec& grid,
                            const PipelineOptions& opt = {});

}  // namespace hopflink
