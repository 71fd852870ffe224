#pragma once

#include <vector>

#include "hopflink/grid.hpp"

namespace hopflink {

// omega_mu = (1/A(S^1)) eps_ab m^a d_mu m^b. Nodes whose difference stencil
// touches masked input are masked in the output.
OmegaLattice omega_from_direction(const DirectionLattice& m);

// j = curl omega, the n=2 form of the dual exterior derivative.
CurrentLattice current_from_omega(const OmegaLattice& omega);

// Hodge dual of the pulled-back unit volume element of S^2:
// F^mu = (1/8pi) eps^{mu nu la} eps_ABC n^A d_nu n^B d_la n^C.
CurrentLattice pullback_volume(const UnitSphereLattice& nf);

// D^mu = (grad phi^1 x grad phi^2)^mu.
JacobianLattice jacobian_tensor(const VectorLattice& phi);

struct DivergenceReport {
  ScalarLattice residual;
  double max_interior = 0.0;  // max |d_mu v^mu| at least 2 layers from faces
};
DivergenceReport divergence(const Lattice<3>& v);

// Fraction of the L1 mass of v carried by the outermost two node layers.
double boundary_mass_fraction(const Lattice<3>& v);

// Coulomb-gauge omega with curl omega ~= j: free-space (zero-padded FFT)
// Poisson solve for the vector potential followed by a discrete curl.
// Throws std::runtime_error if j has significant boundary support.
OmegaLattice solve_omega_coulomb(const CurrentLattice& j);

// Componentwise free-space Poisson solve: returns u with lap u = -rhs,
// u(x) = (1/4pi) int rhs(y)/|x-y| dy over the box.
Lattice<3> free_space_poisson(const Lattice<3>& rhs);

// Midpoint line integral of a 3-component node field along a polyline.
double line_integral(const Lattice<3>& w, const std::vector<Vec3>& vertices,
                     bool closed);

}  // namespace hopflink
