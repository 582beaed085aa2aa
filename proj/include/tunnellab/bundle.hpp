#pragma once
// Discrete dbar operator for sections of the k-th power of a degree-d bundle
// on the torus grid. The holomorphic structure is a fixed set of link phases
// (Landau gauge, uniform plaquette flux 2 pi k d / N^2, with the boundary
// twist column that makes the total flux integer); the metric enters only
// through the diagonal weight E = diag(exp(-k f)) via the similarity
// M = E^{1/2} D E^{-1/2}, so ker M = E^{1/2} ker D is weight independent.
//
// Stencil (row a = site (j,l), c = 1/(sqrt(2) h)):
//   M[a, (j+1,l)] = c * exp(i theta_x) * exp(+k(f_x+ - f_a)/2)
//   M[a, (j,l+1)] = i c * exp(i theta_y) * exp(+k(f_y+ - f_a)/2)
//   M[a, a]       = -c (1 + i)
//   theta_y(j,l) = -2 pi alpha j,  theta_x = 0 except theta_x(N-1,l) = +2 pi alpha N l
// with alpha = k d / N^2. The 1/sqrt(2) prefactor normalizes the f=0
// spectrum of M^+M to the Landau ladder 2 pi k d * {0, 1, 2, ...} (up to
// O(alpha) lattice corrections), matching the 2 pi curvature normalization.

#include "tunnellab/grid.hpp"

#include <complex>
#include <vector>

namespace tunnel {

using cdouble = std::complex<double>;

struct LineBundleModel {
  TorusGrid grid;
  int k = 1;      // tensor power
  int d = 1;      // degree
  ScalarField f;  // metric perturbation; reference weight has constant curvature d

  LineBundleModel() = default;
  LineBundleModel(const TorusGrid& g, int k_, int d_, const ScalarField& f_);
  int flux() const { return k * d; }
};

struct DbarOperator {
  LineBundleModel model;
  // 3 nonzeros per row: x-hop to (j+1,l), y-hop to (j,l+1), diagonal
  std::vector<cdouble> ax, ay;  // hop coefficients per row
  cdouble diag;                 // same on every row: -c(1+i)
  std::vector<int> colx, coly;  // hop column indices per row

  int dim() const { return model.grid.size(); }

  // y = M x and y = M^+ x
  void apply(const cdouble* x, cdouble* y) const;
  void apply_adjoint(const cdouble* x, cdouble* y) const;
  // y = H_q x with H_0 = M^+ M, H_1 = M M^+
  void apply_laplacian(int q, const cdouble* x, cdouble* y) const;

  // exact closed forms for diagnostics
  double trace_laplacian() const;        // trace M^+M = trace MM^+ = sum |entries|^2
  double plaquette_flux_dev() const;     // max | arg(plaquette product) - 2 pi alpha | over plaquettes
  cdouble wilson_x(int l) const;         // product of x-link phases around row l (f-weight excluded)
  cdouble wilson_y(int j) const;         // product of y-link phases around column j
};

// rejects models violating the flux bound N^2 > 2 k d
DbarOperator build_dbar(const LineBundleModel& model);

// kd lowest eigenvectors of M^+M at f = 0, orthonormal for the h^2 grid inner
// product, with the (kd+1)-th eigenvalue at least 10x the kd-th (gap
// certificate; the lattice kernel is exact so the ratio is ~1e12 in practice).
// Throws if f != 0 or the certificate fails.
std::vector<std::vector<cdouble>> reference_kernel_basis(const LineBundleModel& model);

// largest principal angle (radians) between the numerical kernel span and the
// sampled continuum lowest-Landau theta sections matched to the gauge above:
//   psi_r(x,y) = sum_p exp(-pi m (x - p - r/m)^2) exp(2 pi i (r + m p) y),
// m = kd, r = 0..m-1, truncation certified below 1e-14
double theta_crosscheck(const LineBundleModel& model);

}  // namespace tunnel
