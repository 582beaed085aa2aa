#pragma once
// Obstacle-problem envelope: largest u <= f with laplacian5(u) >= -4 pi d,
// solved by projected SOR with a fixed raster sweep. The result certifies
// three residuals directly (no reliance on the iterate-change proxy):
//   feasibility   max(u - f)                      <= tol (exact 0 by projection)
//   curvature     max(-4 pi d - lap u, 0)/(4 pi)  <= tol   i.e. beta(u) >= -tol
//   complementarity max (f - u) * beta(u)         <= tol

#include "tunnellab/grid.hpp"

namespace tunnel {

struct EnvelopeResult {
  ScalarField envelope;        // Pf
  std::vector<unsigned char> contact;  // 1 where Pf == f within contact_tol
  double residual = 0;         // max complementarity product at exit
  double curvature_residual = 0;  // max(-beta(Pf), 0) at exit
  long iterations = 0;         // full sweeps performed
  bool converged = false;
};

// omega_relax in [1,2); tol > 0. Initialization u0 = f; iterates stay <= f.
// max_sweeps guards runaway input; non-convergence returns converged=false.
EnvelopeResult project_envelope(const ScalarField& f, int d, double tol = 1e-10,
                                double omega_relax = 1.8, long max_sweeps = 2000000);

// |h^2 sum (Pf - f) * beta(Pf)|, bounded by N^2 h^2 * complementarity tol
double orthogonality_residual(const ScalarField& f, const EnvelopeResult& result, int d);

}  // namespace tunnel
