#pragma once
// Truncated analytic torsion and the Quillen-type anomaly built from it.
// The regularized objects live entirely in the tunneling window: the exact
// kd-dimensional kernel is dropped by count, the Landau band is cut off by
// the k^{1-epsilon} threshold, and what remains is
//   torsion(f)  = sum of log(lambda) over the q=1 window (0 when empty)
//   gram(f)     = log det of the h^2 Gram matrix of the flat-weight kernel
//                 basis under the weight exp(-k f)
//   quillen(f,g) = [torsion(f) - gram(f)] - [torsion(g) - gram(g)]
// The gram part obeys an exact cocycle identity and shifts by -k^2 d c under
// f -> f + c; the combination above is what admits a k -> infinity limit.

#include "tunnellab/bundle.hpp"
#include "tunnellab/spectrum.hpp"

#include <vector>

namespace tunnel {

// log of the product of window eigenvalues; empty window gives 0
double truncated_torsion(const SpectrumResult& spec, const ThresholdPartition& part);

// log det of G_ij = h^2 sum_a conj(psi_i) psi_j exp(-k f); basis vectors are
// the flat-weight kernel sections normalized to h^2 sum |psi|^2 = 1.
// Computed by scaling out the diagonal and Cholesky-factoring the resulting
// correlation matrix, which stays well conditioned when G itself spans many
// orders of magnitude. Throws if the scaled matrix is not positive definite.
double gram_log_det(const std::vector<std::vector<cdouble>>& basis,
                    const LineBundleModel& model);

// gram cocycle combination: -gram(f) + gram(g) for two weights on one bundle
double l_functional(const std::vector<std::vector<cdouble>>& basis,
                    const LineBundleModel& model_f, const LineBundleModel& model_g);

struct QuillenParts {
  double gram_f = 0.0, gram_g = 0.0;
  double torsion_f = 0.0, torsion_g = 0.0;
  int window_f = 0, window_g = 0;  // tunneling window sizes
  double anomaly = 0.0;            // [torsion_f - gram_f] - [torsion_g - gram_g]
};

// computes both sides on the same reference basis and the same threshold
// k^{1-epsilon}; route selects the eigensolver for the window spectra
QuillenParts quillen_anomaly(const LineBundleModel& model_f, const LineBundleModel& model_g,
                             double epsilon, SolveRoute route = SolveRoute::kAuto,
                             const SolverOptions& opts = {});

struct TorsionDerivative {
  double numeric = 0.0;    // central difference of the truncated torsion
  double predicted = 0.0;  // k * h^2 sum v (rho_0 - rho_1) over the windows at t
};

// d/dt of torsion along f_t = base + t * dir, compared against the
// eigenvector-density prediction. Refuses (by throwing, naming the eigenvalue)
// when any window eigenvalue at t +- dt sits within 1.5 * threshold *
// expm1(2 k ||dir||_inf dt) of the threshold, 1.5x the largest multiplicative
// drift an eigenvalue can undergo across the stencil, since the window
// population could then change between the two ends.
TorsionDerivative torsion_derivative_check(const ScalarField& base, const ScalarField& dir,
                                           int k, int d, double t, double dt, double epsilon,
                                           const SolverOptions& opts = {});

struct QuasimodeResult {
  double quotient = 0.0;  // ||M a||^2 / ||a||^2 for the localized trial section
  double mass = 0.0;      // h^2 ||a||^2, how much of the Gaussian the cutoff keeps
};

// Gaussian trial section concentrated at (x0, y0), phase-matched to the
// Landau gauge of build_dbar, projected onto the numerical kernel band and
// cut off by a C^2 plateau bump of the given radius (identically one inside
// radius/2). The projection makes the cutoff ring the only residual, so the
// quotient tracks the profile amplitude at the ring instead of the O(h)
// sampling mismatch. Requires curvature_density > 0 on the cutoff disc.
QuasimodeResult quasimode_quotient(const LineBundleModel& model, double x0, double y0,
                                   double width);

}  // namespace tunnel
