#pragma once
// Eigensolvers and spectral bookkeeping for the two lattice Laplacians
// H_0 = M^+M and H_1 = MM^+. Two independent routes:
//   dense:     LAPACK zheevd on the materialized matrix (exact reference,
//              refuses dimensions above dense_ceiling)
//   iterative: blocked shift-invert subspace iteration with Rayleigh-Ritz
//              on the original operator; handles the kd-fold degenerate
//              kernel natively and certifies residuals per pair
// Both routes order eigenvalues ascending and normalize eigenvectors to
// h^2 sum |psi|^2 = 1 so densities integrate to the state count.

#include "tunnellab/bundle.hpp"

#include <string>
#include <vector>

namespace tunnel {

enum class SolveRoute { kAuto, kDense, kIterative };

struct SolverOptions {
  int dense_ceiling = 9216;      // refuse dense solves above this dimension
  double shift = -0.02;          // shift-invert pole; H - shift*I stays SPD
  double residual_tol = 1e-9;    // accept Ritz pairs with ||Hx-lx|| <= tol*||H||_1
  int max_iterations = 500;
  int block_extra = 16;          // block size = wanted + max(block_extra, wanted/2)
  unsigned long long seed = 0x9e3779b97f4a7c15ull;  // start block generator
};

struct SpectrumResult {
  int q = 0;
  std::vector<double> eigenvalues;             // ascending
  std::vector<std::vector<cdouble>> vectors;   // empty when not requested
  bool complete = false;                       // true iff all dim() eigenvalues present
  double residual_bound = 0.0;                 // certified max ||Hx - lambda x|| / ||H||_1
  std::string route;                           // "dense" or "iterative"
};

// full spectrum by LAPACK; throws above opts.dense_ceiling
SpectrumResult eigensolve_dense(const DbarOperator& op, int q, bool want_vectors,
                                const SolverOptions& opts = {});

// lowest `count` eigenpairs by subspace iteration; deterministic for a fixed
// seed; throws on non-convergence with the worst residual in the message
SpectrumResult eigensolve_lowest(const DbarOperator& op, int q, int count,
                                 bool want_vectors, const SolverOptions& opts = {});

// lowest eigenpairs guaranteed to reach past `threshold`: retries with larger
// counts until eigenvalues[last] >= 1.15 * threshold or the spectrum is complete
SpectrumResult eigensolve_window(const DbarOperator& op, int q, double threshold,
                                 bool want_vectors, const SolverOptions& opts = {});

struct ThresholdPartition {
  int kernel_count = 0;   // always k*d: the lattice kernel is exact in both degrees
  int small_begin = 0;    // index range [small_begin, small_end) of the tunneling window
  int small_end = 0;
  double threshold = 0.0; // k^{1-epsilon}
  std::string rule;       // "power" or "relgap"
};

// power rule: small = positive eigenvalues in (0, k^{1-epsilon}) after the
// kernel block. Requires the computed spectrum to reach the threshold.
// Throws if any eigenvalue past the kernel block is <= 0 inside the window
// (the solver leaked kernel states; results would be meaningless).
ThresholdPartition partition_small(const SpectrumResult& spec, int k, int d,
                                   double epsilon);

// alternative rule for sensitivity checks: cut at the largest multiplicative
// gap among eigenvalues below half the Landau gap 2 pi k d
ThresholdPartition partition_relgap(const SpectrumResult& spec, int k, int d);

// sum of log(eigenvalue) over the window; throws on empty window or
// nonpositive entries
double logsum_small(const SpectrumResult& spec, const ThresholdPartition& part);

// rho(site) = sum over [begin,end) of |psi_i(site)|^2; needs vectors
std::vector<double> one_point_density(const SpectrumResult& spec, int begin, int end);

// sum over the positive spectrum of exp(-t lambda); requires a complete spectrum
double heat_trace(const SpectrumResult& spec, const ThresholdPartition& part, double t);

// smallest singular value of a dense m x m complex matrix (row-major);
// used for principal-angle crosschecks
double overlap_smallest_singular_value(const std::vector<cdouble>& a, int m);

// BLAS thread count for the dense route; everything else is single threaded
void set_solver_threads(int n);
int solver_threads();

}  // namespace tunnel
