#pragma once
// k-sweep orchestration: one envelope solve per distinct grid, then per k the
// operator, window spectra for q = 0,1, partition, log-sums, Gram and anomaly
// against the flat weight, finished by 1/k rate fits. Output files are byte
// deterministic for a fixed config and thread count: fixed row order, no
// timestamps, shortest round-trip number formatting.
//
// Files written under the output directory:
//   results.csv                k,d,N,profile,epsilon,quantity,value
//                              (fit rows use k = 0 and N = 0)
//   spectrum_k{K}_q{Q}.csv     k,d,N,profile,q,index,eigenvalue
//   envelope_N{N}.csv          j,l,f,envelope,contact
//   density_k{K}_q{Q}.csv      j,l,value (when output.density = true)
//   manifest.json              config echo, tolerances, outputs, errors, fits

#include "tunnellab/config.hpp"

#include <string>
#include <utility>
#include <vector>

namespace tunnel {

struct FitResult {
  double intercept = 0.0;  // limit value as k -> infinity
  double slope = 0.0;      // coefficient of 1/k
  double r2 = 0.0;
  int samples = 0;
};

// least squares of value against a + b/k; throws std::invalid_argument when
// fewer than 3 samples arrive (a two-point fit always "succeeds" and lies)
FitResult fit_rate(const std::vector<std::pair<int, double>>& samples);

struct SweepRow {
  int k = 0;
  int d = 0;
  int N = 0;
  std::string profile;
  double epsilon = 0.0;
  std::string quantity;
  double value = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::pair<int, std::string>> errors;  // per-k failures, k kept out of rows
  std::vector<std::string> files;                   // relative names, emission order
  std::string manifest;                             // the manifest.json bytes
};

// runs the sweep and writes all files under cfg.out_dir (created if needed)
SweepResult run_sweep(const RunConfig& cfg);

// quick invariant pass over every module; returns a list of failed checks
// (empty on success). verbose streams one line per check to stdout.
std::vector<std::string> selftest(bool verbose);

}  // namespace tunnel
