#pragma once
// Run configuration: INI-style text with [section] headers and key = value
// lines. Unknown sections or keys are hard errors carrying the line number;
// silent typo absorption has burned enough sweep hours elsewhere.
//
//   [run]       profile, A, sigma, table, d, k, N, c, epsilon, solver,
//               threads, seed
//   [envelope]  tol, omega, max_sweeps
//   [spectrum]  residual_tol, dense_ceiling, shift
//   [output]    dir, spectra, density
//
// k and N take comma lists; an empty N defers to N = ceil(c * sqrt(k*d)).

#include "tunnellab/profiles.hpp"

#include <string>
#include <vector>

namespace tunnel {

struct RunConfig {
  ProfileSpec profile;
  int d = 1;
  std::vector<int> k = {8, 12, 16, 24, 32};
  std::vector<int> N;        // explicit per-k grids; empty -> rule below
  double n_rule_c = 12.0;    // N = ceil(c * sqrt(k*d))
  double epsilon = 0.25;
  std::string solver = "auto";  // auto | dense | iterative
  int threads = 0;              // 0 -> TUNNELLAB_THREADS env or 1
  unsigned long long seed = 12345;

  double envelope_tol = 1e-10;
  double envelope_omega = 1.8;
  long envelope_max_sweeps = 2000000;

  double residual_tol = 1e-11;
  int dense_ceiling = 9216;
  double shift = -0.02;

  std::string out_dir = "out";
  bool write_spectra = true;
  bool write_density = false;
};

// throws ConfigError with the offending line number
RunConfig parse_config_text(const std::string& text);

// sets one field by dotted path, e.g. "run.epsilon" = "0.3"; same validation
// as the file parser (ConfigError with line 0 on bad key or value)
void config_set(RunConfig& cfg, const std::string& dotted_key, const std::string& value);

// cross-field checks: flux bound N^2 > 2 k d for every resolved pair, k
// strictly increasing, N list length matching k. Throws ConfigError.
void validate_config(const RunConfig& cfg);

// the grid used for the i-th k entry (explicit list or rule)
int resolved_grid(const RunConfig& cfg, int i);

// 0 -> TUNNELLAB_THREADS env var if set and positive, else 1
int resolved_threads(const RunConfig& cfg);

// canonical text form; parse_config_text round-trips it
std::string config_to_text(const RunConfig& cfg);

}  // namespace tunnel
