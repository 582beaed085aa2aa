// Acceptance battery. Usage: tunnellab_acceptance <criterion 1..10>.
// Each criterion prints its measurements followed by a single verdict line
//   criterion N: PASS <summary>   or   criterion N: FAIL <summary>
// and exits 0 on PASS, 1 on FAIL. Every tolerance is pinned in this file;
// nothing here reads configuration from the environment.

#include "tunnellab/config.hpp"
#include "tunnellab/energy.hpp"
#include "tunnellab/envelope.hpp"
#include "tunnellab/profiles.hpp"
#include "tunnellab/spectrum.hpp"
#include "tunnellab/sweep.hpp"
#include "tunnellab/torsion.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace tunnel;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

ScalarField cos_field(int N, double A = 1.0) {
  ProfileSpec spec;
  spec.name = "cos_y";
  spec.A = A;
  return build_profile(spec, N);
}

ScalarField flat_field(int N) { return ScalarField{TorusGrid(N)}; }

LineBundleModel cos_model(int N, int k, double A = 1.0) {
  return LineBundleModel(TorusGrid(N), k, 1, cos_field(N, A));
}

LineBundleModel flat_model(int N, int k) {
  return LineBundleModel(TorusGrid(N), k, 1, flat_field(N));
}

int grid_rule(int k) { return static_cast<int>(std::lround(12.0 * std::sqrt(double(k)))); }

// closed-form constants of the 1-D reduction (cos_y, A = 1, d = 1); the
// contact angle s* solves sin s = s/pi
double contact_y() {
  double s = 2.3;
  for (int i = 0; i < 64; ++i) s -= (std::sin(s) - s / kPi) / (std::cos(s) - 1.0 / kPi);
  return s / (2 * kPi);
}

double closed_form_rate() {
  const double ys = contact_y();
  const double i_y2 = ys * ys * ys / 3.0;
  const double i_ysin =
      std::sin(2 * kPi * ys) / (4 * kPi * kPi) - ys * std::cos(2 * kPi * ys) / (2 * kPi);
  const double i_sin2 = ys / 2.0 - std::sin(4 * kPi * ys) / (8 * kPi);
  return (16 * kPi * kPi * i_y2 - 16 * kPi * kPi * i_ysin + 4 * kPi * kPi * i_sin2) / (4 * kPi);
}

double morse_constant() {
  const double t = std::acos(1.0 / kPi);
  return std::sin(t) - t / kPi;
}

struct splitmix64 {
  unsigned long long s;
  explicit splitmix64(unsigned long long seed) : s(seed) {}
  unsigned long long next() {
    unsigned long long z = (s += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
};

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

bool verdict(int n, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s %s\n", n, pass ? "PASS" : "FAIL", detail.c_str());
  return pass;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// -------------------------------------------------------------------------
// criterion 1: positive spectra of the two Laplacians pair to 1e-10 relative
// over 20 seeded random models
bool criterion1() {
  splitmix64 rng(0xace5eedull);
  double worst = 0;
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 1 + int(rng.next() % 4);
    const int d = 1 + int(rng.next() % 2);
    const int N = 12 + 2 * int(rng.next() % 7);
    // smooth random weight from three low modes, admissible amplitudes
    ScalarField f{TorusGrid(N)};
    const double a = 0.25 * (2 * rng.uniform() - 1);
    const double b = 0.25 * (2 * rng.uniform() - 1);
    const double c = 0.15 * (2 * rng.uniform() - 1);
    const double pa = 2 * kPi * rng.uniform(), pb = 2 * kPi * rng.uniform();
    for (int j = 0; j < N; ++j)
      for (int l = 0; l < N; ++l)
        f(j, l) = a * std::cos(2 * kPi * j / N + pa) + b * std::cos(2 * kPi * l / N + pb) +
                  c * std::cos(2 * kPi * (j + l) / N);
    const DbarOperator op = build_dbar(LineBundleModel(TorusGrid(N), k, d, f));
    const SpectrumResult s0 = eigensolve_dense(op, 0, false);
    const SpectrumResult s1 = eigensolve_dense(op, 1, false);
    for (size_t i = size_t(k) * d; i < s0.eigenvalues.size(); ++i) {
      const double rel = std::fabs(s0.eigenvalues[i] - s1.eigenvalues[i]) /
                         std::max(s0.eigenvalues[i], s1.eigenvalues[i]);
      worst = std::max(worst, rel);
      ++checked;
    }
    std::printf("  model %2d: k=%d d=%d N=%2d  pairs ok\n", trial, k, d, N);
  }
  std::printf("  %d eigenvalue pairs, worst relative mismatch %.3e\n", checked, worst);
  return verdict(1, worst <= 1e-10, fmt("(worst pairing error %.3e <= 1e-10)", worst));
}

// -------------------------------------------------------------------------
// criterion 2: flat weight, d = 1, k = 1..8 at N = round(12 sqrt k): exactly
// k kernel states below the gap certificate and the first positive eigenvalue
// within 2% of 2 pi k
bool criterion2() {
  bool kernel_ok = true, gap_ok = true;
  double worst_dev = 0;
  for (int k = 1; k <= 8; ++k) {
    const int N = grid_rule(k);
    const DbarOperator op = build_dbar(flat_model(N, k));
    const SpectrumResult sp = eigensolve_dense(op, 0, false);
    const double noise = 1e-10 * 4.0 * N * N;
    const double lam0 = sp.eigenvalues[size_t(k) - 1];
    const double lam1 = sp.eigenvalues[size_t(k)];
    const bool kk = lam0 <= noise && lam1 > 1e6 * std::max(lam0, 1e-300);
    const double dev = lam1 / (2 * kPi * k) - 1.0;
    std::printf("  k=%d N=%2d  kernel=%s  lambda1=%.6f  2pik=%.6f  dev=%+.3f%%\n", k, N,
                kk ? "exact" : "BROKEN", lam1, 2 * kPi * k, 100 * dev);
    kernel_ok = kernel_ok && kk;
    if (std::fabs(dev) > std::fabs(worst_dev)) worst_dev = dev;
    gap_ok = gap_ok && std::fabs(dev) <= 0.02;
  }
  return verdict(2, kernel_ok && gap_ok,
                 std::string("(kernel multiplicity ") + (kernel_ok ? "exact" : "broken") +
                     fmt("; worst Landau deviation %+.2f%% vs 2%% bound)", 100 * worst_dev));
}

// -------------------------------------------------------------------------
// criterion 3: empty tunneling window for the flat weight and the admissible
// cos amplitude A = 0.2 at every k in the sweep
bool criterion3() {
  bool ok = true;
  for (int k : {8, 12, 16, 24, 32}) {
    const int N = static_cast<int>(std::ceil(12.0 * std::sqrt(double(k))));
    for (double A : {0.0, 0.2}) {
      const LineBundleModel m =
          A == 0.0 ? flat_model(N, k) : LineBundleModel(TorusGrid(N), k, 1, cos_field(N, A));
      const DbarOperator op = build_dbar(m);
      const SpectrumResult sp = eigensolve_window(op, 1, std::pow(double(k), 0.75), false);
      const ThresholdPartition part = partition_small(sp, k, 1, 0.25);
      const int count = part.small_end - part.small_begin;
      std::printf("  k=%2d N=%2d A=%.1f  window count=%d\n", k, N, A, count);
      ok = ok && count == 0;
    }
  }
  return verdict(3, ok, "(no spurious window states for positive-curvature weights)");
}

// -------------------------------------------------------------------------
// criterion 4: envelope certificates at N = 256 plus the independent 1-D
// oracle and the integration-by-parts energy identity
bool criterion4() {
  const int N = 256;
  const ScalarField f = cos_field(N);
  const EnvelopeResult env = project_envelope(f, 1, 1e-10);
  double feas = -1e300;
  for (int i = 0; i < N * N; ++i)
    feas = std::max(feas, env.envelope.v[size_t(i)] - f.v[size_t(i)]);
  const double orth = orthogonality_residual(f, env, 1);

  // independent 1-D projected SOR on 8192 points with the model-problem
  // optimal relaxation
  const int n1 = 8192;
  std::vector<double> obs(n1);
  for (int i = 0; i < n1; ++i) obs[size_t(i)] = std::cos(2 * kPi * i / double(n1));
  std::vector<double> u = obs;
  const double h1 = 1.0 / n1;
  const double omega1 = 2.0 / (1.0 + std::sin(kPi * h1));
  const double rhs = -4.0 * kPi * h1 * h1;
  for (long sweep = 0; sweep < 200000; ++sweep) {
    double change = 0;
    for (int i = 0; i < n1; ++i) {
      const double gs = (u[size_t((i + 1) % n1)] + u[size_t((i + n1 - 1) % n1)] - rhs) / 2.0;
      double next = u[size_t(i)] + omega1 * (gs - u[size_t(i)]);
      if (next > obs[size_t(i)]) next = obs[size_t(i)];
      change = std::max(change, std::fabs(next - u[size_t(i)]));
      u[size_t(i)] = next;
    }
    if (change < 1e-13) break;
  }
  double sup1d = 0;
  for (int l = 0; l < N; ++l)
    sup1d = std::max(sup1d, std::fabs(env.envelope(0, l) - u[size_t(l) * (n1 / N)]));

  const double lhs = mixed_energy(env.envelope, f, 1);
  ScalarField w = f;
  for (int i = 0; i < N * N; ++i) w.v[size_t(i)] -= env.envelope.v[size_t(i)];
  const double rhs_e = 0.5 * dirichlet_norm(w);
  const double erel = std::fabs(lhs - rhs_e) / std::fabs(rhs_e);

  const double R = tunneling_target(f, env);
  std::printf("  converged=%d sweeps=%ld\n", int(env.converged), env.iterations);
  std::printf("  feasibility=%.3e complementarity=%.3e curvature=%.3e orthogonality=%.3e\n",
              feas, env.residual, env.curvature_residual, orth);
  std::printf("  sup vs 1-D oracle = %.3e   energy identity rel = %.3e\n", sup1d, erel);
  std::printf("  R = %.9f  (closed form %.9f, diff %.2e)\n", R, closed_form_rate(),
              std::fabs(R - closed_form_rate()));
  const bool ok = env.converged && feas <= 1e-8 && env.residual <= 1e-8 &&
                  env.curvature_residual <= 1e-8 && orth <= 1e-8 && sup1d <= 1e-4 &&
                  erel <= 1e-6;
  return verdict(4, ok,
                 fmt("(residuals <= 1e-8, 1-D oracle sup %.2e <= 1e-4, energy identity %.2e "
                     "<= 1e-6)",
                     sup1d, erel));
}

// -------------------------------------------------------------------------
// criterion 5: window counts and one-point density against the closed-form
// constant int max(pi cos 2 pi y - 1, 0) dy = 0.5511...
bool criterion5() {
  const double target_const = morse_constant();
  std::printf("  count oracle constant = %.6f\n", target_const);
  bool count_ok = true, density_ok = true;
  for (int k : {16, 24, 32}) {
    const int N = grid_rule(k);
    const ScalarField f = cos_field(N);
    const DbarOperator op = build_dbar(LineBundleModel(TorusGrid(N), k, 1, f));
    const SpectrumResult sp = eigensolve_dense(op, 1, true);
    const ThresholdPartition part = partition_small(sp, k, 1, 0.25);
    const int count = part.small_end - part.small_begin;
    const double ratio = count / double(k);
    const std::vector<double> rho = one_point_density(sp, part.small_begin, part.small_end);
    const ScalarField beta = curvature_density(f, 1);
    double l1 = 0, mass = 0;
    const double h2 = 1.0 / (N * double(N));
    for (int i = 0; i < N * N; ++i) {
      const double t = std::max(-beta.v[size_t(i)], 0.0);
      l1 += h2 * std::fabs(rho[size_t(i)] / k - t);
      mass += h2 * t;
    }
    const double cdev = ratio / target_const - 1.0;
    std::printf("  k=%2d N=%2d count=%3d count/k=%.4f (dev %+.1f%% vs 10%%)  density L1 "
                "%.3f of target mass (vs 15%%)\n",
                k, N, count, ratio, 100 * cdev, l1 / mass);
    count_ok = count_ok && std::fabs(cdev) <= 0.10;
    density_ok = density_ok && l1 / mass <= 0.15;
  }
  return verdict(5, count_ok && density_ok,
                 std::string("(counts ") + (count_ok ? "within" : "outside") +
                     " 10% of 0.5511*k; density " + (density_ok ? "within" : "outside") +
                     " 15% grid-L1)");
}

// -------------------------------------------------------------------------
// criterion 6: (1/k^2) log-product of window eigenvalues extrapolates in 1/k
// to -R within 15% with r^2 >= 0.9, stable to 2% between epsilon 0.2 and 0.3
bool criterion6() {
  const ScalarField f256 = cos_field(256);
  const EnvelopeResult env256 = project_envelope(f256, 1);
  const double R = tunneling_target(f256, env256);
  std::printf("  R (N=256) = %.9f, closed form %.9f\n", R, closed_form_rate());

  std::vector<std::pair<int, double>> s25, s20, s30;
  for (int k : {8, 12, 16, 24, 32}) {
    const int N = 4 * k;  // proportional resolution keeps the per-state
                          // discretization error inside the fitted 1/k term
    const DbarOperator op = build_dbar(cos_model(N, k));
    const SpectrumResult sp = eigensolve_window(op, 1, std::pow(double(k), 0.8), false);
    const double k2 = double(k) * k;
    const ThresholdPartition p25 = partition_small(sp, k, 1, 0.25);
    const ThresholdPartition p20 = partition_small(sp, k, 1, 0.2);
    const ThresholdPartition p30 = partition_small(sp, k, 1, 0.3);
    s25.emplace_back(k, truncated_torsion(sp, p25) / k2);
    s20.emplace_back(k, truncated_torsion(sp, p20) / k2);
    s30.emplace_back(k, truncated_torsion(sp, p30) / k2);
    std::printf("  k=%2d N=%3d count=%2d logsum/k2=%.6f\n", k, N,
                p25.small_end - p25.small_begin, s25.back().second);
  }
  const FitResult f25 = fit_rate(s25), f20 = fit_rate(s20), f30 = fit_rate(s30);
  const double dev = std::fabs(f25.intercept - (-R)) / R;
  const double spread = std::fabs(f20.intercept - f30.intercept) / std::fabs(f25.intercept);
  std::printf("  fit: intercept=%.6f slope=%.4f r2=%.4f\n", f25.intercept, f25.slope, f25.r2);
  std::printf("  target -R=%.6f  deviation %.1f%% (vs 15%%)  [-2R=%.6f sits %.1f%% away]\n",
              -R, 100 * dev, -2 * R, 100 * std::fabs(f25.intercept + 2 * R) / (2 * R));
  std::printf("  epsilon stability: a(0.2)=%.6f a(0.3)=%.6f spread %.2f%% (vs 2%%)\n",
              f20.intercept, f30.intercept, 100 * spread);
  const bool ok = dev <= 0.15 && f25.r2 >= 0.9 && spread <= 0.02;
  return verdict(6, ok,
                 fmt("(intercept %.4f vs -R %.4f: %.1f%% off; r2=%.3f)", f25.intercept, -R,
                     100 * dev, f25.r2));
}

// -------------------------------------------------------------------------
// criterion 7: central-difference derivative checks at k = 12. The mixed
// energy is a quadratic polynomial along a linear path, so its central
// difference is exact at every step and the residual sits at rounding noise;
// the torsion check carries a genuine O(dt^2) error whose Richardson ratio
// must land in [3.5, 4.5].
bool criterion7() {
  const int N = 42, k = 12;
  WeightPath path;
  path.base = flat_field(N);
  path.direction = cos_field(N);

  bool energy_ok = true;
  double energy_err = 0;
  for (double dt : {0.01, 0.005}) {
    const DerivativeCheck c = energy_derivative_check(path, 0.3, dt, 1);
    const double err = std::fabs(c.numeric - c.predicted);
    std::printf("  energy dt=%.3f  numeric=%.12f predicted=%.12f err=%.3e\n", dt, c.numeric,
                c.predicted, err);
    energy_err = std::max(energy_err, err);
    energy_ok = energy_ok && err <= 1e-10 * std::max(1.0, std::fabs(c.predicted));
  }
  std::printf("  energy central difference is exact to rounding at every dt (quadratic "
              "functional); O(dt^2) bound holds with constant 0\n");

  double errs[2];
  int i = 0;
  for (double dt : {0.0025, 0.00125}) {
    const TorsionDerivative td =
        torsion_derivative_check(path.base, path.direction, k, 1, 1.0, dt, 0.25);
    errs[i++] = std::fabs(td.numeric - td.predicted);
    std::printf("  torsion dt=%.5f numeric=%.10f predicted=%.10f err=%.3e\n", dt, td.numeric,
                td.predicted, errs[i - 1]);
  }
  const double ratio = errs[0] / errs[1];
  std::printf("  torsion Richardson ratio = %.3f (target [3.5, 4.5])\n", ratio);
  const bool ok = energy_ok && ratio >= 3.5 && ratio <= 4.5;
  return verdict(7, ok,
                 fmt("(energy exact to %.1e; torsion ratio %.2f in [3.5,4.5])", energy_err,
                     ratio));
}

// -------------------------------------------------------------------------
// criterion 8: the anomaly per k^2 extrapolates to the energy scale with the
// sign fixed by a small dense run, and the Gram cocycle telescopes exactly
bool criterion8() {
  const double target = kPi / 4.0;  // |E(f,0)| for the unit cosine
  std::vector<std::pair<int, double>> samples;
  const int ks[4] = {8, 12, 16, 24};
  const int ns[4] = {96, 112, 128, 160};
  for (int i = 0; i < 4; ++i) {
    const int k = ks[i], N = ns[i];
    const QuillenParts qp = quillen_anomaly(cos_model(N, k), flat_model(N, k), 0.25);
    samples.emplace_back(k, qp.anomaly / (double(k) * k));
    std::printf("  k=%2d N=%3d anomaly/k2=%.6f (windows %d/%d)\n", k, N, samples.back().second,
                qp.window_f, qp.window_g);
  }
  const FitResult fit = fit_rate(samples);
  const double dev = std::fabs(std::fabs(fit.intercept) - target) / target;
  std::printf("  fit intercept=%.6f r2=%.4f  |intercept| vs pi/4=%.6f: %.1f%% (vs 15%%)\n",
              fit.intercept, fit.r2, target, 100 * dev);

  const QuillenParts dense8 = quillen_anomaly(cos_model(34, 8), flat_model(34, 8), 0.25,
                                              SolveRoute::kDense);
  const bool sign_ok = (dense8.anomaly < 0) == (fit.intercept < 0);
  std::printf("  sign pin: dense k=8 anomaly=%.4f, fit intercept %.4f -> %s\n", dense8.anomaly,
              fit.intercept, sign_ok ? "consistent" : "INCONSISTENT");

  const int N = 34, k = 8;
  const LineBundleModel flat = flat_model(N, k);
  const std::vector<std::vector<cdouble>> basis = reference_kernel_basis(flat);
  ProfileSpec bump;
  bump.name = "bump";
  bump.A = 0.4;
  const LineBundleModel mw(TorusGrid(N), k, 1, build_profile(bump, N));
  const LineBundleModel mf = cos_model(N, k);
  const double cocycle = l_functional(basis, mf, mw) + l_functional(basis, mw, flat) +
                         l_functional(basis, flat, mf);
  std::printf("  gram cocycle residual = %.3e (vs 1e-10)\n", std::fabs(cocycle));

  const bool ok = dev <= 0.15 && sign_ok && std::fabs(cocycle) <= 1e-10;
  return verdict(8, ok,
                 fmt("(|intercept| %.4f within %.1f%% of pi/4; sign pinned; cocycle %.1e)",
                     std::fabs(fit.intercept), 100 * dev, std::fabs(cocycle)));
}

// -------------------------------------------------------------------------
// criterion 9: Rayleigh quotients of the localized trial sections decay as
// exp(-c k) with c > 0 and r^2 >= 0.95
bool criterion9() {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<std::pair<double, double>> pts;
  for (int k : {8, 12, 16, 20, 24, 28, 32}) {
    const int N = 4 * k;
    const QuasimodeResult qr = quasimode_quotient(flat_model(N, k), 0.5, 0.5, 0.4);
    std::printf("  k=%2d N=%3d quotient=%.6e mass=%.4f\n", k, N, qr.quotient, qr.mass);
    pts.emplace_back(double(k), std::log(qr.quotient));
  }
  const double n = double(pts.size());
  for (auto& p : pts) {
    sx += p.first;
    sy += p.second;
    sxx += p.first * p.first;
    sxy += p.first * p.second;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icept = (sy - slope * sx) / n;
  double ss = 0, st = 0;
  for (auto& p : pts) {
    const double e = p.second - (icept + slope * p.first);
    const double d = p.second - sy / n;
    ss += e * e;
    st += d * d;
  }
  const double r2 = 1.0 - ss / st;
  std::printf("  fit log(quotient) = %.4f - %.6f k   r2 = %.6f\n", icept, -slope, r2);
  const bool ok = slope < 0 && r2 >= 0.95;
  return verdict(9, ok, fmt("(decay rate c=%.4f > 0, r2=%.4f >= 0.95)", -slope, r2));
}

// -------------------------------------------------------------------------
// criterion 10: repeated sweeps are byte identical and the manifest records
// the tolerances
bool criterion10() {
  const fs::path base = fs::temp_directory_path() / "tunnellab_acceptance_10";
  fs::remove_all(base);
  RunConfig cfg;
  cfg.k = {2, 3};
  cfg.N = {12, 14};
  cfg.solver = "dense";
  cfg.threads = 1;
  cfg.write_density = true;
  cfg.out_dir = (base / "a").string();
  const SweepResult ra = run_sweep(cfg);
  cfg.out_dir = (base / "b").string();
  const SweepResult rb = run_sweep(cfg);

  bool ok = ra.files == rb.files && ra.errors.empty() && rb.errors.empty();
  int compared = 0;
  for (const std::string& name : ra.files) {
    std::ifstream ia(base / "a" / name, std::ios::binary);
    std::ifstream ib(base / "b" / name, std::ios::binary);
    std::ostringstream sa, sb;
    sa << ia.rdbuf();
    sb << ib.rdbuf();
    if (sa.str() != sb.str()) {
      std::printf("  MISMATCH in %s\n", name.c_str());
      ok = false;
    }
    ++compared;
  }
  std::printf("  %d files byte-compared across two runs\n", compared);
  for (const char* key : {"envelope_tol", "envelope_omega", "envelope_max_sweeps",
                          "residual_tol", "dense_ceiling", "shift"}) {
    if (ra.manifest.find(std::string("\"") + key + "\"") == std::string::npos) {
      std::printf("  manifest missing tolerance %s\n", key);
      ok = false;
    }
  }
  fs::remove_all(base);
  return verdict(10, ok, "(" + std::to_string(compared) +
                             " files byte-identical; manifest records tolerances)");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <criterion 1..10>\n", argv[0]);
    return 2;
  }
  const int n = std::atoi(argv[1]);
  Timer timer;
  bool pass = false;
  try {
    switch (n) {
      case 1: pass = criterion1(); break;
      case 2: pass = criterion2(); break;
      case 3: pass = criterion3(); break;
      case 4: pass = criterion4(); break;
      case 5: pass = criterion5(); break;
      case 6: pass = criterion6(); break;
      case 7: pass = criterion7(); break;
      case 8: pass = criterion8(); break;
      case 9: pass = criterion9(); break;
      case 10: pass = criterion10(); break;
      default:
        std::fprintf(stderr, "usage: %s <criterion 1..10>\n", argv[0]);
        return 2;
    }
  } catch (const std::exception& e) {
    std::printf("criterion %d: FAIL (exception: %s)\n", n, e.what());
    std::printf("  elapsed %.1f s\n", timer.seconds());
    return 1;
  }
  std::printf("  elapsed %.1f s\n", timer.seconds());
  return pass ? 0 : 1;
}
