#include "tunnellab/torsion.hpp"

#include "tunnellab/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <lapacke.h>

namespace tunnel {

namespace {

constexpr double kPi = 3.14159265358979323846;

SpectrumResult solve_window_route(const DbarOperator& op, int q, double thr,
                                  bool want_vectors, SolveRoute route,
                                  const SolverOptions& opts) {
  switch (route) {
    case SolveRoute::kDense:
      return eigensolve_dense(op, q, want_vectors, opts);
    case SolveRoute::kIterative:
    case SolveRoute::kAuto:
      return eigensolve_window(op, q, thr, want_vectors, opts);
  }
  throw std::invalid_argument("unknown solver route");
}

}  // namespace

double truncated_torsion(const SpectrumResult& spec, const ThresholdPartition& part) {
  if (part.small_end <= part.small_begin) return 0.0;  // empty product
  return logsum_small(spec, part);
}

double gram_log_det(const std::vector<std::vector<cdouble>>& basis,
                    const LineBundleModel& model) {
  const int m = static_cast<int>(basis.size());
  if (m < 1) throw std::invalid_argument("gram determinant of an empty basis");
  const int n = model.grid.size();
  for (const auto& psi : basis)
    if (static_cast<int>(psi.size()) != n)
      throw std::invalid_argument("basis vector length does not match the model grid");

  const double h2 = model.grid.h * model.grid.h;
  std::vector<double> weight(n);
  for (int a = 0; a < n; ++a) weight[a] = std::exp(-model.k * model.f.v[a]);

  // G spans e^{O(k)} orders of magnitude; factor the correlation matrix
  // C = D^{-1/2} G D^{-1/2} instead and add the diagonal back in logs
  std::vector<cdouble> gram(static_cast<size_t>(m) * m);
  std::vector<double> diag(m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      cdouble s(0.0, 0.0);
      for (int a = 0; a < n; ++a) s += std::conj(basis[i][a]) * basis[j][a] * weight[a];
      s *= h2;
      gram[static_cast<size_t>(i) * m + j] = s;
      gram[static_cast<size_t>(j) * m + i] = std::conj(s);
    }
    diag[i] = gram[static_cast<size_t>(i) * m + i].real();
    if (!(diag[i] > 0.0))
      throw std::domain_error("gram diagonal entry " + std::to_string(i) + " is not positive");
  }

  std::vector<cdouble> corr(static_cast<size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      corr[static_cast<size_t>(i) * m + j] =
          gram[static_cast<size_t>(i) * m + j] / std::sqrt(diag[i] * diag[j]);

  const int info = LAPACKE_zpotrf(LAPACK_COL_MAJOR, 'L', m,
                                  reinterpret_cast<lapack_complex_double*>(corr.data()), m);
  if (info != 0)
    throw std::domain_error("gram matrix not positive definite under this weight (zpotrf info=" +
                             std::to_string(info) + ")");

  double logdet = 0.0;
  for (int i = 0; i < m; ++i)
    logdet += std::log(diag[i]) + 2.0 * std::log(corr[static_cast<size_t>(i) * m + i].real());
  return logdet;
}

double l_functional(const std::vector<std::vector<cdouble>>& basis,
                    const LineBundleModel& model_f, const LineBundleModel& model_g) {
  if (!(model_f.grid == model_g.grid) || model_f.k != model_g.k || model_f.d != model_g.d)
    throw std::invalid_argument("weight comparison requires one bundle, two weights");
  return -gram_log_det(basis, model_f) + gram_log_det(basis, model_g);
}

QuillenParts quillen_anomaly(const LineBundleModel& model_f, const LineBundleModel& model_g,
                             double epsilon, SolveRoute route, const SolverOptions& opts) {
  if (!(model_f.grid == model_g.grid) || model_f.k != model_g.k || model_f.d != model_g.d)
    throw std::invalid_argument("anomaly requires one bundle, two weights");
  const int k = model_f.k;
  const double thr = std::pow(static_cast<double>(k), 1.0 - epsilon);

  const LineBundleModel flat(model_f.grid, k, model_f.d, ScalarField(model_f.grid));
  const std::vector<std::vector<cdouble>> basis = reference_kernel_basis(flat);

  QuillenParts parts;
  parts.gram_f = gram_log_det(basis, model_f);
  parts.gram_g = gram_log_det(basis, model_g);

  const DbarOperator op_f = build_dbar(model_f);
  const SpectrumResult spec_f = solve_window_route(op_f, 1, thr, false, route, opts);
  const ThresholdPartition part_f = partition_small(spec_f, k, model_f.d, epsilon);
  parts.torsion_f = truncated_torsion(spec_f, part_f);
  parts.window_f = part_f.small_end - part_f.small_begin;

  const DbarOperator op_g = build_dbar(model_g);
  const SpectrumResult spec_g = solve_window_route(op_g, 1, thr, false, route, opts);
  const ThresholdPartition part_g = partition_small(spec_g, k, model_g.d, epsilon);
  parts.torsion_g = truncated_torsion(spec_g, part_g);
  parts.window_g = part_g.small_end - part_g.small_begin;

  parts.anomaly = (parts.torsion_f - parts.gram_f) - (parts.torsion_g - parts.gram_g);
  return parts;
}

TorsionDerivative torsion_derivative_check(const ScalarField& base, const ScalarField& dir,
                                           int k, int d, double t, double dt, double epsilon,
                                           const SolverOptions& opts) {
  if (!(base.grid == dir.grid)) throw std::invalid_argument("base and direction grids differ");
  if (!(dt > 0.0)) throw std::invalid_argument("stencil dt must be positive");
  const double thr = std::pow(static_cast<double>(k), 1.0 - epsilon);
  double vinf = 0.0;
  for (double x : dir.v) vinf = std::max(vinf, std::abs(x));
  // |d ln lambda / dt| <= 2 k ||dir||_inf, so over +-dt a near-threshold
  // eigenvalue multiplies by at most e^{2 k ||dir||_inf dt}; demand 1.5x the
  // worst-case drift as clearance
  const double margin = 1.5 * thr * std::expm1(2.0 * k * vinf * dt);

  auto field_at = [&](double s) {
    ScalarField f = base;
    for (int a = 0; a < f.grid.size(); ++a) f.v[a] += s * dir.v[a];
    return f;
  };

  auto window_spec = [&](double s, int q, bool vecs) {
    const LineBundleModel model(base.grid, k, d, field_at(s));
    const DbarOperator op = build_dbar(model);
    return eigensolve_window(op, q, thr, vecs, opts);
  };

  double tau[2];
  const double ends[2] = {t - dt, t + dt};
  for (int e = 0; e < 2; ++e) {
    const SpectrumResult spec = window_spec(ends[e], 1, false);
    for (size_t i = k * static_cast<size_t>(d); i < spec.eigenvalues.size(); ++i)
      if (std::abs(spec.eigenvalues[i] - thr) < margin)
        throw std::domain_error("derivative stencil rejected: eigenvalue " +
                                 std::to_string(spec.eigenvalues[i]) + " at t=" +
                                 std::to_string(ends[e]) + " sits within " +
                                 std::to_string(margin) + " of the threshold " +
                                 std::to_string(thr));
    tau[e] = truncated_torsion(spec, partition_small(spec, k, d, epsilon));
  }

  const SpectrumResult spec0 = window_spec(t, 0, true);
  const SpectrumResult spec1 = window_spec(t, 1, true);
  const ThresholdPartition part0 = partition_small(spec0, k, d, epsilon);
  const ThresholdPartition part1 = partition_small(spec1, k, d, epsilon);
  if (part0.small_end - part0.small_begin != part1.small_end - part1.small_begin)
    throw std::domain_error("q=0 and q=1 windows disagree at the center point; configuration too close to the threshold");

  const std::vector<double> rho0 = one_point_density(spec0, part0.small_begin, part0.small_end);
  const std::vector<double> rho1 = one_point_density(spec1, part1.small_begin, part1.small_end);
  const double h2 = base.grid.h * base.grid.h;
  double pred = 0.0;
  for (int a = 0; a < base.grid.size(); ++a) pred += dir.v[a] * (rho0[a] - rho1[a]);
  pred *= k * h2;

  TorsionDerivative out;
  out.numeric = (tau[1] - tau[0]) / (2.0 * dt);
  out.predicted = pred;
  return out;
}

QuasimodeResult quasimode_quotient(const LineBundleModel& model, double x0, double y0,
                                   double width) {
  if (!(width > 0.0 && width <= 0.45))
    throw std::invalid_argument("quasimode width must lie in (0, 0.45]");
  const int N = model.grid.N;
  const double h = model.grid.h;
  x0 -= std::floor(x0);
  y0 -= std::floor(y0);
  // the trial phase is smooth only in the bulk gauge patch; keep the support
  // away from the twist column at x = 0
  if (std::min(x0, 1.0 - x0) <= width)
    throw std::invalid_argument("quasimode support crosses the gauge seam at x=0; move the center");

  // second order stencils for the local jet of f at the center site
  const int jc = static_cast<int>(std::lround(x0 * N)) % N;
  const int lc = static_cast<int>(std::lround(y0 * N)) % N;
  const ScalarField& f = model.f;
  auto F = [&](int j, int l) { return f(j, l); };
  const double fx = (F(jc + 1, lc) - F(jc - 1, lc)) / (2.0 * h);
  const double fy = (F(jc, lc + 1) - F(jc, lc - 1)) / (2.0 * h);
  const double fxx = (F(jc + 1, lc) - 2.0 * F(jc, lc) + F(jc - 1, lc)) / (h * h);
  const double fyy = (F(jc, lc + 1) - 2.0 * F(jc, lc) + F(jc, lc - 1)) / (h * h);
  const double fxy = (F(jc + 1, lc + 1) - F(jc + 1, lc - 1) - F(jc - 1, lc + 1) +
                      F(jc - 1, lc - 1)) / (4.0 * h * h);

  const double d = model.d;
  const double beta0 = d + (fxx + fyy) / (4.0 * kPi);
  if (!(beta0 > 0.0))
    throw std::domain_error("quasimode center has nonpositive curvature density");

  const ScalarField beta = curvature_density(f, model.d);

  // local WKB solution of (d_x + i d_y + 2 pi k d x + (k/2)(f_x + i f_y)) a = 0
  // with isotropic Gaussian modulus exp(-pi k beta0 |dz|^2 / 2); the quadratic
  // phase is forced by the jet of f, the linear phase by the gauge at x0
  const int k = model.k;
  const cdouble c1(0.0, 0.5 * fy);
  const cdouble c2(0.0, -2.0 * kPi * d * x0 - 0.5 * fx);
  const cdouble q11(kPi * beta0, 0.5 * fxy);
  const cdouble q22(kPi * beta0, -0.5 * fxy);
  const cdouble q12(0.0, -kPi * d + 0.25 * (fyy - fxx));

  const int n = model.grid.size();
  std::vector<cdouble> gauss(n, cdouble(0.0, 0.0));
  int bad_beta = 0;
  for (int j = 0; j < N; ++j) {
    double dx = j * h - x0;
    dx -= std::round(dx);
    for (int l = 0; l < N; ++l) {
      double dy = l * h - y0;
      dy -= std::round(dy);
      if (dx * dx + dy * dy < width * width && !(beta.v[j * N + l] > 0.0)) ++bad_beta;
      const cdouble S = static_cast<double>(k) *
          (c1 * dx + c2 * dy + 0.5 * q11 * dx * dx + q12 * dx * dy + 0.5 * q22 * dy * dy);
      gauss[j * N + l] = std::exp(-S);
    }
  }
  if (bad_beta > 0)
    throw std::domain_error("quasimode support touches " + std::to_string(bad_beta) +
                                " sites with nonpositive curvature density; shrink the width");

  // Sampling the continuum Gaussian leaves an O(h) operator mismatch that
  // would swamp the cutoff-ring signal, so project onto the numerically
  // exact kernel band first. The cutoff commutator is then the only
  // residual, and it lives where the profile is exponentially small.
  const DbarOperator op = build_dbar(model);
  const int m = static_cast<int>(model.flux());
  SolverOptions kopts;
  kopts.residual_tol = 1e-12;
  const SpectrumResult ker = eigensolve_lowest(op, 0, m + std::max(4, m / 4), true, kopts);
  if (!(ker.eigenvalues[m] > 10.0 * std::max(std::abs(ker.eigenvalues[m - 1]), 1e-300)))
    throw std::domain_error(
        "kernel band not separated above the flux count; cannot project the quasimode");

  const double h2 = h * h;
  std::vector<cdouble> proj(n, cdouble(0.0, 0.0));
  for (int r = 0; r < m; ++r) {
    const std::vector<cdouble>& psi = ker.vectors[r];
    cdouble coeff(0.0, 0.0);
    for (int a = 0; a < n; ++a) coeff += std::conj(psi[a]) * gauss[a];
    coeff *= h2;
    for (int a = 0; a < n; ++a) proj[a] += coeff * psi[a];
  }

  // C^2 plateau cutoff: identically one on the inner half disk, quintic
  // roll-off on [width/2, width]
  std::vector<cdouble> trial(n, cdouble(0.0, 0.0));
  for (int j = 0; j < N; ++j) {
    double dx = j * h - x0;
    dx -= std::round(dx);
    for (int l = 0; l < N; ++l) {
      double dy = l * h - y0;
      dy -= std::round(dy);
      const double rho = std::sqrt(dx * dx + dy * dy) / width;
      if (rho >= 1.0) continue;
      double chi = 1.0;
      if (rho > 0.5) {
        const double t = 2.0 * (rho - 0.5);
        chi = 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
      }
      trial[j * N + l] = chi * proj[j * N + l];
    }
  }

  std::vector<cdouble> image(n);
  op.apply(trial.data(), image.data());
  double na = 0.0, ni = 0.0;
  for (int a = 0; a < n; ++a) {
    na += std::norm(trial[a]);
    ni += std::norm(image[a]);
  }
  if (!(na > 1e-12 * static_cast<double>(n)))
    throw std::domain_error("quasimode kernel projection degenerate; widen the cutoff");

  QuasimodeResult out;
  out.quotient = ni / na;
  out.mass = h2 * na;
  return out;
}

}  // namespace tunnel
