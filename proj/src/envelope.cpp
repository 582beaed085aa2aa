#include "tunnellab/envelope.hpp"

#include <cmath>
#include <algorithm>

namespace tunnel {

namespace {

// the three certificates, measured directly on the current iterate
struct Residuals {
  double feas, curv, comp;
};

Residuals measure(const ScalarField& u, const ScalarField& f, int d) {
  const int N = u.N();
  const double ih2 = double(N) * double(N);
  const double c4pi = 1.0 / (4.0 * M_PI);
  Residuals r{0, 0, 0};
  for (int j = 0; j < N; ++j) {
    const int jm = (j + N - 1) % N, jp = (j + 1) % N;
    for (int l = 0; l < N; ++l) {
      const int lm = (l + N - 1) % N, lp = (l + 1) % N;
      const double lap = (u.v[jp * N + l] + u.v[jm * N + l] + u.v[j * N + lp] + u.v[j * N + lm] -
                          4.0 * u.v[j * N + l]) * ih2;
      const double beta = d + c4pi * lap;
      const double slack = f.v[j * N + l] - u.v[j * N + l];
      r.feas = std::max(r.feas, -slack);
      r.curv = std::max(r.curv, -beta);
      r.comp = std::max(r.comp, slack * beta);  // both factors >= 0 near the solution
    }
  }
  return r;
}

}  // namespace

EnvelopeResult project_envelope(const ScalarField& f, int d, double tol, double omega_relax,
                                long max_sweeps) {
  if (d < 1) throw std::invalid_argument("project_envelope: d must be >= 1");
  if (!(tol > 0)) throw std::invalid_argument("project_envelope: tol must be positive");
  if (!(omega_relax >= 1.0 && omega_relax < 2.0))
    throw std::invalid_argument("project_envelope: omega_relax must lie in [1,2)");
  f.check_finite("project_envelope");

  const int N = f.N();
  const double h2 = f.grid.h * f.grid.h;
  const double rhs = 4.0 * M_PI * d * h2;  // lap u >= -4 pi d  <=>  neighbor sum - 4u >= -rhs*?
  EnvelopeResult res;
  res.envelope = f;  // u0 = f

  // admissible obstacle: nothing to do, contact everywhere
  {
    Residuals r0 = measure(res.envelope, f, d);
    if (r0.curv <= tol) {
      res.contact.assign(size_t(N) * N, 1);
      res.residual = 0;
      res.curvature_residual = std::max(r0.curv, 0.0);
      res.converged = true;
      return res;
    }
  }

  ScalarField& u = res.envelope;
  long sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    double change = 0.0;
    for (int j = 0; j < N; ++j) {
      const int jm = (j + N - 1) % N, jp = (j + 1) % N;
      for (int l = 0; l < N; ++l) {
        const int lm = (l + N - 1) % N, lp = (l + 1) % N;
        const double nb = u.v[jp * N + l] + u.v[jm * N + l] + u.v[j * N + lp] + u.v[j * N + lm];
        const double gs = 0.25 * (nb + rhs);  // pointwise solve of lap u = -4 pi d
        const double cand = (1.0 - omega_relax) * u.v[j * N + l] + omega_relax * gs;
        const double unew = std::min(f.v[j * N + l], cand);
        change = std::max(change, std::abs(unew - u.v[j * N + l]));
        u.v[j * N + l] = unew;
      }
    }
    Residuals r = measure(u, f, d);
    if (change < tol && r.curv < tol && r.comp < tol) {
      res.residual = r.comp;
      res.curvature_residual = std::max(r.curv, 0.0);
      res.converged = true;
      ++sweep;
      break;
    }
  }
  res.iterations = sweep;
  if (!res.converged) {
    Residuals r = measure(u, f, d);
    res.residual = r.comp;
    res.curvature_residual = std::max(r.curv, 0.0);
  }

  const double contact_tol = 100.0 * tol;
  res.contact.assign(size_t(N) * N, 0);
  for (int i = 0; i < N * N; ++i)
    if (f.v[i] - u.v[i] <= contact_tol) res.contact[i] = 1;
  return res;
}

double orthogonality_residual(const ScalarField& f, const EnvelopeResult& result, int d) {
  if (!result.converged) throw std::invalid_argument("orthogonality_residual: envelope not converged");
  ScalarField beta = curvature_density(result.envelope, d);
  double s = 0.0;
  for (size_t i = 0; i < beta.v.size(); ++i) s += (result.envelope.v[i] - f.v[i]) * beta.v[i];
  return std::abs(s * f.grid.h * f.grid.h);
}

}  // namespace tunnel
