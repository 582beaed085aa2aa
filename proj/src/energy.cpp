#include "tunnellab/energy.hpp"

#include <cmath>

namespace tunnel {

double mixed_energy(const ScalarField& f, const ScalarField& g, int d) {
  if (!(f.grid == g.grid)) throw std::invalid_argument("mixed_energy: grid mismatch");
  if (d < 1) throw std::invalid_argument("mixed_energy: d must be >= 1");
  ScalarField lf = laplacian5(f), lg = laplacian5(g);
  const double c = 1.0 / (4.0 * M_PI);
  double s = 0.0;
  for (size_t i = 0; i < f.v.size(); ++i)
    s += (f.v[i] - g.v[i]) * (2.0 * d + c * (lf.v[i] + lg.v[i]));
  return 0.5 * s * f.grid.h * f.grid.h;
}

DerivativeCheck energy_derivative_check(const WeightPath& path, double t, double dt, int d) {
  if (!(dt > 0)) throw std::invalid_argument("energy_derivative_check: dt must be positive");
  if (!(path.base.grid == path.direction.grid))
    throw std::invalid_argument("energy_derivative_check: grid mismatch");
  const TorusGrid& g = path.base.grid;
  auto at = [&](double s) {
    ScalarField f(g);
    for (size_t i = 0; i < f.v.size(); ++i) f.v[i] = path.base.v[i] + s * path.direction.v[i];
    return f;
  };
  DerivativeCheck out;
  out.numeric = (mixed_energy(at(t + dt), path.base, d) - mixed_energy(at(t - dt), path.base, d)) /
                (2.0 * dt);
  ScalarField beta = curvature_density(at(t), d);
  out.predicted = inner(beta, path.direction);
  return out;
}

double tunneling_target(const ScalarField& f, const EnvelopeResult& envelope) {
  if (!envelope.converged) throw std::invalid_argument("tunneling_target: envelope not converged");
  ScalarField diff(f.grid);
  for (size_t i = 0; i < f.v.size(); ++i) diff.v[i] = f.v[i] - envelope.envelope.v[i];
  return 0.5 * dirichlet_norm(diff);
}

}  // namespace tunnel
