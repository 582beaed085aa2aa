#pragma once
// Mixed energy bi-functional and the tunneling-rate target.
//   E(f,g) = 1/2 h^2 sum (f-g) * (2d + (lap f + lap g)/(4pi))
// Antisymmetry E(f,g) = -E(g,f) and the cocycle E(f,g)+E(g,w)+E(w,f) = 0
// hold to round-off because the formula is exactly antisymmetric after
// summation by parts. E is a quadratic polynomial in t along f0 + t*v, so
// central differences of it are exact to rounding at any step size.

#include "tunnellab/grid.hpp"
#include "tunnellab/envelope.hpp"

namespace tunnel {

struct WeightPath {
  ScalarField base;       // f0
  ScalarField direction;  // v; path f_t = f0 + t*v
};

double mixed_energy(const ScalarField& f, const ScalarField& g, int d);

struct DerivativeCheck {
  double numeric = 0;    // central difference (E(f_{t+dt},f0) - E(f_{t-dt},f0)) / (2 dt)
  double predicted = 0;  // h^2 sum beta(f_t) * v
};

DerivativeCheck energy_derivative_check(const WeightPath& path, double t, double dt, int d);

// R = 1/2 dirichlet_norm(f - Pf); the predicted limit of the normalized
// log-sum of small eigenvalues is -R
double tunneling_target(const ScalarField& f, const EnvelopeResult& envelope);

}  // namespace tunnel
