#include "tunnellab/grid.hpp"

#include <cmath>

namespace tunnel {

TorusGrid::TorusGrid(int n) : N(n), h(1.0 / n) {
  if (n < 4) throw std::invalid_argument("TorusGrid: N must be >= 4");
}

void ScalarField::check_finite(const char* who) const {
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(who) + ": field has non-finite entry");
}

ScalarField laplacian5(const ScalarField& u) {
  const int N = u.N();
  const double ih2 = double(N) * double(N);  // 1/h^2
  ScalarField r(u.grid);
  for (int j = 0; j < N; ++j) {
    const int jm = (j + N - 1) % N, jp = (j + 1) % N;
    for (int l = 0; l < N; ++l) {
      const int lm = (l + N - 1) % N, lp = (l + 1) % N;
      r.v[j * N + l] = (u.v[jp * N + l] + u.v[jm * N + l] + u.v[j * N + lp] + u.v[j * N + lm] -
                        4.0 * u.v[j * N + l]) * ih2;
    }
  }
  return r;
}

ScalarField curvature_density(const ScalarField& f, int d) {
  if (d < 1) throw std::invalid_argument("curvature_density: d must be >= 1");
  ScalarField b = laplacian5(f);
  const double c = 1.0 / (4.0 * M_PI);
  for (double& x : b.v) x = d + c * x;
  return b;
}

double dirichlet_norm(const ScalarField& u) {
  const int N = u.N();
  double s = 0.0;
  for (int j = 0; j < N; ++j) {
    const int jp = (j + 1) % N;
    for (int l = 0; l < N; ++l) {
      const int lp = (l + 1) % N;
      const double dx = u.v[jp * N + l] - u.v[j * N + l];
      const double dy = u.v[j * N + lp] - u.v[j * N + l];
      s += dx * dx + dy * dy;
    }
  }
  // h^2 * sum((diff/h)^2) = sum(diff^2); only the 1/4pi normalization remains
  return s / (4.0 * M_PI);
}

double integrate(const ScalarField& u) {
  double s = 0.0;
  for (double x : u.v) s += x;
  return s * u.grid.h * u.grid.h;
}

double inner(const ScalarField& u, const ScalarField& w) {
  if (!(u.grid == w.grid)) throw std::invalid_argument("inner: grid mismatch");
  double s = 0.0;
  for (size_t i = 0; i < u.v.size(); ++i) s += u.v[i] * w.v[i];
  return s * u.grid.h * u.grid.h;
}

double stencil_constant(int N) {
  const double th = 2.0 * M_PI / N;
  return (2.0 - 2.0 * std::cos(th)) / (th * th);
}

}  // namespace tunnel
