#pragma once
// Flat unit-square torus grid (modular parameter i, area 1) and real scalar
// fields on it. All discrete calculus used elsewhere funnels through the
// operations here so normalization conventions live in exactly one place:
//   - 5-point Laplacian, periodic wrap
//   - curvature density beta = d + lap(f)/(4pi), integrates to d exactly
//   - dirichlet_norm(u) = (1/4pi) h^2 sum |forward differences / h|^2,
//     equal to -(1/4pi) h^2 sum u*lap(u) by summation by parts (exact)

#include <vector>
#include <cstddef>
#include <stdexcept>

namespace tunnel {

struct TorusGrid {
  int N = 0;     // sites per side, N >= 4
  double h = 0;  // spacing, h*N == 1 in exact arithmetic (h = 1.0/N)

  TorusGrid() = default;
  explicit TorusGrid(int n);

  int size() const { return N * N; }
  // periodic site index; j,l may be out of range by +-N
  int at(int j, int l) const {
    j += N; l += N;
    return (j % N) * N + (l % N);
  }
  bool operator==(const TorusGrid& o) const { return N == o.N; }
};

struct ScalarField {
  TorusGrid grid;
  std::vector<double> v;  // row-major, v[j*N + l], x index j, y index l

  ScalarField() = default;
  explicit ScalarField(const TorusGrid& g, double fill = 0.0) : grid(g), v(g.size(), fill) {}

  double& operator()(int j, int l) { return v[grid.at(j, l)]; }
  double operator()(int j, int l) const { return v[grid.at(j, l)]; }
  int N() const { return grid.N; }

  void check_finite(const char* who) const;  // throws std::invalid_argument on NaN/Inf
};

// periodic 5-point Laplacian, (sum of 4 neighbors - 4u)/h^2
ScalarField laplacian5(const ScalarField& u);

// beta = d + laplacian5(f)/(4pi); h^2 * sum(beta) == d up to round-off
ScalarField curvature_density(const ScalarField& f, int d);

// (1/4pi) h^2 sum over sites of ((u(j+1,l)-u(j,l))/h)^2 + ((u(j,l+1)-u(j,l))/h)^2
double dirichlet_norm(const ScalarField& u);

// h^2 sum of u
double integrate(const ScalarField& u);

// plain grid inner product h^2 sum u*w (real fields)
double inner(const ScalarField& u, const ScalarField& w);

// discrete symbol constant for the lowest mode: (2 - 2cos(2 pi h)) / (2 pi h)^2.
// multiplies the continuum eigenvalue of cos(2 pi y) under laplacian5; -> 1 as N -> inf
double stencil_constant(int N);

}  // namespace tunnel
