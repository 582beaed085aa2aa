#include "tunnellab/bundle.hpp"
#include "tunnellab/profiles.hpp"
#include "tunnellab/spectrum.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"

using namespace tunnel;

namespace {

LineBundleModel model(int N, int k, int d, const char* name = "cos_y", double A = 1.0) {
  ProfileSpec spec;
  spec.name = name;
  spec.A = A;
  return LineBundleModel(TorusGrid(N), k, d, build_profile(spec, N));
}

LineBundleModel flat(int N, int k, int d = 1) {
  return LineBundleModel(TorusGrid(N), k, d, ScalarField{TorusGrid(N)});
}

}  // namespace

TEST_CASE("flux bound rejects underresolved models") {
  // N^2 must exceed 2 k d; N = 4, k = 8, d = 1 sits exactly on the boundary
  CHECK_THROWS_AS(build_dbar(flat(4, 8)), std::invalid_argument);
  CHECK_NOTHROW(build_dbar(flat(5, 8)));
  CHECK_THROWS_AS(LineBundleModel(TorusGrid(8), 0, 1, ScalarField{TorusGrid(8)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(LineBundleModel(TorusGrid(8), 1, 0, ScalarField{TorusGrid(8)}),
                  std::invalid_argument);
}

TEST_CASE("plaquette flux is uniform across the torus") {
  const DbarOperator op = build_dbar(model(20, 3, 2, "bump", 0.6));
  CHECK(op.plaquette_flux_dev() <= 1e-12);
}

TEST_CASE("holonomy angles of the fundamental loops") {
  const int N = 16, k = 3, d = 1;
  const DbarOperator op = build_dbar(flat(N, k, d));
  const double alpha = k * d / static_cast<double>(N * N);
  // y-loop along column j accumulates -2 pi alpha j N; x-loop along row l
  // carries only the twist column +2 pi alpha N l
  for (int j : {0, 1, 5}) {
    const cdouble wy = op.wilson_y(j);
    CHECK(std::abs(wy) == doctest::Approx(1.0).epsilon(1e-12));
    const double want = std::remainder(-2 * oracle::kPi * alpha * j * N, 2 * oracle::kPi);
    CHECK(std::fabs(std::remainder(std::arg(wy) - want, 2 * oracle::kPi)) <= 1e-12);
  }
  for (int l : {0, 2, 7}) {
    const cdouble wx = op.wilson_x(l);
    const double want = std::remainder(2 * oracle::kPi * alpha * N * l, 2 * oracle::kPi);
    CHECK(std::fabs(std::remainder(std::arg(wx) - want, 2 * oracle::kPi)) <= 1e-12);
  }
}

TEST_CASE("apply and apply_adjoint are adjoint in the grid inner product") {
  const DbarOperator op = build_dbar(model(14, 2, 1, "cos_xy", 0.5));
  const int n = op.dim();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<cdouble> x(static_cast<size_t>(n)), y(static_cast<size_t>(n)),
      mx(static_cast<size_t>(n)), my(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    x[static_cast<size_t>(i)] = cdouble(u(rng), u(rng));
    y[static_cast<size_t>(i)] = cdouble(u(rng), u(rng));
  }
  op.apply(x.data(), mx.data());
  op.apply_adjoint(y.data(), my.data());
  cdouble lhs = 0, rhs = 0;
  for (int i = 0; i < n; ++i) {
    lhs += std::conj(y[static_cast<size_t>(i)]) * mx[static_cast<size_t>(i)];
    rhs += std::conj(my[static_cast<size_t>(i)]) * x[static_cast<size_t>(i)];
  }
  CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
}

TEST_CASE("trace of the Laplacian matches the dense spectrum in both degrees") {
  const DbarOperator op = build_dbar(model(12, 2, 1, "bump", 0.4));
  for (int q : {0, 1}) {
    const SpectrumResult sp = eigensolve_dense(op, q, false);
    double sum = 0;
    for (double ev : sp.eigenvalues) sum += ev;
    CHECK(sum == doctest::Approx(op.trace_laplacian()).epsilon(1e-10));
  }
}

TEST_CASE("positive spectra of the two Laplacians pair exactly") {
  const int k = 3, N = 16, d = 1;
  const DbarOperator op = build_dbar(model(N, k, d, "cos_xy", 0.4));
  const SpectrumResult s0 = eigensolve_dense(op, 0, false);
  const SpectrumResult s1 = eigensolve_dense(op, 1, false);
  const int m = k * d;
  for (size_t i = static_cast<size_t>(m); i < s0.eigenvalues.size(); ++i)
    CHECK(std::fabs(s0.eigenvalues[i] - s1.eigenvalues[i]) <= 1e-10 * s0.eigenvalues[i]);
}

TEST_CASE("lattice kernel is exactly k*d dimensional in both degrees") {
  // the admissible amplitude keeps the first positive eigenvalue at the
  // Landau scale, far above the kernel noise floor
  const int k = 4, N = 20;
  const DbarOperator op = build_dbar(model(N, k, 1, "cos_y", 0.3));
  // dense zeros carry solver noise proportional to the spectral radius
  const double floor = 1e-10 * 4.0 * N * N * std::exp(2 * k * 0.3);
  for (int q : {0, 1}) {
    const SpectrumResult sp = eigensolve_dense(op, q, false);
    CHECK(sp.eigenvalues[static_cast<size_t>(k - 1)] <= floor);
    CHECK(sp.eigenvalues[static_cast<size_t>(k)] >= 1.0);
  }
}

TEST_CASE("reference kernel basis is orthonormal and gap certified") {
  const int k = 5, N = 24;
  const std::vector<std::vector<cdouble>> basis = reference_kernel_basis(flat(N, k));
  REQUIRE(basis.size() == static_cast<size_t>(k));
  const double h2 = 1.0 / (N * static_cast<double>(N));
  for (size_t a = 0; a < basis.size(); ++a)
    for (size_t b = 0; b <= a; ++b) {
      cdouble g = 0;
      for (int i = 0; i < N * N; ++i)
        g += std::conj(basis[a][static_cast<size_t>(i)]) * basis[b][static_cast<size_t>(i)];
      g *= h2;
      CHECK(std::abs(g - (a == b ? 1.0 : 0.0)) <= 1e-12);
    }
}

TEST_CASE("reference kernel basis refuses non-flat weights") {
  CHECK_THROWS_AS(reference_kernel_basis(model(20, 3, 1, "cos_y", 0.5)), std::invalid_argument);
}

TEST_CASE("sampled theta sections span the numerical kernel") {
  // measured principal angle scales as 0.84 sqrt(k d) / N; at unit flux and
  // N = 32 it sits near 0.025
  CHECK(theta_crosscheck(flat(32, 1)) <= 0.05);
  CHECK(theta_crosscheck(flat(32, 1)) >= 1e-4);
}

TEST_CASE("kernel dimension is weight independent") {
  const int k = 2, N = 14;
  const DbarOperator op = build_dbar(model(N, k, 1, "bump", 0.1));
  const SpectrumResult sp = eigensolve_dense(op, 0, false);
  const double floor = 1e-10 * 4.0 * N * N * std::exp(2 * k * 0.2);
  CHECK(sp.eigenvalues[1] <= floor);
  CHECK(sp.eigenvalues[2] >= 1.0);
}
