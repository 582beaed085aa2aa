#include "tunnellab/bundle.hpp"

#include "tunnellab/spectrum.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tunnel {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

LineBundleModel::LineBundleModel(const TorusGrid& g, int k_, int d_, const ScalarField& f_)
    : grid(g), k(k_), d(d_), f(f_) {
  if (k < 1) throw std::invalid_argument("bundle power k must be >= 1");
  if (d < 1) throw std::invalid_argument("bundle degree d must be >= 1");
  if (f.grid.N != g.N) throw std::invalid_argument("weight field grid does not match model grid");
  f.check_finite("bundle weight");
}

DbarOperator build_dbar(const LineBundleModel& model) {
  const int N = model.grid.N;
  const long flux = static_cast<long>(model.k) * model.d;
  // below this resolution the uniform plaquette flux exceeds pi and the
  // lattice gauge field aliases; the Landau gap law breaks down entirely
  if (static_cast<long>(N) * N <= 2 * flux)
    throw std::invalid_argument("grid too coarse for flux: need N^2 > 2*k*d, got N=" +
                                std::to_string(N) + " k*d=" + std::to_string(flux));

  DbarOperator op;
  op.model = model;
  const double h = model.grid.h;
  const double c = 1.0 / (std::sqrt(2.0) * h);
  const double alpha = static_cast<double>(flux) / (static_cast<double>(N) * N);
  const int n = N * N;
  op.ax.resize(n);
  op.ay.resize(n);
  op.colx.resize(n);
  op.coly.resize(n);
  op.diag = cdouble(-c, -c);

  const ScalarField& f = model.f;
  const double khalf = 0.5 * model.k;
  for (int j = 0; j < N; ++j) {
    const int jp = (j + 1 == N) ? 0 : j + 1;
    const double theta_y = -2.0 * kPi * alpha * j;
    const cdouble phase_y = std::polar(1.0, theta_y);
    for (int l = 0; l < N; ++l) {
      const int lp = (l + 1 == N) ? 0 : l + 1;
      const int a = j * N + l;
      const double fa = f.v[a];
      // the twist column closes the gauge field: total flux through the
      // torus must be the integer k*d
      const double theta_x = (j == N - 1) ? 2.0 * kPi * alpha * N * l : 0.0;
      const double wx = std::exp(khalf * (f.v[jp * N + l] - fa));
      const double wy = std::exp(khalf * (f.v[j * N + lp] - fa));
      op.colx[a] = jp * N + l;
      op.coly[a] = j * N + lp;
      op.ax[a] = std::polar(c * wx, theta_x);
      op.ay[a] = cdouble(0.0, 1.0) * std::polar(c * wy, theta_y);
    }
  }
  return op;
}

void DbarOperator::apply(const cdouble* x, cdouble* y) const {
  const int n = dim();
  for (int a = 0; a < n; ++a)
    y[a] = ax[a] * x[colx[a]] + ay[a] * x[coly[a]] + diag * x[a];
}

void DbarOperator::apply_adjoint(const cdouble* x, cdouble* y) const {
  const int n = dim();
  const cdouble dconj = std::conj(diag);
  for (int a = 0; a < n; ++a) y[a] = dconj * x[a];
  // scatter: column b of M receives conj(M[a,b]) x[a]
  for (int a = 0; a < n; ++a) {
    y[colx[a]] += std::conj(ax[a]) * x[a];
    y[coly[a]] += std::conj(ay[a]) * x[a];
  }
}

void DbarOperator::apply_laplacian(int q, const cdouble* x, cdouble* y) const {
  if (q != 0 && q != 1) throw std::invalid_argument("laplacian degree q must be 0 or 1");
  std::vector<cdouble> mid(dim());
  if (q == 0) {
    apply(x, mid.data());
    apply_adjoint(mid.data(), y);
  } else {
    apply_adjoint(x, mid.data());
    apply(mid.data(), y);
  }
}

double DbarOperator::trace_laplacian() const {
  double s = 0.0;
  const int n = dim();
  for (int a = 0; a < n; ++a)
    s += std::norm(ax[a]) + std::norm(ay[a]) + std::norm(diag);
  return s;
}

double DbarOperator::plaquette_flux_dev() const {
  // plaquette at (j,l): U_x(j,l) U_y(j+1,l) conj(U_x(j,l+1)) conj(U_y(j,l))
  // where U are the pure link phases (weights cancel around any loop only in
  // the phase, so compare arguments)
  const int N = model.grid.N;
  const double alpha =
      static_cast<double>(model.flux()) / (static_cast<double>(N) * N);
  // the gauge orients the field so each counterclockwise plaquette carries
  // phase -2 pi alpha; the total through the torus is then -2 pi k d, the
  // orientation under which the forward-difference dbar annihilates the
  // lowest Landau band
  const double target = -2.0 * kPi * alpha;
  double worst = 0.0;
  for (int j = 0; j < N; ++j) {
    const int jp = (j + 1 == N) ? 0 : j + 1;
    for (int l = 0; l < N; ++l) {
      const int lp = (l + 1 == N) ? 0 : l + 1;
      const cdouble ux0 = ax[j * N + l];
      const cdouble uy1 = ay[jp * N + l];
      const cdouble ux1 = ax[j * N + lp];
      const cdouble uy0 = ay[j * N + l];
      const cdouble loop = ux0 * uy1 * std::conj(ux1) * std::conj(uy0);
      double dev = std::arg(loop) - target;
      // branch-correct: flux per plaquette is small but arg() can wrap when
      // the twist column contributes a large phase
      dev -= 2.0 * kPi * std::round(dev / (2.0 * kPi));
      worst = std::max(worst, std::abs(dev));
    }
  }
  return worst;
}

cdouble DbarOperator::wilson_x(int l) const {
  const int N = model.grid.N;
  cdouble w(1.0, 0.0);
  for (int j = 0; j < N; ++j) {
    const cdouble z = ax[j * N + l];
    w *= z / std::abs(z);
  }
  return w;
}

cdouble DbarOperator::wilson_y(int j) const {
  const int N = model.grid.N;
  cdouble w(1.0, 0.0);
  for (int l = 0; l < N; ++l) {
    const cdouble z = ay[j * N + l];
    // strip the i from the y-hop convention as well as the weight
    w *= z / std::abs(z) * cdouble(0.0, -1.0);
  }
  return w;
}

// Continuum lowest-Landau sections in the gauge of build_dbar. Solving
// (d_x + i d_y + 2 pi m x) psi = 0 with psi(x+1,y) = e^{2 pi i m y} psi(x,y)
// and psi(x,y+1) = psi(x,y) gives the m-dimensional theta family below.
std::vector<std::vector<cdouble>> theta_sections(const LineBundleModel& model) {
  const int N = model.grid.N;
  const int m = static_cast<int>(model.flux());
  const double h = model.grid.h;
  // truncation |p| <= P with exp(-pi m (P-1)^2) < 1e-14
  int P = 1 + static_cast<int>(std::ceil(std::sqrt(14.0 * std::log(10.0) / (kPi * m))));
  if (P < 2) P = 2;

  std::vector<std::vector<cdouble>> secs(m, std::vector<cdouble>(N * N));
  for (int r = 0; r < m; ++r) {
    const double center = static_cast<double>(r) / m;
    for (int j = 0; j < N; ++j) {
      const double x = j * h;
      for (int l = 0; l < N; ++l) {
        const double y = l * h;
        cdouble s(0.0, 0.0);
        for (int p = -P; p <= P; ++p) {
          const double dx = x - p - center;
          const double amp = std::exp(-kPi * m * dx * dx);
          s += std::polar(amp, 2.0 * kPi * (r + static_cast<double>(m) * p) * y);
        }
        secs[r][j * N + l] = s;
      }
    }
  }
  return secs;
}

double theta_crosscheck(const LineBundleModel& model) {
  const int m = static_cast<int>(model.flux());
  const int n = model.grid.size();
  const double h2 = model.grid.h * model.grid.h;

  std::vector<std::vector<cdouble>> kernel = reference_kernel_basis(model);
  std::vector<std::vector<cdouble>> theta = theta_sections(model);

  // orthonormalize the theta samples by modified Gram-Schmidt in the h^2
  // inner product; the family is far from degenerate so this is stable
  for (int r = 0; r < m; ++r) {
    for (int s = 0; s < r; ++s) {
      cdouble proj(0.0, 0.0);
      for (int a = 0; a < n; ++a) proj += std::conj(theta[s][a]) * theta[r][a];
      proj *= h2;
      for (int a = 0; a < n; ++a) theta[r][a] -= proj * theta[s][a];
    }
    double nrm = 0.0;
    for (int a = 0; a < n; ++a) nrm += std::norm(theta[r][a]);
    nrm = std::sqrt(nrm * h2);
    if (!(nrm > 1e-12))
      throw std::runtime_error("theta sections numerically degenerate");
    for (int a = 0; a < n; ++a) theta[r][a] /= nrm;
  }

  // principal angles: singular values of the m x m overlap A^+ B
  std::vector<cdouble> overlap(static_cast<size_t>(m) * m);
  for (int r = 0; r < m; ++r)
    for (int s = 0; s < m; ++s) {
      cdouble o(0.0, 0.0);
      for (int a = 0; a < n; ++a) o += std::conj(kernel[r][a]) * theta[s][a];
      overlap[static_cast<size_t>(r) * m + s] = o * h2;
    }
  const double smin = overlap_smallest_singular_value(overlap, m);
  const double clipped = std::min(1.0, std::max(-1.0, smin));
  return std::acos(clipped);
}

}  // namespace tunnel
