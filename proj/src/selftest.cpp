#include "tunnellab/sweep.hpp"

#include "tunnellab/bundle.hpp"
#include "tunnellab/energy.hpp"
#include "tunnellab/envelope.hpp"
#include "tunnellab/errors.hpp"
#include "tunnellab/spectrum.hpp"
#include "tunnellab/torsion.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>

namespace tunnel {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Rng {
  uint64_t s;
  explicit Rng(uint64_t seed) : s(seed) {}
  uint64_t next() {
    uint64_t z = (s += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * (2.0 / 9007199254740992.0) - 1.0; }
};

ScalarField random_field(int N, double amp, uint64_t seed) {
  ScalarField f{TorusGrid(N)};
  Rng rng(seed);
  for (auto& x : f.v) x = amp * rng.uniform();
  return f;
}

}  // namespace

std::vector<std::string> selftest(bool verbose) {
  std::vector<std::string> failures;
  auto check = [&](const char* name, const std::function<bool()>& body) {
    bool ok = false;
    std::string detail;
    try {
      ok = body();
    } catch (const std::exception& ex) {
      detail = ex.what();
    }
    if (verbose) std::printf("%-44s %s\n", name, ok ? "ok" : "FAIL");
    if (!ok) failures.push_back(detail.empty() ? name : std::string(name) + ": " + detail);
  };

  check("laplacian self-adjoint", [] {
    const ScalarField u = random_field(32, 1.0, 11), v = random_field(32, 1.0, 12);
    const double a = inner(u, laplacian5(v)), b = inner(v, laplacian5(u));
    return std::abs(a - b) <= 1e-10 * (std::abs(a) + 1.0);
  });

  check("curvature integrates to degree", [] {
    const ScalarField f = random_field(40, 2.0, 13);
    return std::abs(integrate(curvature_density(f, 3)) - 3.0) <= 1e-9;
  });

  check("dirichlet norm equals -u lap u / 4pi", [] {
    const ScalarField u = random_field(28, 1.5, 14);
    const double a = dirichlet_norm(u);
    const double b = -inner(u, laplacian5(u)) / (4.0 * kPi);
    return std::abs(a - b) <= 1e-10 * (std::abs(a) + 1.0);
  });

  check("admissible weight is its own envelope", [] {
    ProfileSpec p;
    p.A = 0.2;
    const ScalarField f = build_profile(p, 48);
    const EnvelopeResult r = project_envelope(f, 1);
    if (!r.converged || r.iterations != 0) return false;
    for (int a = 0; a < f.grid.size(); ++a)
      if (std::abs(r.envelope.v[a] - f.v[a]) > 1e-12) return false;
    return true;
  });

  check("envelope residual certificates", [] {
    ProfileSpec p;
    const ScalarField f = build_profile(p, 64);
    const EnvelopeResult r = project_envelope(f, 1);
    return r.converged && r.residual <= 1e-10 && r.curvature_residual <= 1e-10 &&
           orthogonality_residual(f, r, 1) <= 1e-8;
  });

  check("envelope energy equals dirichlet target", [] {
    ProfileSpec p;
    const ScalarField f = build_profile(p, 96);
    const EnvelopeResult r = project_envelope(f, 1);
    const double lhs = mixed_energy(r.envelope, f, 1);
    const double rhs = tunneling_target(f, r);
    return r.converged && std::abs(lhs - rhs) <= 1e-6 * std::abs(rhs);
  });

  check("energy antisymmetry and cocycle", [] {
    const ScalarField f = random_field(24, 1.0, 15), g = random_field(24, 1.0, 16),
                      w = random_field(24, 1.0, 17);
    const double anti = mixed_energy(f, g, 2) + mixed_energy(g, f, 2);
    const double cyc = mixed_energy(f, g, 2) + mixed_energy(g, w, 2) + mixed_energy(w, f, 2);
    return std::abs(anti) <= 1e-10 && std::abs(cyc) <= 1e-10;
  });

  check("energy derivative is exactly quadratic", [] {
    WeightPath path{random_field(24, 0.7, 18), random_field(24, 0.5, 19)};
    const DerivativeCheck c = energy_derivative_check(path, 0.3, 0.05, 1);
    return std::abs(c.numeric - c.predicted) <= 1e-9 * (std::abs(c.predicted) + 1.0);
  });

  check("flux bound enforced", [] {
    try {
      build_dbar(LineBundleModel(TorusGrid(4), 9, 1, ScalarField(TorusGrid(4))));
    } catch (const std::invalid_argument&) {
      return true;
    }
    return false;
  });

  check("plaquette flux uniform", [] {
    const LineBundleModel m(TorusGrid(24), 5, 2, random_field(24, 0.4, 20));
    return build_dbar(m).plaquette_flux_dev() <= 1e-12;
  });

  check("operator trace closed form at flat weight", [] {
    const int N = 20;
    const LineBundleModel m(TorusGrid(N), 4, 1, ScalarField(TorusGrid(N)));
    const double tr = build_dbar(m).trace_laplacian();
    const double expect = 2.0 * std::pow(static_cast<double>(N), 4);
    return std::abs(tr - expect) <= 1e-10 * expect;
  });

  check("exact kernel and supersymmetric pairing", [] {
    const LineBundleModel m(TorusGrid(16), 3, 1, random_field(16, 0.3, 21));
    const DbarOperator op = build_dbar(m);
    const SpectrumResult s0 = eigensolve_dense(op, 0, false);
    const SpectrumResult s1 = eigensolve_dense(op, 1, false);
    // kernel zeros carry dense-solver noise proportional to the spectral
    // radius, about 4/h^2 at this weight amplitude
    const double floor = 1e-10 * 4.0 * 16.0 * 16.0;
    for (int i = 0; i < 3; ++i)
      if (std::abs(s0.eigenvalues[i]) > floor || std::abs(s1.eigenvalues[i]) > floor)
        return false;
    if (s0.eigenvalues[3] < 0.5 || s1.eigenvalues[3] < 0.5) return false;
    for (int i = 3; i < 60; ++i) {
      const double a = s0.eigenvalues[i], b = s1.eigenvalues[i];
      if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(a))) return false;
    }
    return true;
  });

  check("gram of flat weight is the identity", [] {
    const LineBundleModel flat(TorusGrid(20), 3, 1, ScalarField(TorusGrid(20)));
    return std::abs(gram_log_det(reference_kernel_basis(flat), flat)) <= 1e-9;
  });

  check("gram shifts by -k^2 d c under constant offset", [] {
    const TorusGrid g(20);
    const int k = 3, d = 1;
    const double c = 0.17;
    const LineBundleModel flat(g, k, d, ScalarField(g));
    const ScalarField f = random_field(20, 0.25, 22);
    ScalarField fc = f;
    for (auto& x : fc.v) x += c;
    const auto basis = reference_kernel_basis(flat);
    const double a = gram_log_det(basis, LineBundleModel(g, k, d, f));
    const double b = gram_log_det(basis, LineBundleModel(g, k, d, fc));
    return std::abs(b - a + k * c * (k * d)) <= 1e-8 * std::max(1.0, std::abs(a));
  });

  check("flat weight has an empty tunneling window", [] {
    const LineBundleModel flat(TorusGrid(32), 6, 1, ScalarField(TorusGrid(32)));
    const DbarOperator op = build_dbar(flat);
    const double thr = std::pow(6.0, 0.75);
    const SpectrumResult s = eigensolve_window(op, 1, thr, false);
    const ThresholdPartition p = partition_small(s, 6, 1, 0.25);
    return p.small_end == p.small_begin;
  });

  check("theta sections span the kernel", [] {
    // measured principal angle scales as 0.84 sqrt(k d) h; unit flux at
    // N = 32 sits at 0.025, half the bound
    const LineBundleModel flat(TorusGrid(32), 1, 1, ScalarField(TorusGrid(32)));
    return theta_crosscheck(flat) <= 0.05;
  });

  check("quasimode quotient below half the gap", [] {
    const LineBundleModel flat(TorusGrid(48), 6, 1, ScalarField(TorusGrid(48)));
    const QuasimodeResult q = quasimode_quotient(flat, 0.5, 0.5, 0.4);
    return q.quotient >= 0.0 && q.quotient <= kPi * 6.0;
  });

  check("config minimal text accepted", [] {
    const RunConfig cfg = parse_config_text(
        "[run]\nprofile = cos_y\nA = 1\nd = 1\nk = 8,12,16\nepsilon = 0.25\n");
    validate_config(cfg);
    return cfg.k.size() == 3 && cfg.profile.A == 1.0;
  });

  check("config rejects unknown keys with line numbers", [] {
    try {
      parse_config_text("[run]\nprofile = cos_y\nbogus = 1\n");
    } catch (const ConfigError& e) {
      return e.line == 3;
    }
    return false;
  });

  check("config rejects flux bound violations", [] {
    try {
      RunConfig cfg = parse_config_text("[run]\nk = 50\nN = 10\n");
      validate_config(cfg);
    } catch (const ConfigError&) {
      return true;
    }
    return false;
  });

  check("rate fit refuses underdetermined input", [] {
    try {
      fit_rate({{8, 1.0}, {16, 2.0}});
    } catch (const std::invalid_argument&) {
      return true;
    }
    return false;
  });

  return failures;
}

}  // namespace tunnel
