#include "tunnellab.h"

#include "tunnellab/bundle.hpp"
#include "tunnellab/config.hpp"
#include "tunnellab/energy.hpp"
#include "tunnellab/envelope.hpp"
#include "tunnellab/errors.hpp"
#include "tunnellab/profiles.hpp"
#include "tunnellab/spectrum.hpp"
#include "tunnellab/sweep.hpp"
#include "tunnellab/torsion.hpp"
#include "tunnellab/version.hpp"

#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

// Each wrapper funnels through guard(), which translates the exception
// taxonomy into stable status codes and stows the message thread-locally.

namespace {

thread_local std::string t_error;

template <typename Fn>
tl_status guard(Fn&& fn) {
  t_error.clear();
  try {
    fn();
    return TL_OK;
  } catch (const tunnel::NoConvergence& e) {
    t_error = e.what();
    return TL_ENOCONV;
  } catch (const tunnel::IoError& e) {
    t_error = e.what();
    return TL_EIO;
  } catch (const tunnel::ConfigError& e) {
    t_error = e.what();
    return TL_EINVAL;
  } catch (const std::invalid_argument& e) {
    t_error = e.what();
    return TL_EINVAL;
  } catch (const std::domain_error& e) {
    t_error = e.what();
    return TL_EDOMAIN;
  } catch (const std::exception& e) {
    t_error = e.what();
    return TL_EINTERNAL;
  } catch (...) {
    t_error = "unknown failure";
    return TL_EINTERNAL;
  }
}

tl_status fail_einval(const char* msg) {
  t_error = msg;
  return TL_EINVAL;
}

tunnel::SolveRoute parse_route(const char* route) {
  if (route == nullptr) throw std::invalid_argument("route is NULL");
  const std::string r(route);
  if (r == "dense") return tunnel::SolveRoute::kDense;
  if (r == "iterative") return tunnel::SolveRoute::kIterative;
  if (r == "auto") return tunnel::SolveRoute::kAuto;
  throw std::invalid_argument("route must be dense, iterative or auto, got '" + r + "'");
}

}  // namespace

struct tl_field {
  tunnel::ScalarField f;
};
struct tl_envelope {
  tunnel::ScalarField input;
  int d = 1;
  tunnel::EnvelopeResult r;
};
struct tl_model {
  tunnel::LineBundleModel m;
};
struct tl_operator {
  tunnel::DbarOperator op;
};
struct tl_spectrum {
  tunnel::SpectrumResult s;
};
struct tl_config {
  tunnel::RunConfig cfg;
};

extern "C" {

const char* tl_version(void) { return tunnel::kVersionString; }

const char* tl_last_error(void) { return t_error.c_str(); }

void tl_set_threads(int n) { tunnel::set_solver_threads(n); }

tl_status tl_field_create(int N, tl_field** out) {
  if (!out) return fail_einval("out is NULL");
  *out = nullptr;
  return guard([&] { *out = new tl_field{tunnel::ScalarField(tunnel::TorusGrid(N))}; });
}

tl_status tl_field_from_profile(const char* name, double A, double sigma,
                                const char* table_path_or_null, int N, tl_field** out) {
  if (!out) return fail_einval("out is NULL");
  *out = nullptr;
  if (!name) return fail_einval("profile name is NULL");
  return guard([&] {
    tunnel::ProfileSpec spec;
    spec.name = name;
    spec.A = A;
    if (sigma > 0.0) spec.sigma = sigma;
    if (table_path_or_null) spec.table_path = table_path_or_null;
    *out = new tl_field{tunnel::build_profile(spec, N)};
  });
}

tl_status tl_field_size(const tl_field* f, int* N) {
  if (!f || !N) return fail_einval("NULL argument");
  *N = f->f.N();
  t_error.clear();
  return TL_OK;
}

tl_status tl_field_data(tl_field* f, double** data) {
  if (!f || !data) return fail_einval("NULL argument");
  *data = f->f.v.data();
  t_error.clear();
  return TL_OK;
}

tl_status tl_field_read(const tl_field* f, double* dst) {
  if (!f || !dst) return fail_einval("NULL argument");
  std::memcpy(dst, f->f.v.data(), sizeof(double) * f->f.v.size());
  t_error.clear();
  return TL_OK;
}

tl_status tl_field_to_csv(const tl_field* f, const char* path) {
  if (!f || !path) return fail_einval("NULL argument");
  return guard([&] {
    std::ofstream o(path, std::ios::binary);
    if (!o) throw tunnel::IoError(std::string("cannot open for writing: ") + path);
    o << "j,l,value\n";
    const int N = f->f.N();
    char buf[64];
    for (int j = 0; j < N; ++j)
      for (int l = 0; l < N; ++l) {
        const auto r = std::to_chars(buf, buf + sizeof(buf), f->f.v[j * N + l]);
        o << j << ',' << l << ',';
        o.write(buf, r.ptr - buf);
        o.put('\n');
      }
    if (!o) throw tunnel::IoError(std::string("write failed: ") + path);
  });
}

void tl_field_free(tl_field* f) { delete f; }

tl_status tl_envelope_solve(const tl_field* f, int d, double tol, double omega,
                            long max_sweeps, tl_envelope** out) {
  if (!out) return fail_einval("out is NULL");
  *out = nullptr;
  if (!f) return fail_einval("field is NULL");
  return guard([&] {
    tunnel::EnvelopeResult r = tunnel::project_envelope(f->f, d, tol, omega, max_sweeps);
    if (!r.converged)
      throw tunnel::NoConvergence("envelope did not converge within " +
                                  std::to_string(max_sweeps) + " sweeps");
    *out = new tl_envelope{f->f, d, std::move(r)};
  });
}

tl_status tl_envelope_field(const tl_envelope* e, tl_field** out) {
  if (!out) return fail_einval("out is NULL");
  *out = nullptr;
  if (!e) return fail_einval("envelope is NULL");
  return guard([&] { *out = new tl_field{e->r.envelope}; });
}

tl_status tl_envelope_stats(const tl_envelope* e, double* complementarity,
                            double* curvature_residual, long* iterations) {
  if (!e) return fail_einval("envelope is NULL");
  if (complementarity) *complementarity = e->r.residual;
  if (curvature_residual) *curvature_residual = e->r.curvature_residual;
  if (iterations) *iterations = e->r.iterations;
  t_error.clear();
  return TL_OK;
}

tl_status tl_envelope_contact(const tl_envelope* e, unsigned char* dst) {
  if (!e || !dst) return fail_einval("NULL argument");
  std::memcpy(dst, e->r.contact.data(), e->r.contact.size());
  t_error.clear();
  return TL_OK;
}

void tl_envelope_free(tl_envelope* e) { delete e; }

tl_status tl_dirichlet_norm(const tl_field* u, double* out) {
  if (!u || !out) return fail_einval("NULL argument");
  return guard([&] { *out = tunnel::dirichlet_norm(u->f); });
}

tl_status tl_mixed_energy(const tl_field* f, const tl_field* g, int d, double* out) {
  if (!f || !g || !out) return fail_einval("NULL argument");
  return guard([&] { *out = tunnel::mixed_energy(f->f, g->f, d); });
}

tl_status tl_tunneling_target(const tl_field* f, const tl_envelope* e, double* out) {
  if (!f || !e || !out) return fail_einval("NULL argument");
  return guard([&] { *out = tunnel::tunneling_target(f->f, e->r); });
}

tl_status tl_curvature_density(const tl_field* f, int d, tl_field** out) {
  if (!out) return fail_einval("out is NULL");
  *out = nullptr;
  if (!f) return fail_einval("field is NULL");
  return guard([&] { *out = new tl_field{tunnel::curvature_density(f->f, d)}; });
}

tl_status tl_model_create(const tl_field* f, int k, int d, tl_model** out) {
  if (!out) return fail_einval("out is NULL");
  *out = nullptr;
  if (!f) return fail_einval("field is NULL");
  return guard([&] {
    *out = new tl_model{tunnel::LineBundleModel(f->f.grid, k, d, f->f)};
  });
}

void tl_model_free(tl_model* m) { delete m; }

tl_status tl_operator_build(const tl_model* m, tl_operator** out) {
  if (!out) return fail_einval("out is NULL");
  *out = nullptr;
  if (!m) return fail_einval("model is NULL");
  return guard([&] { *out = new tl_operator{tunnel::build_dbar(m->m)}; });
}

tl_status tl_operator_stats(const tl_operator* op, double* plaquette_dev, double* trace,
                            double* wilson_x_angle, double* wilson_y_angle) {
  if (!op) return fail_einval("operator is NULL");
  return guard([&] {
    if (plaquette_dev) *plaquette_dev = op->op.plaquette_flux_dev();
    if (trace) *trace = op->op.trace_laplacian();
    if (wilson_x_angle) *wilson_x_angle = std::arg(op->op.wilson_x(0));
    if (wilson_y_angle) *wilson_y_angle = std::arg(op->op.wilson_y(0));
  });
}

void tl_operator_free(tl_operator* op) { delete op; }

tl_status tl_spectrum_solve(const tl_operator* op, int q, const char* route,
                            double threshold, int want_vectors, tl_spectrum** out) {
  if (!out) return fail_einval("out is NULL");
  *out = nullptr;
  if (!op) return fail_einval("operator is NULL");
  return guard([&] {
    const tunnel::SolveRoute r = parse_route(route);
    tunnel::SpectrumResult s;
    if (r == tunnel::SolveRoute::kDense)
      s = tunnel::eigensolve_dense(op->op, q, want_vectors != 0);
    else
      s = tunnel::eigensolve_window(op->op, q, threshold, want_vectors != 0);
    *out = new tl_spectrum{std::move(s)};
  });
}

tl_status tl_spectrum_lowest(const tl_operator* op, int q, int count, int want_vectors,
                             tl_spectrum** out) {
  if (!out) return fail_einval("out is NULL");
  *out = nullptr;
  if (!op) return fail_einval("operator is NULL");
  return guard([&] {
    *out = new tl_spectrum{tunnel::eigensolve_lowest(op->op, q, count, want_vectors != 0)};
  });
}

tl_status tl_spectrum_count(const tl_spectrum* s, int* out) {
  if (!s || !out) return fail_einval("NULL argument");
  *out = static_cast<int>(s->s.eigenvalues.size());
  t_error.clear();
  return TL_OK;
}

tl_status tl_spectrum_values(const tl_spectrum* s, double* dst) {
  if (!s || !dst) return fail_einval("NULL argument");
  std::memcpy(dst, s->s.eigenvalues.data(), sizeof(double) * s->s.eigenvalues.size());
  t_error.clear();
  return TL_OK;
}

tl_status tl_spectrum_vector(const tl_spectrum* s, int i, double* dst) {
  if (!s || !dst) return fail_einval("NULL argument");
  if (i < 0 || i >= static_cast<int>(s->s.vectors.size()))
    return fail_einval("eigenvector index out of range (were vectors requested?)");
  const auto& v = s->s.vectors[static_cast<size_t>(i)];
  for (size_t a = 0; a < v.size(); ++a) {
    dst[2 * a] = v[a].real();
    dst[2 * a + 1] = v[a].imag();
  }
  t_error.clear();
  return TL_OK;
}

tl_status tl_spectrum_residual(const tl_spectrum* s, double* out) {
  if (!s || !out) return fail_einval("NULL argument");
  *out = s->s.residual_bound;
  t_error.clear();
  return TL_OK;
}

tl_status tl_spectrum_to_csv(const tl_spectrum* s, const tl_model* m,
                             const char* profile_name, const char* path) {
  if (!s || !m || !profile_name || !path) return fail_einval("NULL argument");
  return guard([&] {
    std::ofstream o(path, std::ios::binary);
    if (!o) throw tunnel::IoError(std::string("cannot open for writing: ") + path);
    o << "k,d,N,profile,q,index,eigenvalue\n";
    char buf[64];
    for (size_t i = 0; i < s->s.eigenvalues.size(); ++i) {
      const auto r = std::to_chars(buf, buf + sizeof(buf), s->s.eigenvalues[i]);
      o << m->m.k << ',' << m->m.d << ',' << m->m.grid.N << ',' << profile_name << ','
        << s->s.q << ',' << i << ',';
      o.write(buf, r.ptr - buf);
      o.put('\n');
    }
    if (!o) throw tunnel::IoError(std::string("write failed: ") + path);
  });
}

tl_status tl_spectrum_partition(const tl_spectrum* s, int k, int d, double epsilon,
                                int* kernel_count, int* small_count, double* threshold) {
  if (!s) return fail_einval("spectrum is NULL");
  return guard([&] {
    const tunnel::ThresholdPartition p = tunnel::partition_small(s->s, k, d, epsilon);
    if (kernel_count) *kernel_count = p.kernel_count;
    if (small_count) *small_count = p.small_end - p.small_begin;
    if (threshold) *threshold = p.threshold;
  });
}

tl_status tl_spectrum_logsum_small(const tl_spectrum* s, int k, int d, double epsilon,
                                   double* out) {
  if (!s || !out) return fail_einval("NULL argument");
  return guard([&] {
    const tunnel::ThresholdPartition p = tunnel::partition_small(s->s, k, d, epsilon);
    *out = tunnel::truncated_torsion(s->s, p);
  });
}

void tl_spectrum_free(tl_spectrum* s) { delete s; }

tl_status tl_gram_log_det(const tl_model* m, double* out) {
  if (!m || !out) return fail_einval("NULL argument");
  return guard([&] {
    const tunnel::LineBundleModel flat(m->m.grid, m->m.k, m->m.d,
                                       tunnel::ScalarField(m->m.grid));
    *out = tunnel::gram_log_det(tunnel::reference_kernel_basis(flat), m->m);
  });
}

tl_status tl_l_functional(const tl_model* mf, const tl_model* mg, double* out) {
  if (!mf || !mg || !out) return fail_einval("NULL argument");
  return guard([&] {
    const tunnel::LineBundleModel flat(mf->m.grid, mf->m.k, mf->m.d,
                                       tunnel::ScalarField(mf->m.grid));
    *out = tunnel::l_functional(tunnel::reference_kernel_basis(flat), mf->m, mg->m);
  });
}

tl_status tl_quillen_anomaly(const tl_model* mf, const tl_model* mg, double epsilon,
                             const char* route, double* anomaly, double* torsion_f,
                             double* torsion_g, double* gram_f, double* gram_g) {
  if (!mf || !mg) return fail_einval("model is NULL");
  return guard([&] {
    const tunnel::QuillenParts p =
        tunnel::quillen_anomaly(mf->m, mg->m, epsilon, parse_route(route ? route : "auto"));
    if (anomaly) *anomaly = p.anomaly;
    if (torsion_f) *torsion_f = p.torsion_f;
    if (torsion_g) *torsion_g = p.torsion_g;
    if (gram_f) *gram_f = p.gram_f;
    if (gram_g) *gram_g = p.gram_g;
  });
}

tl_status tl_quasimode(const tl_model* m, double x0, double y0, double width,
                       double* quotient, double* mass) {
  if (!m || !quotient) return fail_einval("NULL argument");
  return guard([&] {
    const tunnel::QuasimodeResult q = tunnel::quasimode_quotient(m->m, x0, y0, width);
    *quotient = q.quotient;
    if (mass) *mass = q.mass;
  });
}

tl_status tl_theta_crosscheck(const tl_model* m, double* radians) {
  if (!m || !radians) return fail_einval("NULL argument");
  return guard([&] { *radians = tunnel::theta_crosscheck(m->m); });
}

tl_status tl_config_default(tl_config** out) {
  if (!out) return fail_einval("out is NULL");
  *out = nullptr;
  return guard([&] { *out = new tl_config{tunnel::RunConfig{}}; });
}

tl_status tl_config_parse(const char* text, tl_config** out) {
  if (!out) return fail_einval("out is NULL");
  *out = nullptr;
  if (!text) return fail_einval("text is NULL");
  return guard([&] { *out = new tl_config{tunnel::parse_config_text(text)}; });
}

tl_status tl_config_set(tl_config* c, const char* dotted_key, const char* value) {
  if (!c || !dotted_key || !value) return fail_einval("NULL argument");
  return guard([&] { tunnel::config_set(c->cfg, dotted_key, value); });
}

void tl_config_free(tl_config* c) { delete c; }

tl_status tl_sweep_run(const tl_config* c, const char* out_dir_override) {
  if (!c) return fail_einval("config is NULL");
  return guard([&] {
    tunnel::RunConfig cfg = c->cfg;
    if (out_dir_override) cfg.out_dir = out_dir_override;
    tunnel::run_sweep(cfg);
  });
}

tl_status tl_selftest(int verbose) {
  return guard([&] {
    const std::vector<std::string> failures = tunnel::selftest(verbose != 0);
    if (!failures.empty()) {
      std::string msg = "selftest failures:";
      for (const auto& f : failures) msg += "\n  " + f;
      throw std::domain_error(msg);
    }
  });
}

}  // extern "C"
