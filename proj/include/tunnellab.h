/* C interface to the tunnellab shared library.
 *
 * Conventions:
 *   - every function returns a tl_status; TL_OK (0) means success
 *   - on failure the thread-local message from tl_last_error() explains why,
 *     and no output handle or value is produced
 *   - handles are opaque; free each with its matching tl_*_free (NULL safe)
 *   - grids are N x N, row-major, index j*N + l for x-index j, y-index l
 *   - complex vectors are returned interleaved (re, im) when requested
 */
#ifndef TUNNELLAB_H
#define TUNNELLAB_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tl_status {
  TL_OK = 0,
  TL_EINVAL = 1,    /* malformed argument, bad size, unknown name */
  TL_EDOMAIN = 2,   /* mathematical precondition failed on valid input */
  TL_ENOCONV = 3,   /* iteration budget exhausted */
  TL_EIO = 4,       /* file system failure */
  TL_EINTERNAL = 5  /* should not happen; please report */
} tl_status;

typedef struct tl_field tl_field;       /* real scalar field on the torus grid */
typedef struct tl_envelope tl_envelope; /* obstacle-problem solution bundle */
typedef struct tl_model tl_model;       /* (grid, k, d, weight) line bundle data */
typedef struct tl_operator tl_operator; /* assembled lattice dbar operator */
typedef struct tl_spectrum tl_spectrum; /* eigenvalues (+ optional vectors) */
typedef struct tl_config tl_config;     /* sweep configuration */

/* ---- library ---- */
const char* tl_version(void);
const char* tl_last_error(void);  /* thread-local; empty string if none */
void tl_set_threads(int n);       /* BLAS threads for the dense eigensolver */

/* ---- fields ---- */
tl_status tl_field_create(int N, tl_field** out);
tl_status tl_field_from_profile(const char* name, double A, double sigma,
                                const char* table_path_or_null, int N, tl_field** out);
tl_status tl_field_size(const tl_field* f, int* N);
tl_status tl_field_data(tl_field* f, double** data);          /* mutable view, N*N */
tl_status tl_field_read(const tl_field* f, double* dst);      /* copy out N*N values */
tl_status tl_field_to_csv(const tl_field* f, const char* path);
void tl_field_free(tl_field* f);

/* ---- envelope (largest u <= f with lap u >= -4 pi d) ---- */
tl_status tl_envelope_solve(const tl_field* f, int d, double tol, double omega,
                            long max_sweeps, tl_envelope** out);
tl_status tl_envelope_field(const tl_envelope* e, tl_field** out);  /* copy of Pf */
tl_status tl_envelope_stats(const tl_envelope* e, double* complementarity,
                            double* curvature_residual, long* iterations);
tl_status tl_envelope_contact(const tl_envelope* e, unsigned char* dst);  /* N*N flags */
void tl_envelope_free(tl_envelope* e);

/* ---- scalar functionals ---- */
tl_status tl_dirichlet_norm(const tl_field* u, double* out);
tl_status tl_mixed_energy(const tl_field* f, const tl_field* g, int d, double* out);
tl_status tl_tunneling_target(const tl_field* f, const tl_envelope* e, double* out);
tl_status tl_curvature_density(const tl_field* f, int d, tl_field** out);

/* ---- bundle model and operator ---- */
tl_status tl_model_create(const tl_field* f, int k, int d, tl_model** out);
void tl_model_free(tl_model* m);
tl_status tl_operator_build(const tl_model* m, tl_operator** out);
/* max plaquette flux deviation, trace of the q=0 Laplacian, and the holonomy
 * angles of the two fundamental loops (weights stripped) */
tl_status tl_operator_stats(const tl_operator* op, double* plaquette_dev, double* trace,
                            double* wilson_x_angle, double* wilson_y_angle);
void tl_operator_free(tl_operator* op);

/* ---- spectra ---- */
/* route: "dense", "iterative" or "auto". For "dense" the threshold is ignored
 * and the full spectrum is computed; otherwise eigenpairs are computed until
 * the window [0, threshold] is safely covered. */
tl_status tl_spectrum_solve(const tl_operator* op, int q, const char* route,
                            double threshold, int want_vectors, tl_spectrum** out);
tl_status tl_spectrum_lowest(const tl_operator* op, int q, int count, int want_vectors,
                             tl_spectrum** out);
tl_status tl_spectrum_count(const tl_spectrum* s, int* out);
tl_status tl_spectrum_values(const tl_spectrum* s, double* dst);  /* count doubles */
tl_status tl_spectrum_vector(const tl_spectrum* s, int i, double* dst); /* 2*N*N doubles */
tl_status tl_spectrum_residual(const tl_spectrum* s, double* out);
tl_status tl_spectrum_to_csv(const tl_spectrum* s, const tl_model* m,
                             const char* profile_name, const char* path);
/* window partition: kernel block of k*d exact zeros, then eigenvalues below
 * k^(1-epsilon); small_count may come back 0 */
tl_status tl_spectrum_partition(const tl_spectrum* s, int k, int d, double epsilon,
                                int* kernel_count, int* small_count, double* threshold);
tl_status tl_spectrum_logsum_small(const tl_spectrum* s, int k, int d, double epsilon,
                                   double* out);  /* 0 when the window is empty */
void tl_spectrum_free(tl_spectrum* s);

/* ---- torsion, Gram, anomaly ---- */
tl_status tl_gram_log_det(const tl_model* m, double* out);
tl_status tl_l_functional(const tl_model* mf, const tl_model* mg, double* out);
tl_status tl_quillen_anomaly(const tl_model* mf, const tl_model* mg, double epsilon,
                             const char* route, double* anomaly, double* torsion_f,
                             double* torsion_g, double* gram_f, double* gram_g);
tl_status tl_quasimode(const tl_model* m, double x0, double y0, double width,
                       double* quotient, double* mass);
tl_status tl_theta_crosscheck(const tl_model* m, double* radians);

/* ---- sweep and selftest ---- */
tl_status tl_config_default(tl_config** out);
tl_status tl_config_parse(const char* text, tl_config** out);
tl_status tl_config_set(tl_config* c, const char* dotted_key, const char* value);
void tl_config_free(tl_config* c);
/* runs the full k-sweep, writing CSVs and manifest.json under the configured
 * output directory (or out_dir_override when non-NULL) */
tl_status tl_sweep_run(const tl_config* c, const char* out_dir_override);
/* returns TL_OK when all internal invariant checks pass */
tl_status tl_selftest(int verbose);

#ifdef __cplusplus
}
#endif

#endif /* TUNNELLAB_H */
