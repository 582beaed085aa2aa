// Command line front end. Links against the C API only; all numerics live in
// the shared library. Exit codes: 0 success, 1 numeric/domain/file failure,
// 2 usage or configuration error.

#include "tunnellab.h"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

namespace {

int rc_from(tl_status st) {
  if (st == TL_OK) return 0;
  std::fprintf(stderr, "error: %s\n", tl_last_error());
  return st == TL_EINVAL ? 2 : 1;
}

// common model flags shared by the single-shot subcommands
struct ModelArgs {
  std::string profile = "cos_y";
  double A = 1.0;
  double sigma = 0.15;
  std::string table;
  int d = 1;
  int k = 8;
  int N = 0;  // 0 -> ceil(12 sqrt(k d))
  double epsilon = 0.25;
  std::string solver = "auto";

  int grid() const {
    if (N > 0) return N;
    return static_cast<int>(std::ceil(12.0 * std::sqrt(static_cast<double>(k) * d)));
  }
  double threshold() const { return std::pow(static_cast<double>(k), 1.0 - epsilon); }
};

void add_model_flags(CLI::App* cmd, ModelArgs& m, bool with_k) {
  cmd->add_option("--profile", m.profile, "weight profile: cos_y, cos_xy, bump, table");
  cmd->add_option("--A", m.A, "profile amplitude");
  cmd->add_option("--sigma", m.sigma, "bump profile width");
  cmd->add_option("--table", m.table, "grid file for the table profile");
  cmd->add_option("--d", m.d, "bundle degree (>= 1)");
  if (with_k) {
    cmd->add_option("--k", m.k, "bundle power");
    cmd->add_option("--epsilon", m.epsilon, "window exponent: threshold k^(1-epsilon)");
    cmd->add_option("--solver", m.solver, "eigensolver route: auto, dense, iterative")
        ->check(CLI::IsMember({"auto", "dense", "iterative"}));
  }
  cmd->add_option("--N", m.N, "grid resolution (default ceil(12 sqrt(k d)))");
}

struct FieldHandle {
  tl_field* p = nullptr;
  ~FieldHandle() { tl_field_free(p); }
};
struct ModelHandle {
  tl_model* p = nullptr;
  ~ModelHandle() { tl_model_free(p); }
};
struct OperatorHandle {
  tl_operator* p = nullptr;
  ~OperatorHandle() { tl_operator_free(p); }
};
struct SpectrumHandle {
  tl_spectrum* p = nullptr;
  ~SpectrumHandle() { tl_spectrum_free(p); }
};

int build_field(const ModelArgs& m, FieldHandle& f) {
  return rc_from(tl_field_from_profile(m.profile.c_str(), m.A, m.sigma,
                                       m.table.empty() ? nullptr : m.table.c_str(),
                                       m.grid(), &f.p));
}

int cmd_envelope(const ModelArgs& m, double tol, double omega, long max_sweeps,
                 const std::string& out_dir) {
  FieldHandle f;
  if (int rc = build_field(m, f)) return rc;
  tl_envelope* env = nullptr;
  if (int rc = rc_from(tl_envelope_solve(f.p, m.d, tol, omega, max_sweeps, &env))) return rc;
  std::unique_ptr<tl_envelope, void (*)(tl_envelope*)> env_guard(env, tl_envelope_free);

  double comp = 0, curv = 0;
  long iters = 0;
  tl_envelope_stats(env, &comp, &curv, &iters);
  double R = 0;
  if (int rc = rc_from(tl_tunneling_target(f.p, env, &R))) return rc;

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    std::fprintf(stderr, "error: cannot create %s: %s\n", out_dir.c_str(),
                 ec.message().c_str());
    return 1;
  }
  FieldHandle pf;
  if (int rc = rc_from(tl_envelope_field(env, &pf.p))) return rc;
  const std::string path = out_dir + "/envelope.csv";
  if (int rc = rc_from(tl_field_to_csv(pf.p, path.c_str()))) return rc;

  std::printf("N = %d\n", m.grid());
  std::printf("iterations = %ld\n", iters);
  std::printf("complementarity_residual = %.12g\n", comp);
  std::printf("curvature_residual = %.12g\n", curv);
  std::printf("R = %.12g\n", R);
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_operator(const ModelArgs& m) {
  FieldHandle f;
  if (int rc = build_field(m, f)) return rc;
  ModelHandle model;
  if (int rc = rc_from(tl_model_create(f.p, m.k, m.d, &model.p))) return rc;
  OperatorHandle op;
  if (int rc = rc_from(tl_operator_build(model.p, &op.p))) return rc;
  double plaq = 0, trace = 0, wx = 0, wy = 0;
  if (int rc = rc_from(tl_operator_stats(op.p, &plaq, &trace, &wx, &wy))) return rc;
  std::printf("N = %d\n", m.grid());
  std::printf("flux = %d\n", m.k * m.d);
  std::printf("plaquette_flux_dev = %.12g\n", plaq);
  std::printf("trace_laplacian = %.12g\n", trace);
  std::printf("wilson_x_angle = %.12g\n", wx);
  std::printf("wilson_y_angle = %.12g\n", wy);
  return 0;
}

int cmd_spectrum(const ModelArgs& m, int q, const std::string& out_dir) {
  FieldHandle f;
  if (int rc = build_field(m, f)) return rc;
  ModelHandle model;
  if (int rc = rc_from(tl_model_create(f.p, m.k, m.d, &model.p))) return rc;
  OperatorHandle op;
  if (int rc = rc_from(tl_operator_build(model.p, &op.p))) return rc;
  SpectrumHandle spec;
  if (int rc = rc_from(tl_spectrum_solve(op.p, q, m.solver.c_str(), m.threshold(), 0,
                                         &spec.p)))
    return rc;

  int kernel = 0, small = 0;
  double thr = 0;
  if (int rc = rc_from(tl_spectrum_partition(spec.p, m.k, m.d, m.epsilon, &kernel, &small,
                                             &thr)))
    return rc;
  double logsum = 0;
  if (int rc = rc_from(tl_spectrum_logsum_small(spec.p, m.k, m.d, m.epsilon, &logsum)))
    return rc;
  double resid = 0;
  tl_spectrum_residual(spec.p, &resid);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    std::fprintf(stderr, "error: cannot create %s: %s\n", out_dir.c_str(),
                 ec.message().c_str());
    return 1;
  }
  const std::string path = out_dir + "/spectrum_k" + std::to_string(m.k) + "_q" +
                           std::to_string(q) + ".csv";
  if (int rc = rc_from(tl_spectrum_to_csv(spec.p, model.p, m.profile.c_str(), path.c_str())))
    return rc;

  std::printf("N = %d\n", m.grid());
  std::printf("window_threshold = %.12g\n", thr);
  std::printf("kernel_count = %d\n", kernel);
  std::printf("small_count = %d\n", small);
  std::printf("logsum_small = %.12g\n", logsum);
  std::printf("residual_bound = %.12g\n", resid);
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_torsion(const ModelArgs& m) {
  FieldHandle f;
  if (int rc = build_field(m, f)) return rc;
  ModelHandle model;
  if (int rc = rc_from(tl_model_create(f.p, m.k, m.d, &model.p))) return rc;
  OperatorHandle op;
  if (int rc = rc_from(tl_operator_build(model.p, &op.p))) return rc;
  SpectrumHandle spec;
  if (int rc = rc_from(tl_spectrum_solve(op.p, 1, m.solver.c_str(), m.threshold(), 0,
                                         &spec.p)))
    return rc;
  double torsion = 0;
  if (int rc = rc_from(tl_spectrum_logsum_small(spec.p, m.k, m.d, m.epsilon, &torsion)))
    return rc;
  double gram = 0;
  if (int rc = rc_from(tl_gram_log_det(model.p, &gram))) return rc;

  FieldHandle zero;
  if (int rc = rc_from(tl_field_create(m.grid(), &zero.p))) return rc;
  ModelHandle flat;
  if (int rc = rc_from(tl_model_create(zero.p, m.k, m.d, &flat.p))) return rc;
  double lfun = 0;
  if (int rc = rc_from(tl_l_functional(model.p, flat.p, &lfun))) return rc;

  std::printf("N = %d\n", m.grid());
  std::printf("truncated_torsion = %.12g\n", torsion);
  std::printf("gram_log_det = %.12g\n", gram);
  std::printf("l_functional_vs_flat = %.12g\n", lfun);
  return 0;
}

int cmd_quillen(const ModelArgs& m) {
  FieldHandle f;
  if (int rc = build_field(m, f)) return rc;
  ModelHandle model;
  if (int rc = rc_from(tl_model_create(f.p, m.k, m.d, &model.p))) return rc;
  FieldHandle zero;
  if (int rc = rc_from(tl_field_create(m.grid(), &zero.p))) return rc;
  ModelHandle flat;
  if (int rc = rc_from(tl_model_create(zero.p, m.k, m.d, &flat.p))) return rc;

  double anomaly = 0, tf = 0, tg = 0, gf = 0, gg = 0;
  if (int rc = rc_from(tl_quillen_anomaly(model.p, flat.p, m.epsilon, m.solver.c_str(),
                                          &anomaly, &tf, &tg, &gf, &gg)))
    return rc;
  std::printf("N = %d\n", m.grid());
  std::printf("torsion_f = %.12g\n", tf);
  std::printf("torsion_flat = %.12g\n", tg);
  std::printf("gram_f = %.12g\n", gf);
  std::printf("gram_flat = %.12g\n", gg);
  std::printf("anomaly = %.12g\n", anomaly);
  std::printf("anomaly_over_k2 = %.12g\n", anomaly / (static_cast<double>(m.k) * m.k));
  return 0;
}

struct SweepArgs {
  std::string config_path;
  std::string profile, A, sigma, table, d, k, N, epsilon, solver, threads, seed, out;
};

int cmd_sweep(const SweepArgs& a) {
  tl_config* cfg = nullptr;
  if (!a.config_path.empty()) {
    std::ifstream in(a.config_path);
    if (!in) {
      std::fprintf(stderr, "error: cannot read config file %s\n", a.config_path.c_str());
      return 2;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    if (int rc = rc_from(tl_config_parse(ss.str().c_str(), &cfg))) return rc;
  } else {
    if (int rc = rc_from(tl_config_default(&cfg))) return rc;
  }
  std::unique_ptr<tl_config, void (*)(tl_config*)> cfg_guard(cfg, tl_config_free);

  auto override_key = [&](const char* key, const std::string& val) -> int {
    if (val.empty()) return 0;
    return rc_from(tl_config_set(cfg, key, val.c_str()));
  };
  if (int rc = override_key("run.profile", a.profile)) return rc;
  if (int rc = override_key("run.A", a.A)) return rc;
  if (int rc = override_key("run.sigma", a.sigma)) return rc;
  if (int rc = override_key("run.table", a.table)) return rc;
  if (int rc = override_key("run.d", a.d)) return rc;
  if (int rc = override_key("run.k", a.k)) return rc;
  if (int rc = override_key("run.N", a.N)) return rc;
  if (int rc = override_key("run.epsilon", a.epsilon)) return rc;
  if (int rc = override_key("run.solver", a.solver)) return rc;
  if (int rc = override_key("run.threads", a.threads)) return rc;
  if (int rc = override_key("run.seed", a.seed)) return rc;
  if (int rc = override_key("output.dir", a.out)) return rc;

  if (int rc = rc_from(tl_sweep_run(cfg, nullptr))) return rc;
  std::printf("sweep complete\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tunnellab: spectral laboratory for high powers of a line bundle on the flat torus"};
  app.set_version_flag("--version", std::string(tl_version()));
  app.require_subcommand(1);

  ModelArgs env_args;
  double env_tol = 1e-10, env_omega = 1.8;
  long env_sweeps = 2000000;
  std::string env_out = ".";
  CLI::App* env_cmd = app.add_subcommand("envelope", "solve the curvature obstacle problem");
  add_model_flags(env_cmd, env_args, false);
  env_cmd->add_option("--tol", env_tol, "residual tolerance");
  env_cmd->add_option("--omega", env_omega, "SOR relaxation in [1,2)");
  env_cmd->add_option("--max-sweeps", env_sweeps, "sweep budget");
  env_cmd->add_option("--out", env_out, "output directory");

  ModelArgs op_args;
  CLI::App* op_cmd = app.add_subcommand("operator", "assemble the dbar operator and print invariants");
  add_model_flags(op_cmd, op_args, true);

  ModelArgs spec_args;
  int spec_q = 1;
  std::string spec_out = ".";
  CLI::App* spec_cmd = app.add_subcommand("spectrum", "eigenvalues and window partition");
  add_model_flags(spec_cmd, spec_args, true);
  spec_cmd->add_option("--q", spec_q, "Laplacian degree: 0 or 1")->check(CLI::Range(0, 1));
  spec_cmd->add_option("--out", spec_out, "output directory");

  ModelArgs tor_args;
  CLI::App* tor_cmd = app.add_subcommand("torsion", "truncated torsion and Gram determinant");
  add_model_flags(tor_cmd, tor_args, true);

  ModelArgs qui_args;
  CLI::App* qui_cmd = app.add_subcommand("quillen", "anomaly against the flat weight");
  add_model_flags(qui_cmd, qui_args, true);

  SweepArgs sweep_args;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "full k-sweep driven by a config file");
  sweep_cmd->add_option("--config", sweep_args.config_path, "config file path");
  sweep_cmd->add_option("--profile", sweep_args.profile, "override run.profile");
  sweep_cmd->add_option("--A", sweep_args.A, "override run.A");
  sweep_cmd->add_option("--sigma", sweep_args.sigma, "override run.sigma");
  sweep_cmd->add_option("--table", sweep_args.table, "override run.table");
  sweep_cmd->add_option("--d", sweep_args.d, "override run.d");
  sweep_cmd->add_option("--k", sweep_args.k, "override run.k (comma list)");
  sweep_cmd->add_option("--N", sweep_args.N, "override run.N (comma list)");
  sweep_cmd->add_option("--epsilon", sweep_args.epsilon, "override run.epsilon");
  sweep_cmd->add_option("--solver", sweep_args.solver, "override run.solver");
  sweep_cmd->add_option("--threads", sweep_args.threads, "override run.threads");
  sweep_cmd->add_option("--seed", sweep_args.seed, "override run.seed");
  sweep_cmd->add_option("--out", sweep_args.out, "override output.dir");

  int st_verbose = 0;
  CLI::App* st_cmd = app.add_subcommand("selftest", "run the internal invariant checks");
  st_cmd->add_flag("--verbose", st_verbose, "print one line per check");

  ModelArgs qm_args;
  double qm_x0 = 0.5, qm_y0 = 0.5, qm_width = 0.25;
  CLI::App* qm_cmd = app.add_subcommand("quasimode", "localized trial section Rayleigh quotient");
  add_model_flags(qm_cmd, qm_args, true);
  qm_cmd->add_option("--x0", qm_x0, "center x in [0,1)");
  qm_cmd->add_option("--y0", qm_y0, "center y in [0,1)");
  qm_cmd->add_option("--width", qm_width, "cutoff radius");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (env_cmd->parsed()) return cmd_envelope(env_args, env_tol, env_omega, env_sweeps, env_out);
  if (op_cmd->parsed()) return cmd_operator(op_args);
  if (spec_cmd->parsed()) return cmd_spectrum(spec_args, spec_q, spec_out);
  if (tor_cmd->parsed()) return cmd_torsion(tor_args);
  if (qui_cmd->parsed()) return cmd_quillen(qui_args);
  if (sweep_cmd->parsed()) return cmd_sweep(sweep_args);
  if (qm_cmd->parsed()) {
    FieldHandle f;
    if (int rc = build_field(qm_args, f)) return rc;
    ModelHandle model;
    if (int rc = rc_from(tl_model_create(f.p, qm_args.k, qm_args.d, &model.p))) return rc;
    double quotient = 0, mass = 0;
    if (int rc = rc_from(tl_quasimode(model.p, qm_x0, qm_y0, qm_width, &quotient, &mass)))
      return rc;
    std::printf("N = %d\n", qm_args.grid());
    std::printf("quotient = %.12g\n", quotient);
    std::printf("mass = %.12g\n", mass);
    return 0;
  }
  if (st_cmd->parsed()) return rc_from(tl_selftest(st_verbose));
  return 2;
}
