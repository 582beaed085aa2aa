#include "tunnellab/sweep.hpp"

#include "tunnellab/bundle.hpp"
#include "tunnellab/energy.hpp"
#include "tunnellab/envelope.hpp"
#include "tunnellab/errors.hpp"
#include "tunnellab/spectrum.hpp"
#include "tunnellab/torsion.hpp"
#include "tunnellab/version.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace tunnel {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

void write_text(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

std::string results_csv(const std::vector<SweepRow>& rows) {
  std::string s = "k,d,N,profile,epsilon,quantity,value\n";
  for (const auto& r : rows) {
    s += std::to_string(r.k) + "," + std::to_string(r.d) + "," + std::to_string(r.N) + "," +
         r.profile + "," + fmt(r.epsilon) + "," + r.quantity + "," + fmt(r.value) + "\n";
  }
  return s;
}

std::string spectrum_csv(const SpectrumResult& spec, int k, int d, int N,
                         const std::string& profile) {
  std::string s = "k,d,N,profile,q,index,eigenvalue\n";
  const std::string head = std::to_string(k) + "," + std::to_string(d) + "," +
                           std::to_string(N) + "," + profile + "," + std::to_string(spec.q);
  for (size_t i = 0; i < spec.eigenvalues.size(); ++i)
    s += head + "," + std::to_string(i) + "," + fmt(spec.eigenvalues[i]) + "\n";
  return s;
}

std::string envelope_csv(const ScalarField& f, const EnvelopeResult& env) {
  std::string s = "j,l,f,envelope,contact\n";
  const int N = f.N();
  for (int j = 0; j < N; ++j)
    for (int l = 0; l < N; ++l) {
      const int a = j * N + l;
      s += std::to_string(j) + "," + std::to_string(l) + "," + fmt(f.v[a]) + "," +
           fmt(env.envelope.v[a]) + "," + std::to_string(static_cast<int>(env.contact[a])) +
           "\n";
    }
  return s;
}

std::string density_csv(const std::vector<double>& rho, int N) {
  std::string s = "j,l,value\n";
  for (int j = 0; j < N; ++j)
    for (int l = 0; l < N; ++l)
      s += std::to_string(j) + "," + std::to_string(l) + "," + fmt(rho[j * N + l]) + "\n";
  return s;
}

struct EnvelopeEntry {
  ScalarField f;
  EnvelopeResult env;
  double orthogonality = 0.0;
};

struct PerK {
  std::vector<SweepRow> rows;
  std::vector<std::pair<std::string, std::string>> files;  // name, bytes
  std::string error;  // nonempty on failure
};

SpectrumResult solve_by_mode(const DbarOperator& op, int q, double thr, bool vectors,
                             const std::string& mode, const SolverOptions& opts) {
  if (mode == "dense") return eigensolve_dense(op, q, vectors, opts);
  return eigensolve_window(op, q, thr, vectors, opts);
}

PerK sweep_one_k(const RunConfig& cfg, int k, int N, const EnvelopeEntry& ee) {
  PerK out;
  const int d = cfg.d;
  const std::string& prof = cfg.profile.name;
  const double eps = cfg.epsilon;
  auto row = [&](const std::string& q, double v) {
    out.rows.push_back({k, d, N, prof, eps, q, v});
  };

  SolverOptions opts;
  opts.dense_ceiling = cfg.dense_ceiling;
  opts.residual_tol = cfg.residual_tol;
  opts.shift = cfg.shift;
  opts.seed = cfg.seed;

  const TorusGrid grid(N);
  const LineBundleModel model_f(grid, k, d, ee.f);
  const LineBundleModel flat(grid, k, d, ScalarField(grid));
  const DbarOperator op_f = build_dbar(model_f);
  const double thr = std::pow(static_cast<double>(k), 1.0 - eps);

  const bool vectors = cfg.write_density;
  const SpectrumResult spec1 = solve_by_mode(op_f, 1, thr, vectors, cfg.solver, opts);
  const SpectrumResult spec0 = solve_by_mode(op_f, 0, thr, false, cfg.solver, opts);
  const ThresholdPartition part1 = partition_small(spec1, k, d, eps);
  const ThresholdPartition part0 = partition_small(spec0, k, d, eps);
  const double logsum = truncated_torsion(spec1, part1);

  const std::vector<std::vector<cdouble>> basis = reference_kernel_basis(flat);
  const double gram_f = gram_log_det(basis, model_f);
  const double gram_0 = gram_log_det(basis, flat);

  const DbarOperator op_0 = build_dbar(flat);
  const SpectrumResult spec_g1 = solve_by_mode(op_0, 1, thr, false, cfg.solver, opts);
  const ThresholdPartition part_g1 = partition_small(spec_g1, k, d, eps);
  const double torsion_0 = truncated_torsion(spec_g1, part_g1);

  const double anomaly = (logsum - gram_f) - (torsion_0 - gram_0);

  row("N", N);
  row("window_threshold", thr);
  row("kernel_dim", k * d);
  row("lambda_min_pos_q1", spec1.eigenvalues[static_cast<size_t>(k) * d]);
  row("small_count_q0", part0.small_end - part0.small_begin);
  row("small_count_q1", part1.small_end - part1.small_begin);
  row("count_over_k", static_cast<double>(part1.small_end - part1.small_begin) / k);
  row("logsum_q1", logsum);
  row("logsum_over_k2", logsum / (static_cast<double>(k) * k));
  row("residual_bound_q1", spec1.residual_bound);
  row("gram_log_det", gram_f);
  row("gram_log_det_flat", gram_0);
  row("l_functional", -gram_f + gram_0);
  row("anomaly", anomaly);
  row("anomaly_over_k2", anomaly / (static_cast<double>(k) * k));
  row("theta_angle", theta_crosscheck(flat));

  row("R_target", tunneling_target(ee.f, ee.env));
  row("energy_f_0", mixed_energy(ee.f, ScalarField(grid), d));
  row("energy_env_f", mixed_energy(ee.env.envelope, ee.f, d));
  row("envelope_iterations", static_cast<double>(ee.env.iterations));
  row("envelope_residual", ee.env.residual);
  row("envelope_curvature_residual", ee.env.curvature_residual);
  row("envelope_orthogonality", ee.orthogonality);

  if (cfg.write_spectra) {
    out.files.emplace_back("spectrum_k" + std::to_string(k) + "_q0.csv",
                           spectrum_csv(spec0, k, d, N, prof));
    out.files.emplace_back("spectrum_k" + std::to_string(k) + "_q1.csv",
                           spectrum_csv(spec1, k, d, N, prof));
  }
  if (cfg.write_density && part1.small_end > part1.small_begin) {
    const std::vector<double> rho =
        one_point_density(spec1, part1.small_begin, part1.small_end);
    out.files.emplace_back("density_k" + std::to_string(k) + "_q1.csv", density_csv(rho, N));
  }
  return out;
}

}  // namespace

FitResult fit_rate(const std::vector<std::pair<int, double>>& samples) {
  if (samples.size() < 3)
    throw std::invalid_argument("rate fit needs at least 3 samples, got " +
                                std::to_string(samples.size()));
  const double n = static_cast<double>(samples.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [k, y] : samples) {
    const double x = 1.0 / k;
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double det = n * sxx - sx * sx;
  if (std::abs(det) < 1e-300) throw std::invalid_argument("rate fit is degenerate: identical k values");
  FitResult fit;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy * sxx - sx * sxy) / det;
  fit.samples = static_cast<int>(samples.size());
  double ss_res = 0, ss_tot = 0;
  const double mean = sy / n;
  for (const auto& [k, y] : samples) {
    const double pred = fit.intercept + fit.slope / k;
    ss_res += (y - pred) * (y - pred);
    ss_tot += (y - mean) * (y - mean);
  }
  fit.r2 = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

SweepResult run_sweep(const RunConfig& cfg) {
  validate_config(cfg);
  const int threads = resolved_threads(cfg);
  const int nk = static_cast<int>(cfg.k.size());
  const int pool = std::min(threads, nk);
  set_solver_threads(std::max(1, threads / std::max(1, pool)));

  // one envelope per distinct grid; k-independent, so solved up front
  std::map<int, EnvelopeEntry> envelopes;
  std::map<int, std::string> envelope_errors;
  for (int i = 0; i < nk; ++i) {
    const int N = resolved_grid(cfg, i);
    if (envelopes.count(N) || envelope_errors.count(N)) continue;
    try {
      EnvelopeEntry ee;
      ee.f = build_profile(cfg.profile, N);
      ee.env = project_envelope(ee.f, cfg.d, cfg.envelope_tol, cfg.envelope_omega,
                                cfg.envelope_max_sweeps);
      if (!ee.env.converged)
        throw NoConvergence("envelope did not converge in " +
                            std::to_string(cfg.envelope_max_sweeps) + " sweeps at N=" +
                            std::to_string(N));
      ee.orthogonality = orthogonality_residual(ee.f, ee.env, cfg.d);
      envelopes.emplace(N, std::move(ee));
    } catch (const std::exception& ex) {
      envelope_errors.emplace(N, ex.what());
    }
  }

  // spectral work per k, isolated so one failure cannot take down the sweep
  std::vector<PerK> slots(static_cast<size_t>(nk));
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= nk) return;
      const int k = cfg.k[static_cast<size_t>(i)];
      const int N = resolved_grid(cfg, i);
      auto ee = envelopes.find(N);
      if (ee == envelopes.end()) {
        slots[static_cast<size_t>(i)].error =
            "envelope stage failed: " + envelope_errors.at(N);
        continue;
      }
      try {
        slots[static_cast<size_t>(i)] = sweep_one_k(cfg, k, N, ee->second);
      } catch (const std::exception& ex) {
        slots[static_cast<size_t>(i)].error = ex.what();
      }
    }
  };
  if (pool <= 1) {
    worker();
  } else {
    std::vector<std::thread> ts;
    for (int t = 0; t < pool; ++t) ts.emplace_back(worker);
    for (auto& t : ts) t.join();
  }

  SweepResult result;
  const std::filesystem::path dir(cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

  auto emit = [&](const std::string& name, const std::string& bytes) {
    write_text(dir / name, bytes);
    result.files.push_back(name);
  };

  for (const auto& [N, ee] : envelopes)
    emit("envelope_N" + std::to_string(N) + ".csv", envelope_csv(ee.f, ee.env));

  for (int i = 0; i < nk; ++i) {
    PerK& slot = slots[static_cast<size_t>(i)];
    if (!slot.error.empty()) {
      result.errors.emplace_back(cfg.k[static_cast<size_t>(i)], slot.error);
      continue;
    }
    for (auto& r : slot.rows) result.rows.push_back(std::move(r));
    for (auto& [name, bytes] : slot.files) emit(name, bytes);
  }

  // 1/k rate fits over whatever succeeded
  std::vector<std::pair<int, double>> logsum_samples, anomaly_samples;
  for (const auto& r : result.rows) {
    if (r.quantity == "logsum_over_k2") logsum_samples.emplace_back(r.k, r.value);
    if (r.quantity == "anomaly_over_k2") anomaly_samples.emplace_back(r.k, r.value);
  }
  std::optional<FitResult> fit_logsum, fit_anomaly;
  auto add_fit = [&](const char* tag, const FitResult& fit) {
    result.rows.push_back({0, cfg.d, 0, cfg.profile.name, cfg.epsilon,
                           std::string("fit_") + tag + "_intercept", fit.intercept});
    result.rows.push_back({0, cfg.d, 0, cfg.profile.name, cfg.epsilon,
                           std::string("fit_") + tag + "_slope", fit.slope});
    result.rows.push_back({0, cfg.d, 0, cfg.profile.name, cfg.epsilon,
                           std::string("fit_") + tag + "_r2", fit.r2});
  };
  if (logsum_samples.size() >= 3) {
    fit_logsum = fit_rate(logsum_samples);
    add_fit("logsum", *fit_logsum);
  }
  if (anomaly_samples.size() >= 3) {
    fit_anomaly = fit_rate(anomaly_samples);
    add_fit("anomaly", *fit_anomaly);
  }

  emit("results.csv", results_csv(result.rows));

  nlohmann::ordered_json man;
  man["tool"] = "tunnellab";
  man["version"] = kVersionString;
  nlohmann::ordered_json jc;
  jc["profile"] = cfg.profile.name;
  jc["A"] = cfg.profile.A;
  jc["sigma"] = cfg.profile.sigma;
  if (!cfg.profile.table_path.empty()) jc["table"] = cfg.profile.table_path;
  jc["d"] = cfg.d;
  jc["k"] = cfg.k;
  nlohmann::ordered_json grids = nlohmann::ordered_json::array();
  for (int i = 0; i < nk; ++i)
    grids.push_back({{"k", cfg.k[static_cast<size_t>(i)]}, {"N", resolved_grid(cfg, i)}});
  jc["grids"] = grids;
  jc["epsilon"] = cfg.epsilon;
  jc["solver"] = cfg.solver;
  jc["threads"] = threads;
  jc["seed"] = cfg.seed;
  man["config"] = jc;
  man["tolerances"] = {{"envelope_tol", cfg.envelope_tol},
                       {"envelope_omega", cfg.envelope_omega},
                       {"envelope_max_sweeps", cfg.envelope_max_sweeps},
                       {"residual_tol", cfg.residual_tol},
                       {"dense_ceiling", cfg.dense_ceiling},
                       {"shift", cfg.shift}};
  nlohmann::ordered_json jerr = nlohmann::ordered_json::array();
  for (const auto& [k, msg] : result.errors) jerr.push_back({{"k", k}, {"message", msg}});
  man["errors"] = jerr;
  nlohmann::ordered_json jfit;
  auto fit_json = [](const FitResult& f) {
    return nlohmann::ordered_json{
        {"intercept", f.intercept}, {"slope", f.slope}, {"r2", f.r2}, {"samples", f.samples}};
  };
  jfit["logsum_over_k2"] = fit_logsum ? fit_json(*fit_logsum) : nlohmann::ordered_json();
  jfit["anomaly_over_k2"] = fit_anomaly ? fit_json(*fit_anomaly) : nlohmann::ordered_json();
  man["fits"] = jfit;
  man["outputs"] = result.files;

  result.manifest = man.dump(2) + "\n";
  write_text(dir / "manifest.json", result.manifest);
  result.files.push_back("manifest.json");
  return result;
}

}  // namespace tunnel
