#include <tunnellab.h>

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Cleanup {
  fs::path path;
  explicit Cleanup(fs::path p) : path(std::move(p)) {}
  ~Cleanup() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("version and error channel") {
  CHECK(std::string(tl_version()).find("tunnellab") != std::string::npos);
  CHECK(tl_last_error() != nullptr);
}

TEST_CASE("null and malformed arguments return TL_EINVAL with a message") {
  CHECK(tl_field_create(-3, nullptr) == TL_EINVAL);
  tl_field* f = nullptr;
  CHECK(tl_field_create(3, &f) == TL_EINVAL);
  CHECK(std::string(tl_last_error()).size() > 0);
  CHECK(tl_field_from_profile("nosuch", 1.0, 0.15, nullptr, 16, &f) == TL_EINVAL);
  CHECK(tl_envelope_solve(nullptr, 1, 1e-10, 1.8, 1000, nullptr) == TL_EINVAL);
  tl_field_free(nullptr);  // NULL safe
}

TEST_CASE("field round trip through the data view") {
  tl_field* f = nullptr;
  REQUIRE(tl_field_create(8, &f) == TL_OK);
  int N = 0;
  REQUIRE(tl_field_size(f, &N) == TL_OK);
  CHECK(N == 8);
  double* data = nullptr;
  REQUIRE(tl_field_data(f, &data) == TL_OK);
  for (int i = 0; i < 64; ++i) data[i] = 0.5 * i;
  std::vector<double> out(64);
  REQUIRE(tl_field_read(f, out.data()) == TL_OK);
  CHECK(out[10] == 5.0);
  tl_field_free(f);
}

TEST_CASE("envelope pipeline with stats and contact flags") {
  tl_field* f = nullptr;
  REQUIRE(tl_field_from_profile("cos_y", 1.0, 0.15, nullptr, 64, &f) == TL_OK);
  tl_envelope* env = nullptr;
  REQUIRE(tl_envelope_solve(f, 1, 1e-10, 1.8, 2000000, &env) == TL_OK);
  double comp = 1, curv = 1;
  long iters = 0;
  REQUIRE(tl_envelope_stats(env, &comp, &curv, &iters) == TL_OK);
  CHECK(comp <= 1e-10);
  CHECK(curv <= 1e-10);
  CHECK(iters > 0);
  std::vector<unsigned char> contact(64 * 64);
  REQUIRE(tl_envelope_contact(env, contact.data()) == TL_OK);
  bool any0 = false, any1 = false;
  for (unsigned char c : contact) (c ? any1 : any0) = true;
  CHECK(any0);
  CHECK(any1);

  tl_field* pf = nullptr;
  REQUIRE(tl_envelope_field(env, &pf) == TL_OK);
  double r = -1;
  REQUIRE(tl_tunneling_target(f, env, &r) == TL_OK);
  CHECK(r > 0.17);
  CHECK(r < 0.19);
  double e = 0, dn = 0;
  REQUIRE(tl_mixed_energy(pf, f, 1, &e) == TL_OK);
  REQUIRE(tl_dirichlet_norm(f, &dn) == TL_OK);
  CHECK(e > 0);
  CHECK(dn > 0);
  tl_field_free(pf);
  tl_envelope_free(env);
  tl_field_free(f);
}

TEST_CASE("spectrum pipeline with partition, logsum, and csv") {
  const fs::path dir = fs::temp_directory_path() / "tunnellab_capi_spec";
  Cleanup cleanup(dir);
  fs::create_directories(dir);

  tl_field* f = nullptr;
  REQUIRE(tl_field_from_profile("cos_y", 1.0, 0.15, nullptr, 12, &f) == TL_OK);
  tl_model* m = nullptr;
  REQUIRE(tl_model_create(f, 2, 1, &m) == TL_OK);
  tl_operator* op = nullptr;
  REQUIRE(tl_operator_build(m, &op) == TL_OK);
  double dev = 1, trace = 0, wx = 0, wy = 0;
  REQUIRE(tl_operator_stats(op, &dev, &trace, &wx, &wy) == TL_OK);
  CHECK(dev <= 1e-12);
  CHECK(trace > 0);

  tl_spectrum* sp = nullptr;
  REQUIRE(tl_spectrum_solve(op, 0, "dense", 0.0, 1, &sp) == TL_OK);
  int count = 0;
  REQUIRE(tl_spectrum_count(sp, &count) == TL_OK);
  CHECK(count == 144);
  std::vector<double> ev(static_cast<size_t>(count));
  REQUIRE(tl_spectrum_values(sp, ev.data()) == TL_OK);
  CHECK(ev[0] <= ev[1]);

  // eigenvectors come back interleaved and h^2-normalized
  std::vector<double> vec(2 * 144);
  REQUIRE(tl_spectrum_vector(sp, 0, vec.data()) == TL_OK);
  double norm = 0;
  for (int i = 0; i < 144; ++i) norm += vec[2 * i] * vec[2 * i] + vec[2 * i + 1] * vec[2 * i + 1];
  CHECK(std::fabs(norm / 144.0 - 1.0) <= 1e-8);

  int kernel = 0, small = 0;
  double thr = 0;
  REQUIRE(tl_spectrum_partition(sp, 2, 1, 0.25, &kernel, &small, &thr) == TL_OK);
  CHECK(kernel == 2);
  CHECK(thr == doctest::Approx(std::pow(2.0, 0.75)).epsilon(1e-14));
  double logsum = -1;
  REQUIRE(tl_spectrum_logsum_small(sp, 2, 1, 0.25, &logsum) == TL_OK);
  if (small == 0) CHECK(logsum == 0.0);

  const std::string csv = (dir / "spec.csv").string();
  REQUIRE(tl_spectrum_to_csv(sp, m, "cos_y", csv.c_str()) == TL_OK);
  CHECK(fs::file_size(csv) > 0);

  tl_spectrum_free(sp);
  tl_operator_free(op);
  tl_model_free(m);
  tl_field_free(f);
}

TEST_CASE("domain failures map to distinct codes") {
  tl_field* f = nullptr;
  REQUIRE(tl_field_create(8, &f) == TL_OK);
  // flux bound N^2 > 2 k d fails at operator assembly for k = 32 on an 8-grid
  tl_model* m = nullptr;
  REQUIRE(tl_model_create(f, 32, 1, &m) == TL_OK);
  tl_operator* bad_op = nullptr;
  CHECK(tl_operator_build(m, &bad_op) == TL_EINVAL);
  tl_model_free(m);
  m = nullptr;
  REQUIRE(tl_model_create(f, 2, 1, &m) == TL_OK);
  // quasimode width out of range is an argument error; negative curvature on
  // the disc is a domain error
  double q = 0, mass = 0;
  CHECK(tl_quasimode(m, 0.5, 0.5, 0.9, &q, &mass) == TL_EINVAL);
  tl_model_free(m);
  tl_field_free(f);

  tl_config* c = nullptr;
  CHECK(tl_config_parse("[run]\nbogus = 1\n", &c) == TL_EINVAL);
  CHECK(std::string(tl_last_error()).find("line") != std::string::npos);
  REQUIRE(tl_config_default(&c) == TL_OK);
  CHECK(tl_config_set(c, "run.bogus", "1") == TL_EINVAL);
  CHECK(tl_config_set(c, "run.epsilon", "0.3") == TL_OK);
  tl_config_free(c);
}

TEST_CASE("theta crosscheck through the C surface") {
  tl_field* f = nullptr;
  REQUIRE(tl_field_create(32, &f) == TL_OK);
  tl_model* m = nullptr;
  REQUIRE(tl_model_create(f, 1, 1, &m) == TL_OK);
  double angle = -1;
  REQUIRE(tl_theta_crosscheck(m, &angle) == TL_OK);
  CHECK(angle >= 0);
  CHECK(angle <= 0.05);
  tl_model_free(m);
  tl_field_free(f);
}
