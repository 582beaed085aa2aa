#include "tunnellab/profiles.hpp"

#include "tunnellab/errors.hpp"

#include <cmath>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace tunnel {

namespace {

constexpr double kPi = 3.14159265358979323846;

ScalarField load_table(const std::string& path, int N) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open table file: " + path);
  long n_file = 0;
  if (!(in >> n_file)) throw IoError("table file is empty: " + path);
  if (n_file != N)
    throw std::invalid_argument("table file holds N=" + std::to_string(n_file) +
                                " but the run wants N=" + std::to_string(N));
  ScalarField f{TorusGrid(N)};
  for (int a = 0; a < N * N; ++a)
    if (!(in >> f.v[a]))
      throw IoError("table file truncated at value " + std::to_string(a) + " of " +
                    std::to_string(N * N) + ": " + path);
  f.check_finite("table profile");
  return f;
}

}  // namespace

ScalarField build_profile(const ProfileSpec& spec, int N) {
  TorusGrid grid(N);
  ScalarField f{grid};
  const double h = grid.h;

  if (spec.name == "cos_y") {
    for (int j = 0; j < N; ++j)
      for (int l = 0; l < N; ++l) f.v[j * N + l] = spec.A * std::cos(2.0 * kPi * l * h);
    return f;
  }
  if (spec.name == "cos_xy") {
    for (int j = 0; j < N; ++j)
      for (int l = 0; l < N; ++l)
        f.v[j * N + l] =
            spec.A * (std::cos(2.0 * kPi * j * h) + std::cos(2.0 * kPi * l * h));
    return f;
  }
  if (spec.name == "bump") {
    if (!(spec.sigma > 0.0 && spec.sigma <= 0.3))
      throw std::invalid_argument("bump width sigma must lie in (0, 0.3]");
    const double inv2s2 = 1.0 / (2.0 * spec.sigma * spec.sigma);
    for (int j = 0; j < N; ++j) {
      const double x = j * h;
      for (int l = 0; l < N; ++l) {
        const double y = l * h;
        double s = 0.0;
        // 5x5 images keep the periodization error below exp(-2/sigma^2)
        for (int p = -2; p <= 2; ++p)
          for (int q = -2; q <= 2; ++q) {
            const double dx = x - 0.5 - p;
            const double dy = y - 0.5 - q;
            s += std::exp(-(dx * dx + dy * dy) * inv2s2);
          }
        f.v[j * N + l] = -spec.A * s;
      }
    }
    return f;
  }
  if (spec.name == "table") {
    if (spec.table_path.empty())
      throw std::invalid_argument("table profile needs a file path");
    return load_table(spec.table_path, N);
  }
  throw std::invalid_argument("unknown profile: " + spec.name);
}

bool profile_known(const std::string& name) {
  return name == "cos_y" || name == "cos_xy" || name == "bump" || name == "table";
}

std::vector<std::string> profile_names() { return {"cos_y", "cos_xy", "bump", "table"}; }

void write_table_field(const ScalarField& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write table file: " + path);
  out << f.N() << "\n";
  char buf[64];
  for (int a = 0; a < f.grid.size(); ++a) {
    const auto r = std::to_chars(buf, buf + sizeof(buf), f.v[a]);
    out.write(buf, r.ptr - buf);
    out.put('\n');
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace tunnel
