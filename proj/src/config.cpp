#include "tunnellab/config.hpp"

#include "tunnellab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>

namespace tunnel {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, int line) {
  try {
    size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(line, "expected a number, got '" + v + "'");
  }
}

long parse_long(const std::string& v, int line) {
  try {
    size_t pos = 0;
    long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(line, "expected an integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(line, "expected true/false, got '" + v + "'");
}

std::vector<int> parse_int_list(const std::string& v, int line) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(line, "empty entry in list '" + v + "'");
    out.push_back(static_cast<int>(parse_long(item, line)));
  }
  if (out.empty()) throw ConfigError(line, "empty list");
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, int)>;

const std::map<std::string, Setter>& setter_registry() {
  static const std::map<std::string, Setter> reg = {
      {"run.profile",
       [](RunConfig& c, const std::string& v, int ln) {
         if (!profile_known(v)) throw ConfigError(ln, "unknown profile '" + v + "'");
         c.profile.name = v;
       }},
      {"run.A", [](RunConfig& c, const std::string& v, int ln) { c.profile.A = parse_double(v, ln); }},
      {"run.sigma",
       [](RunConfig& c, const std::string& v, int ln) {
         c.profile.sigma = parse_double(v, ln);
         if (!(c.profile.sigma > 0.0)) throw ConfigError(ln, "sigma must be positive");
       }},
      {"run.table", [](RunConfig& c, const std::string& v, int) { c.profile.table_path = v; }},
      {"run.d",
       [](RunConfig& c, const std::string& v, int ln) {
         c.d = static_cast<int>(parse_long(v, ln));
         if (c.d < 1) throw ConfigError(ln, "degree d must be >= 1");
       }},
      {"run.k",
       [](RunConfig& c, const std::string& v, int ln) {
         c.k = parse_int_list(v, ln);
         for (int x : c.k)
           if (x < 1) throw ConfigError(ln, "k entries must be >= 1");
       }},
      {"run.N",
       [](RunConfig& c, const std::string& v, int ln) {
         c.N = parse_int_list(v, ln);
         for (int x : c.N)
           if (x < 4) throw ConfigError(ln, "N entries must be >= 4");
       }},
      {"run.c",
       [](RunConfig& c, const std::string& v, int ln) {
         c.n_rule_c = parse_double(v, ln);
         if (!(c.n_rule_c >= 2.0)) throw ConfigError(ln, "grid rule constant c must be >= 2");
       }},
      {"run.epsilon",
       [](RunConfig& c, const std::string& v, int ln) {
         c.epsilon = parse_double(v, ln);
         if (!(c.epsilon > 0.0 && c.epsilon < 1.0))
           throw ConfigError(ln, "epsilon must lie in (0,1)");
       }},
      {"run.solver",
       [](RunConfig& c, const std::string& v, int ln) {
         if (v != "auto" && v != "dense" && v != "iterative")
           throw ConfigError(ln, "solver must be auto, dense or iterative");
         c.solver = v;
       }},
      {"run.threads",
       [](RunConfig& c, const std::string& v, int ln) {
         c.threads = static_cast<int>(parse_long(v, ln));
         if (c.threads < 0) throw ConfigError(ln, "threads must be >= 0");
       }},
      {"run.seed",
       [](RunConfig& c, const std::string& v, int ln) {
         const long s = parse_long(v, ln);
         if (s < 0) throw ConfigError(ln, "seed must be >= 0");
         c.seed = static_cast<unsigned long long>(s);
       }},
      {"envelope.tol",
       [](RunConfig& c, const std::string& v, int ln) {
         c.envelope_tol = parse_double(v, ln);
         if (!(c.envelope_tol > 0.0)) throw ConfigError(ln, "tol must be positive");
       }},
      {"envelope.omega",
       [](RunConfig& c, const std::string& v, int ln) {
         c.envelope_omega = parse_double(v, ln);
         if (!(c.envelope_omega >= 1.0 && c.envelope_omega < 2.0))
           throw ConfigError(ln, "omega must lie in [1,2)");
       }},
      {"envelope.max_sweeps",
       [](RunConfig& c, const std::string& v, int ln) {
         c.envelope_max_sweeps = parse_long(v, ln);
         if (c.envelope_max_sweeps < 1) throw ConfigError(ln, "max_sweeps must be >= 1");
       }},
      {"spectrum.residual_tol",
       [](RunConfig& c, const std::string& v, int ln) {
         c.residual_tol = parse_double(v, ln);
         if (!(c.residual_tol > 0.0 && c.residual_tol < 1e-3))
           throw ConfigError(ln, "residual_tol must lie in (0, 1e-3)");
       }},
      {"spectrum.dense_ceiling",
       [](RunConfig& c, const std::string& v, int ln) {
         c.dense_ceiling = static_cast<int>(parse_long(v, ln));
         if (c.dense_ceiling < 16) throw ConfigError(ln, "dense_ceiling must be >= 16");
       }},
      {"spectrum.shift",
       [](RunConfig& c, const std::string& v, int ln) {
         c.shift = parse_double(v, ln);
         if (!(c.shift < 0.0)) throw ConfigError(ln, "shift must be negative");
       }},
      {"output.dir", [](RunConfig& c, const std::string& v, int) { c.out_dir = v; }},
      {"output.spectra",
       [](RunConfig& c, const std::string& v, int ln) { c.write_spectra = parse_bool(v, ln); }},
      {"output.density",
       [](RunConfig& c, const std::string& v, int ln) { c.write_density = parse_bool(v, ln); }},
  };
  return reg;
}

void apply_key(RunConfig& cfg, const std::string& dotted, const std::string& value, int line) {
  const auto& reg = setter_registry();
  auto it = reg.find(dotted);
  if (it == reg.end()) throw ConfigError(line, "unknown key '" + dotted + "'");
  it->second(cfg, value, line);
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  std::vector<std::string> seen;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "run" && section != "envelope" && section != "spectrum" &&
          section != "output")
        throw ConfigError(line, "unknown section '" + section + "'");
      continue;
    }
    const size_t eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected key = value");
    if (section.empty()) throw ConfigError(line, "key before any [section] header");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "empty key");
    const std::string dotted = section + "." + key;
    if (std::find(seen.begin(), seen.end(), dotted) != seen.end())
      throw ConfigError(line, "duplicate key '" + dotted + "'");
    seen.push_back(dotted);
    apply_key(cfg, dotted, value, line);
  }
  return cfg;
}

void config_set(RunConfig& cfg, const std::string& dotted_key, const std::string& value) {
  apply_key(cfg, dotted_key, value, 0);
}

void validate_config(const RunConfig& cfg) {
  if (cfg.k.empty()) throw ConfigError(0, "k list is empty");
  for (size_t i = 1; i < cfg.k.size(); ++i)
    if (cfg.k[i] <= cfg.k[i - 1])
      throw ConfigError(0, "k list must be strictly increasing");
  if (!cfg.N.empty() && cfg.N.size() != cfg.k.size())
    throw ConfigError(0, "N list has " + std::to_string(cfg.N.size()) + " entries but k has " +
                             std::to_string(cfg.k.size()));
  if (cfg.profile.name == "table" && cfg.profile.table_path.empty())
    throw ConfigError(0, "table profile needs run.table = <path>");
  for (size_t i = 0; i < cfg.k.size(); ++i) {
    const long n = resolved_grid(cfg, static_cast<int>(i));
    const long flux = static_cast<long>(cfg.k[i]) * cfg.d;
    if (n * n <= 2 * flux)
      throw ConfigError(0, "flux bound violated: N=" + std::to_string(n) + " with k=" +
                               std::to_string(cfg.k[i]) + ", d=" + std::to_string(cfg.d) +
                               " needs N^2 > 2*k*d");
  }
}

int resolved_grid(const RunConfig& cfg, int i) {
  if (!cfg.N.empty()) return cfg.N[static_cast<size_t>(i)];
  const double kd = static_cast<double>(cfg.k[static_cast<size_t>(i)]) * cfg.d;
  return static_cast<int>(std::ceil(cfg.n_rule_c * std::sqrt(kd)));
}

int resolved_threads(const RunConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("TUNNELLAB_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return 1;
}

std::string config_to_text(const RunConfig& cfg) {
  std::ostringstream o;
  o.precision(17);  // %g-style default float keeps this a lossless round trip
  o << "[run]\n";
  o << "profile = " << cfg.profile.name << "\n";
  o << "A = " << cfg.profile.A << "\n";
  o << "sigma = " << cfg.profile.sigma << "\n";
  if (!cfg.profile.table_path.empty()) o << "table = " << cfg.profile.table_path << "\n";
  o << "d = " << cfg.d << "\n";
  o << "k = ";
  for (size_t i = 0; i < cfg.k.size(); ++i) o << (i ? "," : "") << cfg.k[i];
  o << "\n";
  if (!cfg.N.empty()) {
    o << "N = ";
    for (size_t i = 0; i < cfg.N.size(); ++i) o << (i ? "," : "") << cfg.N[i];
    o << "\n";
  }
  o << "c = " << cfg.n_rule_c << "\n";
  o << "epsilon = " << cfg.epsilon << "\n";
  o << "solver = " << cfg.solver << "\n";
  o << "threads = " << cfg.threads << "\n";
  o << "seed = " << cfg.seed << "\n";
  o << "[envelope]\n";
  o << "tol = " << cfg.envelope_tol << "\n";
  o << "omega = " << cfg.envelope_omega << "\n";
  o << "max_sweeps = " << cfg.envelope_max_sweeps << "\n";
  o << "[spectrum]\n";
  o << "residual_tol = " << cfg.residual_tol << "\n";
  o << "dense_ceiling = " << cfg.dense_ceiling << "\n";
  o << "shift = " << cfg.shift << "\n";
  o << "[output]\n";
  o << "dir = " << cfg.out_dir << "\n";
  o << "spectra = " << (cfg.write_spectra ? "true" : "false") << "\n";
  o << "density = " << (cfg.write_density ? "true" : "false") << "\n";
  return o.str();
}

}  // namespace tunnel
