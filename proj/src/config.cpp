#include "chq/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace chq {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string shortest(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw ConfigError(key, "expected a number, got '" + v + "'");
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw ConfigError(key, "expected an integer, got '" + v + "'");
  return x;
}

struct Entry {
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <class T>
Entry real_entry(const std::string& key, T ExperimentConfig::*m) {
  return {[key, m](ExperimentConfig& c, const std::string& v) {
            c.*m = to_double(key, v);
          },
          [m](const ExperimentConfig& c) { return shortest(c.*m); }};
}

template <class T>
Entry int_entry(const std::string& key, T ExperimentConfig::*m) {
  return {[key, m](ExperimentConfig& c, const std::string& v) {
            c.*m = T(to_int(key, v));
          },
          [m](const ExperimentConfig& c) { return std::to_string(c.*m); }};
}

Entry choice_entry(const std::string& key, std::string ExperimentConfig::*m,
                   std::vector<std::string> allowed) {
  return {[key, m, allowed](ExperimentConfig& c, const std::string& v) {
            for (const std::string& a : allowed)
              if (a == v) {
                c.*m = v;
                return;
              }
            throw ConfigError(key, "unsupported value '" + v + "'");
          },
          [m](const ExperimentConfig& c) { return c.*m; }};
}

const std::map<std::string, Entry>& table() {
  static const std::map<std::string, Entry> t = [] {
    std::map<std::string, Entry> m;
    using C = ExperimentConfig;
    m["grid.n"] = int_entry("grid.n", &C::grid_n);
    m["grid.L"] = real_entry("grid.L", &C::grid_half_length);
    m["potential.A"] =
        choice_entry("potential.A", &C::vector_potential, {"zero", "standard"});
    m["potential.V"] = choice_entry("potential.V", &C::scalar_potential,
                                    {"constant", "ring_well", "expression"});
    m["potential.lambda"] = real_entry("potential.lambda", &C::lambda);
    m["potential.v0"] = real_entry("potential.v0", &C::ring_v0);
    m["potential.a"] = real_entry("potential.a", &C::ring_a);
    m["potential.b"] = real_entry("potential.b", &C::ring_b);
    m["potential.r0"] = real_entry("potential.r0", &C::ring_r0);
    m["potential.expression"] = {
        [](C& c, const std::string& v) { c.expression = v; },
        [](const C& c) { return c.expression; }};
    m["symmetry.m"] = int_entry("symmetry.m", &C::sym_m);
    m["symmetry.j"] = int_entry("symmetry.j", &C::sym_j);
    m["epsilon.sweep"] = {
        [](C& c, const std::string& v) {
          try {
            c.epsilon_sweep = parse_list(v);
          } catch (const Error& e) {
            throw ConfigError("epsilon.sweep", e.what());
          }
        },
        [](const C& c) {
          std::string s;
          for (double e : c.epsilon_sweep) s += (s.empty() ? "" : ", ") + shortest(e);
          return s;
        }};
    m["solver.tol_grad"] = real_entry("solver.tol_grad", &C::tol_grad);
    m["solver.max_iter"] = int_entry("solver.max_iter", &C::max_iter);
    m["solver.step_rule"] =
        choice_entry("solver.step_rule", &C::step_rule, {"bb", "fixed"});
    m["solver.fixed_step"] = real_entry("solver.fixed_step", &C::fixed_step);
    m["solver.check_every"] = int_entry("solver.check_every", &C::check_every);
    m["cutoff.exponent"] = real_entry("cutoff.exponent", &C::cutoff_exponent);
    m["cutoff.scale"] = real_entry("cutoff.scale", &C::cutoff_scale);
    m["multistart.seeds"] = {
        [](C& c, const std::string& v) {
          c.seeds.clear();
          std::stringstream ss(v);
          std::string item;
          while (std::getline(ss, item, ';')) {
            if (trim(item).empty()) continue;
            try {
              c.seeds.push_back(parse_point(item));
            } catch (const Error& e) {
              throw ConfigError("multistart.seeds", e.what());
            }
          }
        },
        [](const C& c) {
          std::string s;
          for (const Point3& p : c.seeds) {
            if (!s.empty()) s += "; ";
            s += shortest(p[0]) + "," + shortest(p[1]) + "," + shortest(p[2]);
          }
          return s;
        }};
    m["multistart.perturbations"] =
        int_entry("multistart.perturbations", &C::seed_perturbations);
    m["multistart.delta_rel"] = real_entry("multistart.delta_rel", &C::delta_rel);
    m["multistart.dedup_tol"] = real_entry("multistart.dedup_tol", &C::dedup_tol);
    m["concentrate.truncation"] =
        real_entry("concentrate.truncation", &C::truncation);
    m["output.dir"] = {[](C& c, const std::string& v) { c.output_dir = v; },
                       [](const C& c) { return c.output_dir; }};
    m["rng.seed"] = int_entry("rng.seed", &C::rng_seed);
    return m;
  }();
  return t;
}

void check(const ExperimentConfig& c) {
  if (c.grid_n < 8) throw ConfigError("grid.n", "must be at least 8");
  if (!(c.grid_half_length > 0.0)) throw ConfigError("grid.L", "must be positive");
  if (c.sym_m < 1) throw ConfigError("symmetry.m", "must be at least 1");
  if (c.sym_j < 0 || c.sym_j >= c.sym_m)
    throw ConfigError("symmetry.j", "must lie in [0, m)");
  if (c.epsilon_sweep.empty())
    throw ConfigError("epsilon.sweep", "must not be empty");
  for (double e : c.epsilon_sweep)
    if (!(e > 0.0)) throw ConfigError("epsilon.sweep", "values must be positive");
  if (!(c.tol_grad > 0.0)) throw ConfigError("solver.tol_grad", "must be positive");
  if (c.max_iter < 1) throw ConfigError("solver.max_iter", "must be at least 1");
  if (c.check_every < 1)
    throw ConfigError("solver.check_every", "must be at least 1");
  if (!(c.fixed_step > 0.0))
    throw ConfigError("solver.fixed_step", "must be positive");
  if (!(c.lambda > 0.0)) throw ConfigError("potential.lambda", "must be positive");
  if (!(c.cutoff_scale > 0.0)) throw ConfigError("cutoff.scale", "must be positive");
  if (c.seed_perturbations < 0)
    throw ConfigError("multistart.perturbations", "must be nonnegative");
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    double x = 0.0;
    const auto r = std::from_chars(item.data(), item.data() + item.size(), x);
    if (r.ec != std::errc() || r.ptr != item.data() + item.size())
      throw Error("not a number: '" + item + "'");
    out.push_back(x);
  }
  return out;
}

Point3 parse_point(const std::string& text) {
  const std::vector<double> v = parse_list(text);
  if (v.size() != 3) throw Error("expected x,y,z, got '" + trim(text) + "'");
  return {v[0], v[1], v[2]};
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::stringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(line, "line " + std::to_string(lineno) + " has no '='");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = table().find(key);
    if (it == table().end()) throw ConfigError(key, "unknown key");
    it->second.set(c, value);
  }
  check(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize(const ExperimentConfig& c) {
  std::string out;
  for (const auto& [key, entry] : table())
    out += key + " = " + entry.get(c) + "\n";
  return out;
}

}  // namespace chq
