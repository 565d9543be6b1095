#include "chq/cli.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "chq/ansatz.hpp"
#include "chq/baryorbit.hpp"
#include "chq/config.hpp"
#include "chq/experiment.hpp"
#include "chq/format.hpp"
#include "chq/groundstate.hpp"
#include "chq/solver.hpp"
#include "json.hpp"

namespace chq {

namespace {

using nlohmann::json;

struct Failure : Error {
  Failure(const std::string& what, int code) : Error(what), code(code) {}
  int code;
};

ExperimentConfig config_from(const std::string& path) {
  return path.empty() ? ExperimentConfig{} : load_config(path);
}

std::filesystem::path make_run_dir(const std::string& root) {
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%d_%H%M%S", std::localtime(&now));
  std::filesystem::path dir = std::filesystem::path(root) / ("run_" + std::string(stamp));
  for (int k = 1; std::filesystem::exists(dir); ++k)
    dir = std::filesystem::path(root) / ("run_" + std::string(stamp) + "_" + std::to_string(k));
  std::filesystem::create_directories(dir / "fields");
  return dir;
}

json point_json(const Point3& x) {
  return json::array({round12(x[0]), round12(x[1]), round12(x[2])});
}

int cmd_ground(double lambda, double tol, int nr, const std::string& out) {
  LimitOptions opts;
  opts.tol = tol;
  opts.nr = nr;
  const RadialProfile p = solve_limit(lambda, opts);
  if (!p.monotone)
    std::cerr << "warning: profile is not strictly decreasing\n";
  if (out.empty()) {
    write_profile_csv(std::cout, p);
  } else {
    write_profile_csv(out, p);
    std::cout << "lambda," << fmt(lambda) << "\nenergy," << fmt(p.energy)
              << "\niterations," << p.iterations << "\n";
  }
  return 0;
}

int cmd_ansatz(const ExperimentConfig& c, const Point3& xi, std::vector<double> sweep,
               int m, int j) {
  const Grid3 grid = build_grid(c);
  const CoulombKernel kernel(grid);
  const SymmetrySector s = make_sector(m, j);
  const double lambda = build_scalar_potential(c)(xi);
  const RadialProfile prof = solve_limit(lambda);
  std::cout << "epsilon,energy_scaled\n";
  for (double eps : sweep) {
    const Potentials p = build_potentials(c, grid, eps);
    const CutoffBump bump = make_cutoff_bump(prof, eps, build_cutoff(c));
    const double e = entrance_energy({xi, eps, s, lambda}, bump, p, kernel);
    std::cout << fmt(eps) << "," << fmt(e) << "\n";
  }
  return 0;
}

int cmd_solve(const ExperimentConfig& c, const std::string& config_text) {
  const Grid3 grid = build_grid(c);
  const CoulombKernel kernel(grid);
  const SymmetrySector s = make_sector(c.sym_m, c.sym_j);
  const SolveOptions opts = build_solve_options(c);
  const std::filesystem::path dir = make_run_dir(c.output_dir);
  {
    std::ofstream cfg(dir / "config.txt");
    cfg << config_text;
  }
  std::ofstream csv(dir / "summary.csv");
  csv << "epsilon,j,seed,energy_scaled,grad_norm_scaled,converged,duplicate_of,"
         "orbit_x,orbit_y,orbit_z\n";
  json report = json::array();
  const RadialProfile p1 = solve_limit(1.0);
  bool all_converged = true;
  for (std::size_t ie = 0; ie < c.epsilon_sweep.size(); ++ie) {
    const double eps = c.epsilon_sweep[ie];
    const Potentials p = build_potentials(c, grid, eps);
    const std::vector<Point3> seeds = c.seeds.empty() ? default_seeds(c, p.v, s) : c.seeds;
    if (seeds.empty()) throw Failure("no admissible seeds in M_tau", 1);
    MultistartOptions mo;
    mo.target = ell_and_mtau(p.v, s).ell * kGroundEnergy;
    mo.delta = c.delta_rel * kGroundEnergy;
    mo.dedup_tol = c.dedup_tol;
    mo.cutoff = build_cutoff(c);
    std::vector<SeedOutcome> outs = multistart(p, s, kernel, opts, seeds, mo);
    const double cap = c.truncation > 0.0 ? c.truncation : default_truncation(p.v);
    const ScalarField w = truncated_potential(p.v, cap);
    for (std::size_t k = 0; k < outs.size(); ++k) {
      SeedOutcome& o = outs[k];
      json rec;
      rec["epsilon"] = round12(eps);
      rec["j"] = c.sym_j;
      rec["m"] = c.sym_m;
      rec["seed"] = point_json(o.seed);
      rec["ok"] = o.ok;
      Point3 orbit{NAN, NAN, NAN};
      if (!o.ok) {
        rec["error"] = o.error;
        all_converged = false;
      } else {
        const SolveResult& r = o.result;
        if (!r.converged) all_converged = false;
        if (r.converged && eps >= 4.0 * grid.spacing * (1.0 - 1e-9)) {
          const ConcentrationReport cr = localize(r.u, eps, s, p1, p.v_func, w);
          o.result.orbit = cr.orbit;
          orbit = cr.xi;
          rec["residual_scaled"] = round12(cr.residual_scaled);
        }
        const std::string name =
            "eps" + std::to_string(ie) + "_seed" + std::to_string(k) + ".chqf";
        write_field(dir / "fields" / name, r.u);
        rec["field"] = "fields/" + name;
        rec["converged"] = r.converged;
        rec["status"] = r.status;
        rec["iterations"] = r.iterations;
        rec["energy_scaled"] = round12(r.energy_scaled);
        rec["nehari_residual"] = round12(r.nehari_residual);
        rec["grad_norm_scaled"] = round12(r.grad_norm_scaled);
        rec["hartree_window"] = round12(r.hartree_window);
        rec["in_window"] = o.in_window;
        rec["ps_safe"] = o.ps_safe;
        rec["duplicate_of"] = o.duplicate_of;
        if (r.orbit) {
          rec["orbit"] = {{"representative", point_json(orbit)},
                          {"cardinality", r.orbit->cardinality}};
        }
        csv << fmt(eps) << "," << c.sym_j << "," << k << "," << fmt(r.energy_scaled)
            << "," << fmt(r.grad_norm_scaled) << "," << (r.converged ? 1 : 0) << ","
            << o.duplicate_of << "," << fmt(orbit) << "\n";
      }
      report.push_back(rec);
    }
  }
  std::ofstream(dir / "report.json") << report.dump(2) << "\n";
  std::cout << dir.string() << "\n";
  if (!all_converged) throw Failure("at least one solve did not converge", 2);
  return 0;
}

int cmd_concentrate(const ExperimentConfig& c, const std::string& field, double eps,
                    int m, int j) {
  const ScalarField u = read_field(field);
  const SymmetrySector s = make_sector(m, j);
  const ScalarFunction v = build_scalar_potential(c);
  const ScalarField vs = ScalarField::sample(u.grid(), v);
  const double cap = c.truncation > 0.0 ? c.truncation : default_truncation(vs);
  const RadialProfile p1 = solve_limit(1.0);
  const ConcentrationReport r =
      localize(u, eps, s, p1, v, truncated_potential(vs, cap));
  json out;
  out["orbit"] = {{"representative", point_json(r.orbit.representative)},
                  {"cardinality", r.orbit.cardinality},
                  {"isotropy_in_kernel", r.orbit.isotropy_in_kernel}};
  out["xi"] = point_json(r.xi);
  out["residual_scaled"] = round12(r.residual_scaled);
  out["objective_scaled"] = round12(r.objective_scaled);
  out["candidates_considered"] = r.candidates_considered;
  out["margin"] = round12(r.margin);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_verify(const ExperimentConfig& c) {
  const std::vector<CheckResult> rs = verify_suite(c);
  bool ok = true;
  for (const CheckResult& r : rs) {
    std::printf("%-24s %s  %s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                r.detail.c_str());
    ok = ok && r.pass;
  }
  return ok ? 0 : 3;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Variational solver for the magnetic Choquard equation"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key = value experiment config")
      ->check(CLI::ExistingFile);

  auto* ground = app.add_subcommand("ground", "radial ground state of the limit problem");
  double lambda = 1.0, tol = 1e-10;
  int nr = 4096;
  std::string out;
  ground->add_option("--lambda", lambda)->required();
  ground->add_option("--tol", tol);
  ground->add_option("--nr", nr);
  ground->add_option("--out", out, "CSV path, stdout when absent");

  auto* ansatz = app.add_subcommand("ansatz", "entrance-map energy over epsilon");
  std::string xi_text = "1,0,0", sweep_text;
  double eps = 0.4;
  int m = 2, j = 0;
  ansatz->add_option("--xi", xi_text);
  ansatz->add_option("--eps", eps);
  ansatz->add_option("--m", m);
  ansatz->add_option("--j", j);
  ansatz->add_option("--sweep", sweep_text, "comma separated epsilon values");

  auto* solve = app.add_subcommand("solve", "multistart minimization over the epsilon sweep");

  auto* conc = app.add_subcommand("concentrate", "locate the concentration orbit of a field");
  std::string field;
  conc->add_option("--field", field)->required()->check(CLI::ExistingFile);
  conc->add_option("--eps", eps)->required();
  conc->add_option("--m", m);
  conc->add_option("--j", j);

  auto* verify = app.add_subcommand("verify", "invariant suite with a pass/fail table");

  for (CLI::App* sub : {ground, ansatz, solve, conc, verify})
    sub->add_option("--config", config_path, "key = value experiment config")
        ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    const ExperimentConfig c = config_from(config_path);
    if (ground->parsed()) return cmd_ground(lambda, tol, nr, out);
    if (ansatz->parsed()) {
      const std::vector<double> sweep =
          sweep_text.empty() ? std::vector<double>{eps} : parse_list(sweep_text);
      return cmd_ansatz(c, parse_point(xi_text), sweep, m, j);
    }
    if (solve->parsed()) return cmd_solve(c, serialize(c));
    if (conc->parsed()) return cmd_concentrate(c, field, eps, m, j);
    return cmd_verify(c);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const NonConvergence& e) {
    std::cerr << "no convergence: " << e.what() << " (last residual "
              << fmt(e.last_residual()) << ")\n";
    return 2;
  } catch (const Failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace chq
