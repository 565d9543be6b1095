#include "chq/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "chq/ansatz.hpp"
#include "chq/baryorbit.hpp"
#include "chq/format.hpp"
#include "chq/groundstate.hpp"

namespace chq {

Grid3 build_grid(const ExperimentConfig& c) {
  return make_grid(c.grid_n, c.grid_half_length);
}

VectorFunction build_vector_potential(const ExperimentConfig& c) {
  return c.vector_potential == "standard" ? standard_vector_potential()
                                          : zero_vector_potential();
}

ScalarFunction build_scalar_potential(const ExperimentConfig& c) {
  if (c.scalar_potential == "constant") return constant_potential(c.lambda);
  if (c.scalar_potential == "ring_well")
    return ring_well_potential({c.ring_v0, c.ring_a, c.ring_b, c.ring_r0});
  try {
    return parse_scalar_expression(c.expression);
  } catch (const Error& e) {
    throw ConfigError("potential.expression", e.what());
  }
}

Potentials build_potentials(const ExperimentConfig& c, const Grid3& grid,
                            double epsilon) {
  return make_potentials(grid, epsilon, build_vector_potential(c),
                         build_scalar_potential(c));
}

SolveOptions build_solve_options(const ExperimentConfig& c) {
  SolveOptions o;
  o.tol_grad = c.tol_grad;
  o.max_iter = c.max_iter;
  o.step_rule = c.step_rule == "fixed" ? StepRule::kFixed : StepRule::kAdaptiveBB;
  o.fixed_step = c.fixed_step;
  o.check_every = c.check_every;
  o.sweep = c.epsilon_sweep;
  return o;
}

CutoffScale build_cutoff(const ExperimentConfig& c) {
  return {c.cutoff_exponent, c.cutoff_scale};
}

std::vector<Point3> default_seeds(const ExperimentConfig& c, const ScalarField& v,
                                  const SymmetrySector& s) {
  const MinimizingSet ms = ell_and_mtau(v, s);
  const double h = v.grid().spacing;
  std::vector<Point3> reps;
  std::vector<int> comp(ms.points.size(), -1);
  for (std::size_t i = 0; i < ms.points.size(); ++i) {
    if (comp[i] >= 0) continue;
    const int id = int(reps.size());
    reps.push_back(ms.points[i]);
    std::vector<std::size_t> stack{i};
    comp[i] = id;
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      for (std::size_t b = 0; b < ms.points.size(); ++b) {
        if (comp[b] >= 0) continue;
        const Point3& p = ms.points[a];
        const Point3& q = ms.points[b];
        if (std::hypot(p[0] - q[0], p[1] - q[1], p[2] - q[2]) < 4.0 * h) {
          comp[b] = id;
          stack.push_back(b);
        }
      }
    }
  }
  // Components that are images of each other under the group are one orbit.
  std::vector<Point3> distinct;
  for (const Point3& r : reps) {
    bool seen = false;
    for (const Point3& d : distinct)
      for (const Point3& q : orbit_points(d, s, 0.5 * h))
        if (std::hypot(q[0] - r[0], q[1] - r[1], q[2] - r[2]) < 4.0 * h)
          seen = true;
    if (!seen) distinct.push_back(r);
  }
  std::mt19937_64 rng(c.rng_seed);
  std::uniform_real_distribution<double> jitter(-h, h);
  std::vector<Point3> seeds;
  for (const Point3& r : distinct) {
    seeds.push_back(r);
    for (int k = 0; k < c.seed_perturbations; ++k)
      seeds.push_back({r[0] + jitter(rng), r[1] + jitter(rng), r[2] + jitter(rng)});
  }
  return seeds;
}

ScalarField random_smooth_field(const Grid3& grid, std::mt19937_64& rng,
                                bool complex_valued, double min_width) {
  const double L = grid.half_length;
  std::uniform_real_distribution<double> center(-0.4 * L, 0.4 * L);
  std::uniform_real_distribution<double> width(min_width, 2.0 * min_width);
  std::uniform_real_distribution<double> unit(0.2, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  struct Blob {
    Point3 c;
    double w;
    cplx amp;
    Point3 wave;
  };
  std::vector<Blob> blobs;
  for (int b = 0; b < 4; ++b) {
    Blob blob;
    blob.c = {center(rng), center(rng), center(rng)};
    blob.w = width(rng);
    blob.amp = complex_valued ? std::polar(unit(rng), angle(rng)) : cplx(unit(rng));
    blob.wave = {0.0, 0.0, 0.0};
    if (complex_valued)
      for (double& k : blob.wave) k = (unit(rng) - 0.6) / blob.w;
    blobs.push_back(blob);
  }
  ScalarField out = ScalarField::sample(grid, [&](const Point3& x) {
    cplx acc = 0.0;
    for (const Blob& b : blobs) {
      double r2 = 0.0, ph = 0.0;
      for (int a = 0; a < 3; ++a) {
        const double d = x[std::size_t(a)] - b.c[std::size_t(a)];
        r2 += d * d;
        ph += b.wave[std::size_t(a)] * d;
      }
      acc += b.amp * std::exp(-0.5 * r2 / (b.w * b.w)) * std::polar(1.0, ph);
    }
    return acc;
  });
  if (!complex_valued) out.set_real(true);
  return out;
}

namespace {

CheckResult check(const std::string& name, bool pass, const std::string& detail) {
  return {name, pass, detail};
}

}  // namespace

std::vector<CheckResult> verify_suite(const ExperimentConfig& c) {
  std::vector<CheckResult> out;
  auto guard = [&out](const std::string& name, auto&& body) {
    try {
      out.push_back(body());
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("error: ") + e.what()});
    }
  };
  std::mt19937_64 rng(c.rng_seed);

  RadialProfile p1;
  guard("ground_energy", [&] {
    p1 = solve_limit(1.0);
    const double rel = std::abs(p1.energy / kGroundEnergy - 1.0);
    return check("ground_energy", rel < 1e-5, "relative gap " + fmt(rel));
  });
  guard("scaling_law", [&] {
    const ScalingReport r = scaling_check(p1, 4.0);
    const double rel = std::abs(r.energy_ratio / 8.0 - 1.0);
    return check("scaling_law", rel < 1e-3, "E_4/E_1 = " + fmt(r.energy_ratio));
  });
  guard("gaussian_coulomb", [&] {
    const Grid3 g = make_grid(64, 8.0);
    const CoulombKernel k(g);
    const ScalarField u = ScalarField::sample(g, [](const Point3& x) {
      return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
    });
    const double exact = std::pow(M_PI, 2.5) * std::sqrt(2.0);
    const double rel = std::abs(hartree_energy(u, k) / exact - 1.0);
    return check("gaussian_coulomb", rel < 1e-2, "relative error " + fmt(rel));
  });

  const Grid3 grid = build_grid(c);
  const CoulombKernel kernel(grid);
  const double eps = c.epsilon_sweep.front();
  const Potentials pot = build_potentials(c, grid, eps);
  const SymmetrySector sector = make_sector(c.sym_m, c.sym_j);
  const double width = std::max(3.0 * grid.spacing, 0.05 * grid.half_length);

  guard("nehari_projection", [&] {
    double worst_res = 0.0, worst_closed = 0.0;
    for (int t = 0; t < 5; ++t) {
      const ScalarField u = random_smooth_field(grid, rng, pot.magnetic, width);
      const ScalarField pu = nehari_project(u, pot, kernel);
      worst_res = std::max(worst_res, nehari_residual(pu, pot, kernel));
      const double direct = energy(pu, pot, kernel).total;
      worst_closed = std::max(
          worst_closed, std::abs(projected_energy(u, pot, kernel) - direct) /
                            std::abs(direct));
    }
    return check("nehari_projection", worst_res < 1e-10 && worst_closed < 1e-10,
                 "residual " + fmt(worst_res) + ", closed form " + fmt(worst_closed));
  });
  guard("gradient_consistency", [&] {
    double worst = 0.0;
    for (int t = 0; t < 3; ++t) {
      const ScalarField u = random_smooth_field(grid, rng, true, width);
      const ScalarField v = random_smooth_field(grid, rng, true, width);
      const double analytic =
          inner(euler_lagrange_residual(u, pot, kernel), v).real();
      const double step = 1e-4;
      const double fd = (energy(u + step * v, pot, kernel).total -
                         energy(u - step * v, pot, kernel).total) /
                        (2.0 * step);
      worst = std::max(worst, std::abs(fd - analytic) / std::abs(analytic));
    }
    return check("gradient_consistency", worst < 1e-6, "relative gap " + fmt(worst));
  });
  guard("diamagnetic", [&] {
    std::size_t bad = 0;
    for (int t = 0; t < 3; ++t)
      bad += diamagnetic_check(random_smooth_field(grid, rng, true, width), pot)
                 .violations;
    return check("diamagnetic", bad == 0, std::to_string(bad) + " violations");
  });
  guard("hls_bound", [&] {
    const HlsBound b = hls_check(random_smooth_field(grid, rng, true, width), kernel);
    return check("hls_bound", b.lhs <= b.rhs, fmt(b.lhs) + " <= " + fmt(b.rhs));
  });
  guard("potential_symmetry", [&] {
    const PotentialSymmetryReport r = check_potential_symmetry(pot, sector);
    return check("potential_symmetry", r.ok,
                 "V defect " + fmt(r.v_defect) + ", A defect " + fmt(r.a_defect));
  });

  const std::vector<Point3> seeds =
      c.seeds.empty() ? default_seeds(c, pot.v, sector) : c.seeds;
  if (seeds.empty()) {
    out.push_back({"entrance_equivariance", false, "no admissible seed"});
    return out;
  }
  const Point3 xi = seeds.front();
  const double lambda = pot.v_func(xi);
  ScalarField psi;
  guard("entrance_equivariance", [&] {
    const RadialProfile prof = solve_limit(lambda);
    const CutoffBump bump = make_cutoff_bump(prof, eps, build_cutoff(c));
    psi = entrance({xi, eps, sector, lambda}, bump, pot.a_func, grid);
    const double defect = equivariance_defect(psi, sector);
    return check("entrance_equivariance", defect < 1e-6, "defect " + fmt(defect));
  });
  if (psi.empty()) return out;

  SolveResult sol;
  guard("minimize", [&] {
    sol = minimize(psi, pot, sector, kernel, build_solve_options(c));
    const double window =
        std::abs(sol.hartree_window - eps * eps * energy(sol.u, pot, kernel).total) /
        sol.hartree_window;
    return check("minimize", sol.converged && sol.nehari_residual < 1e-8 && window < 1e-6,
                 sol.status + ", eps^-3 J = " + fmt(sol.energy_scaled) +
                     ", grad " + fmt(sol.grad_norm_scaled));
  });
  guard("energy_monotone", [&] {
    bool mono = true;
    for (std::size_t i = 1; i < sol.energy_history.size(); ++i)
      if (sol.energy_history[i] > sol.energy_history[i - 1]) mono = false;
    return check("energy_monotone", mono && !sol.energy_history.empty(),
                 std::to_string(sol.energy_history.size()) + " accepted steps");
  });
  guard("lower_bound", [&] {
    const double cap = c.truncation > 0.0 ? c.truncation : default_truncation(pot.v);
    const ScalarField w = truncated_potential(pot.v, cap);
    double inf_w = INFINITY;
    for (std::size_t i = 0; i < w.size(); ++i) inf_w = std::min(inf_w, w[i].real());
    const double bound = std::pow(inf_w, 1.5) * kGroundEnergy * (1.0 - 1e-2);
    return check("lower_bound", sol.energy_scaled >= bound,
                 fmt(sol.energy_scaled) + " >= " + fmt(bound));
  });
  guard("inequality_chain", [&] {
    const double cap = c.truncation > 0.0 ? c.truncation : default_truncation(pot.v);
    const InequalityChain ch = inequality_chain(sol.u, pot, kernel, cap);
    return check("inequality_chain", ch.holds,
                 fmt(ch.truncated) + " <= " + fmt(ch.modulus) + " <= " + fmt(ch.full));
  });
  guard("localize_self_match", [&] {
    const RadialProfile prof = solve_limit(lambda);
    const ScalarField theta = theta_template(xi, eps, sector, prof, grid);
    const double cap = c.truncation > 0.0 ? c.truncation : default_truncation(pot.v);
    const ConcentrationReport r =
        localize(theta, eps, sector, p1, pot.v_func, truncated_potential(pot.v, cap));
    return check("localize_self_match", r.residual_scaled < 1e-6 && r.margin > 0.0,
                 "residual " + fmt(r.residual_scaled) + ", xi " + fmt(r.xi));
  });
  return out;
}

}  // namespace chq
