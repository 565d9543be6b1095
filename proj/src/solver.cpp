#include "chq/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "chq/kernels.hpp"

namespace chq {

namespace k = kernels::omp;

namespace {

// u on the Nehari manifold together with L u and the Hartree potential.
struct State {
  ScalarField u, lu, uu;
  double n2 = 0.0;
  double d = 0.0;

  double projected(double eps) const { return eps * eps * n2 * n2 / (4.0 * d); }
};

State project_state(ScalarField v, const Potentials& p,
                    const CoulombKernel& kernel) {
  State st;
  double kin = 0.0, pot = 0.0;
  st.lu = magnetic_operator(v, p, &kin, &pot);
  st.n2 = kin + pot;
  st.uu = hartree_potential(abs2(v), kernel);
  st.d = weighted_norm2(v, st.uu);
  if (!(st.d >= 1e-300)) throw Error("minimize: degenerate Hartree energy");
  const double s = p.epsilon * std::sqrt(st.n2 / st.d);
  v *= s;
  st.lu *= s;
  st.uu *= s * s;
  st.n2 *= s * s;
  st.d *= s * s * s * s;
  st.u = std::move(v);
  return st;
}

ScalarField l2_gradient(const State& st) {
  ScalarField g = st.lu;
  const double c = st.n2 / st.d;
  const std::ptrdiff_t total = std::ptrdiff_t(g.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < total; ++i)
    g[std::size_t(i)] -= c * st.uu[std::size_t(i)].real() * st.u[std::size_t(i)];
  return g;
}

double mean_shift(const Potentials& p) {
  const Grid3& g = p.grid();
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double a2 = 0.0;
    if (p.magnetic)
      for (int a = 0; a < 3; ++a) a2 += std::norm(p.a[a][i]);
    s += p.v[i].real() + a2;
  }
  return s / double(g.size());
}

bool real_sector(const ScalarField& u, const Potentials& p,
                 const SymmetrySector& s) {
  if (!u.is_real() || p.magnetic) return false;
  for (int kk = 0; kk < s.m; ++kk)
    if (s.tau(kk).imag() != 0.0) return false;
  return true;
}

}  // namespace

void validate(const SolveOptions& opts) {
  if (!(opts.tol_grad > 0.0)) throw Error("solver: tol_grad must be positive");
  if (opts.max_iter < 1) throw Error("solver: max_iter must be at least 1");
  if (opts.check_every < 1) throw Error("solver: check_every must be positive");
  if (!(opts.fixed_step > 0.0))
    throw Error("solver: fixed_step must be positive");
}

TangentGradient tangent_gradient(const ScalarField& u, const Potentials& p,
                                 const CoulombKernel& kernel,
                                 double operator_tol) {
  const double eps = p.epsilon;
  const double n2 = magnetic_norm2(u, p);
  const ScalarField U = hartree_potential(abs2(u), kernel);
  const double d = weighted_norm2(u, U);
  if (std::abs(eps * eps * n2 - d) > 1e-6 * d)
    throw Error("tangent_gradient: u is off the Nehari manifold");
  ScalarField uu = multiply(U, u);
  const OperatorSolve w = solve_operator(uu, p, operator_tol, 2000);
  if (!w.converged)
    throw Error("tangent_gradient: operator solve did not converge");
  // grad J = u - eps^-2 w, grad G = 2 eps^2 u - 4 w
  ScalarField gj = u;
  gj.set_real(false);
  k::axpby(-1.0 / (eps * eps), w.x.values(), 1.0, gj.values());
  ScalarField gg = u;
  gg.set_real(false);
  k::axpby(-4.0, w.x.values(), 2.0 * eps * eps, gg.values());
  const double jg = magnetic_inner(gj, gg, p);
  const double ggn = magnetic_norm2(gg, p);
  TangentGradient out;
  out.grad = gj;
  k::axpby(-jg / ggn, gg.values(), 1.0, out.grad.values());
  if (real_sector(u, p, SymmetrySector{})) out.grad.set_real(true);
  const double tn = magnetic_norm2(out.grad, p);
  out.norm2_scaled = tn / (eps * eps * eps);
  out.orthogonality =
      tn > 0.0 ? std::abs(magnetic_inner(out.grad, gg, p)) / std::sqrt(tn * ggn)
               : 0.0;
  return out;
}

double weak_residual(const ScalarField& u, const ScalarField& w,
                     const Potentials& p, const CoulombKernel& kernel) {
  const ScalarField r = euler_lagrange_residual(u, p, kernel);
  const double dj = inner(r, w).real();
  const double e = p.epsilon;
  return dj * dj / magnetic_norm2(w, p) / (e * e * e);
}

SolveResult minimize(const ScalarField& start, const Potentials& p,
                     const SymmetrySector& s, const CoulombKernel& kernel,
                     const SolveOptions& opts) {
  validate(opts);
  require_same_grid(start.grid(), p.grid(), "minimize");
  const double start_norm = std::sqrt(norm2(start));
  if (!(start_norm > 0.0)) throw Error("minimize: zero start");
  ScalarField sym = symmetrize(start, s);
  if (std::sqrt(norm2(sym)) <= 1e-10 * start_norm)
    throw Error("minimize: symmetrization annihilates start");

  const double eps = p.epsilon;
  const double e3 = eps * eps * eps;
  const bool real = real_sector(start, p, s);
  if (real) sym.set_real(true);
  const double shift = mean_shift(p);

  SolveResult res;
  res.sector = s;
  res.epsilon = eps;
  State st = project_state(std::move(sym), p, kernel);
  double energy = st.projected(eps);
  res.energy_history.push_back(energy / e3);

  ScalarField prev_u, prev_d;
  double alpha = opts.fixed_step;
  // The proxy tracks the exact norm up to the quality of the preconditioner.
  double trigger = 10.0 * opts.tol_grad;
  int it = 0;
  bool done = false;
  for (; it < opts.max_iter; ++it) {
    const ScalarField g = l2_gradient(st);
    ScalarField d = g;
    apply_shifted_inverse(d, eps, shift);
    if (real) d.set_real(true);
    const double gd = inner(g, d).real();
    const double proxy = gd / e3;

    if (it % opts.check_every == 0 && s.m > 1 &&
        !is_equivariant(st.u, s, 1e-6)) {
      res.status = "sector lost at iteration " + std::to_string(it);
      break;
    }
    if (proxy < trigger) {
      const TangentGradient tg =
          tangent_gradient(st.u, p, kernel, opts.operator_tol);
      res.grad_norm_scaled = tg.norm2_scaled;
      if (tg.norm2_scaled < opts.tol_grad) {
        done = true;
        break;
      }
      trigger = 0.5 * proxy;
    }

    if (opts.step_rule == StepRule::kAdaptiveBB && !prev_u.empty()) {
      ScalarField sd = st.u - prev_u;
      ScalarField yd = d - prev_d;
      const double ss = norm2(sd);
      const double sy = inner(sd, yd).real();
      if (sy > 0.0) alpha = std::clamp(ss / sy, 1e-4, 1e4);
    } else if (opts.step_rule == StepRule::kFixed) {
      alpha = opts.fixed_step;
    }

    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      ScalarField trial = st.u;
      k::axpby(-alpha, d.values(), 1.0, trial.values());
      if (s.m > 1) trial = symmetrize(trial, s);
      if (real) trial.set_real(true);
      State cand = project_state(std::move(trial), p, kernel);
      const double e_new = cand.projected(eps);
      if (e_new <= energy - 1e-4 * alpha * gd) {
        prev_u = std::move(st.u);
        prev_d = std::move(d);
        st = std::move(cand);
        energy = e_new;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      const TangentGradient tg =
          tangent_gradient(st.u, p, kernel, opts.operator_tol);
      res.grad_norm_scaled = tg.norm2_scaled;
      done = tg.norm2_scaled < opts.tol_grad;
      if (!done) res.status = "line search stalled";
      break;
    }
    res.energy_history.push_back(energy / e3);
  }

  res.iterations = it;
  res.converged = done;
  if (done) {
    res.status = "converged";
  } else if (res.status.empty()) {
    res.status = "max_iter exceeded";
    res.grad_norm_scaled =
        tangent_gradient(st.u, p, kernel, opts.operator_tol).norm2_scaled;
  }
  if (s.m > 1 && !is_equivariant(st.u, s, 1e-6)) {
    res.converged = false;
    res.status = "sector lost";
  }
  res.energy_scaled = chq::energy(st.u, p, kernel).total / e3;
  res.nehari_residual = std::abs(eps * eps * st.n2 - st.d) / st.d;
  res.hartree_window = 0.25 * st.d;
  res.u = std::move(st.u);
  return res;
}

bool geometrically_distinct(const ScalarField& u, const ScalarField& v,
                            double tol) {
  require_same_grid(u.grid(), v.grid(), "geometrically_distinct");
  const double nv = norm2(v);
  if (norm2(u) == 0.0 || nv == 0.0)
    throw Error("geometrically_distinct: zero input");
  const cplx c = inner(u, v);
  const cplx phase = std::abs(c) > 0.0 ? c / std::abs(c) : cplx(1.0);
  ScalarField diff = phase * u;
  diff -= v;
  return std::sqrt(norm2(diff) / nv) > tol;
}

double boundary_minimum(const ScalarField& v) {
  const Grid3& g = v.grid();
  const int n = g.n;
  double best = INFINITY;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int kk = 0; kk < n; ++kk) {
        if (i != 0 && i != n - 1 && j != 0 && j != n - 1 && kk != 0 &&
            kk != n - 1)
          continue;
        best = std::min(best, v[g.index(i, j, kk)].real());
      }
  return best;
}

std::vector<SeedOutcome> multistart(const Potentials& p,
                                    const SymmetrySector& s,
                                    const CoulombKernel& kernel,
                                    const SolveOptions& opts,
                                    const std::vector<Point3>& seeds,
                                    const MultistartOptions& mopts) {
  std::vector<SeedOutcome> out;
  std::map<double, CutoffBump> bumps;
  const double eps = p.epsilon;
  const double e5 = std::pow(eps, 5);
  const double ps_threshold = std::pow(boundary_minimum(p.v), 1.5) * kGroundEnergy;
  for (const Point3& seed : seeds) {
    SeedOutcome o;
    o.seed = seed;
    try {
      const double lambda = p.v_func(seed);
      auto it = bumps.find(lambda);
      if (it == bumps.end()) {
        const RadialProfile prof = solve_limit(lambda, mopts.limit);
        it = bumps.emplace(lambda, make_cutoff_bump(prof, eps, mopts.cutoff)).first;
      }
      const EntranceSpec spec{seed, eps, s, lambda};
      const ScalarField psi = entrance(spec, it->second, p.a_func, p.grid());
      o.result = minimize(psi, p, s, kernel, opts);
      o.ok = true;
      o.in_window = o.result.converged &&
                    std::abs(o.result.hartree_window / e5 - mopts.target) < mopts.delta;
      o.ps_safe = o.result.energy_scaled < ps_threshold;
    } catch (const Error& e) {
      o.error = e.what();
    }
    out.push_back(std::move(o));
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!out[i].ok) continue;
    for (std::size_t jj = 0; jj < i; ++jj) {
      if (!out[jj].ok || out[jj].duplicate_of >= 0) continue;
      if (!geometrically_distinct(out[jj].result.u, out[i].result.u,
                                  mopts.dedup_tol)) {
        out[i].duplicate_of = int(jj);
        break;
      }
    }
  }
  return out;
}

}  // namespace chq
