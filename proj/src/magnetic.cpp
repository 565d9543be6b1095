#include "chq/magnetic.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "chq/fft.hpp"
#include "chq/kernels.hpp"

namespace chq {

namespace k = kernels::omp;

namespace {

double dk_of(const Grid3& g) { return M_PI / g.half_length; }

void check_grid(const ScalarField& u, const Potentials& p, const char* where) {
  require_same_grid(u.grid(), p.grid(), where);
}

}  // namespace

Potentials make_potentials(const Grid3& grid, double epsilon, VectorFunction a,
                           ScalarFunction v) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw Error("potentials: epsilon must be positive");
  Potentials p;
  p.epsilon = epsilon;
  p.a_func = a ? std::move(a) : zero_vector_potential();
  p.v_func = std::move(v);
  if (!p.v_func) throw Error("potentials: V is required");
  p.v = ScalarField::sample(grid, [&](const Point3& x) { return p.v_func(x); });
  for (const cplx& z : p.v.values()) {
    if (!std::isfinite(z.real())) throw Error("potentials: V is not finite");
    if (!(z.real() > 0.0)) throw Error("potentials: V must be positive");
  }
  p.a = VectorField(grid, true);
  bool nonzero = false;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const Point3 val = p.a_func(grid.node(idx));
    for (int c = 0; c < 3; ++c) {
      if (!std::isfinite(val[std::size_t(c)]))
        throw Error("potentials: A is not finite");
      p.a[c][idx] = val[std::size_t(c)];
      nonzero = nonzero || val[std::size_t(c)] != 0.0;
    }
  }
  p.magnetic = nonzero;
  return p;
}

Potentials with_epsilon(const Potentials& p, double epsilon) {
  if (!(epsilon > 0.0)) throw Error("potentials: epsilon must be positive");
  Potentials q = p;
  q.epsilon = epsilon;
  return q;
}

VectorField covariant_gradient(const ScalarField& u, const Potentials& p) {
  check_grid(u, p, "covariant_gradient");
  const Grid3& g = u.grid();
  ScalarField spec = u;
  spec.set_real(false);
  fft::forward(spec.data(), g.n);
  VectorField out;
  for (int a = 0; a < 3; ++a) {
    ScalarField d = spec;
    k::derivative_multiply(d.values(), g.n, a, dk_of(g),
                           p.epsilon / double(g.size()));
    fft::backward(d.data(), g.n);
    if (p.magnetic) {
      const ScalarField& A = p.a[a];
      const std::ptrdiff_t total = std::ptrdiff_t(g.size());
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t i = 0; i < total; ++i)
        d[i] += cplx(0.0, A[i].real()) * u[i];
    } else if (u.is_real()) {
      d.set_real(true);
    }
    out.c[a] = std::move(d);
  }
  return out;
}

double magnetic_norm2(const ScalarField& u, const Potentials& p) {
  const VectorField G = covariant_gradient(u, p);
  return norm2(G[0]) + norm2(G[1]) + norm2(G[2]) + weighted_norm2(u, p.v);
}

double magnetic_inner(const ScalarField& u, const ScalarField& w,
                      const Potentials& p) {
  const VectorField gu = covariant_gradient(u, p);
  const VectorField gw = covariant_gradient(w, p);
  double s = 0.0;
  for (int a = 0; a < 3; ++a) s += inner(gu[a], gw[a]).real();
  return s + inner(u, multiply(p.v, w)).real();
}

EnergyBreakdown energy(const ScalarField& u, const Potentials& p,
                       const CoulombKernel& kernel) {
  check_grid(u, p, "energy");
  require_same_grid(u.grid(), kernel.grid(), "energy");
  EnergyBreakdown e;
  const VectorField G = covariant_gradient(u, p);
  e.kinetic_magnetic = norm2(G[0]) + norm2(G[1]) + norm2(G[2]);
  e.potential = weighted_norm2(u, p.v);
  e.hartree = hartree_energy(u, kernel);
  e.total = 0.5 * (e.kinetic_magnetic + e.potential) -
            e.hartree / (4.0 * p.epsilon * p.epsilon);
  return e;
}

ScalarField magnetic_operator(const ScalarField& u, const Potentials& p,
                              double* kinetic, double* potential) {
  check_grid(u, p, "magnetic_operator");
  const Grid3& g = u.grid();
  const std::ptrdiff_t total = std::ptrdiff_t(g.size());
  ScalarField out(g);
  if (!p.magnetic) {
    out = u;
    out.set_real(false);
    fft::forward(out.data(), g.n);
    if (kinetic != nullptr) {
      // Parseval: int |eps D u|^2 = h^3 / N sum eps^2 |k|^2 |u_k|^2.
      ScalarField lap = out;
      k::laplacian_multiply(lap.values(), g.n, dk_of(g), 1.0);
      *kinetic = -p.epsilon * p.epsilon * g.cell_volume() / double(g.size()) *
                 k::real_dot(out.values(), lap.values());
    }
    k::laplacian_multiply(out.values(), g.n, dk_of(g),
                          -p.epsilon * p.epsilon / double(g.size()));
    fft::backward(out.data(), g.n);
  } else {
    const VectorField G = covariant_gradient(u, p);
    if (kinetic != nullptr)
      *kinetic = norm2(G[0]) + norm2(G[1]) + norm2(G[2]);
    ScalarField pointwise(g);
    for (int a = 0; a < 3; ++a) {
      ScalarField t = G[a];
      const ScalarField& A = p.a[a];
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t i = 0; i < total; ++i)
        pointwise[i] -= cplx(0.0, A[i].real()) * t[i];
      fft::forward(t.data(), g.n);
      k::derivative_multiply(t.values(), g.n, a, dk_of(g),
                             -p.epsilon / double(g.size()));
      out += t;
    }
    fft::backward(out.data(), g.n);
    out += pointwise;
  }
  if (potential != nullptr) *potential = weighted_norm2(u, p.v);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < total; ++i) out[i] += p.v[i].real() * u[i];
  if (u.is_real() && !p.magnetic) out.set_real(true);
  return out;
}

ScalarField expanded_operator(const ScalarField& u, const Potentials& p) {
  check_grid(u, p, "expanded_operator");
  const Grid3& g = u.grid();
  const std::ptrdiff_t total = std::ptrdiff_t(g.size());
  const double eps = p.epsilon;
  ScalarField out = laplacian(u);
  out *= -eps * eps;
  out.set_real(false);
  const VectorField grad = gradient(u);
  const ScalarField div_a = divergence(p.a);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < total; ++i) {
    cplx adotgrad = 0.0;
    double a2 = 0.0;
    for (int a = 0; a < 3; ++a) {
      const double Aa = p.a[a][i].real();
      adotgrad += Aa * grad[a][i];
      a2 += Aa * Aa;
    }
    out[i] += -2.0 * eps * cplx(0.0, 1.0) * adotgrad -
              eps * cplx(0.0, div_a[i].real()) * u[i] + (a2 + p.v[i].real()) * u[i];
  }
  return out;
}

ScalarField euler_lagrange_residual(const ScalarField& u, const Potentials& p,
                                    const CoulombKernel& kernel) {
  ScalarField out = magnetic_operator(u, p);
  const ScalarField U = hartree_potential(abs2(u), kernel);
  const double c = 1.0 / (p.epsilon * p.epsilon);
  const std::ptrdiff_t total = std::ptrdiff_t(u.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < total; ++i) out[i] -= c * U[i].real() * u[i];
  return out;
}

ScalarField nehari_project(const ScalarField& u, const Potentials& p,
                           const CoulombKernel& kernel) {
  if (sup_norm(u) == 0.0) throw Error("nehari_project: zero field");
  const double n2 = magnetic_norm2(u, p);
  const double d = hartree_energy(u, kernel);
  if (!(d >= 1e-300))
    throw Error("nehari_project: degenerate Hartree energy, cannot project");
  return (p.epsilon * std::sqrt(n2) / std::sqrt(d)) * u;
}

double nehari_residual(const ScalarField& u, const Potentials& p,
                       const CoulombKernel& kernel) {
  const double n2 = magnetic_norm2(u, p);
  const double d = hartree_energy(u, kernel);
  if (d <= 0.0) throw Error("nehari_residual: zero Hartree energy");
  return std::abs(p.epsilon * p.epsilon * n2 - d) / d;
}

double projected_energy(const ScalarField& u, const Potentials& p,
                        const CoulombKernel& kernel) {
  const double n2 = magnetic_norm2(u, p);
  const double d = hartree_energy(u, kernel);
  if (!(d >= 1e-300)) throw Error("projected_energy: degenerate Hartree energy");
  return p.epsilon * p.epsilon * n2 * n2 / (4.0 * d);
}

DiamagneticReport diamagnetic_check(const ScalarField& u, const Potentials& p) {
  check_grid(u, p, "diamagnetic_check");
  const Grid3& g = u.grid();
  const VectorField G = covariant_gradient(u, p);
  const VectorField gm = gradient(abs(u));
  double max_a = 0.0;
  for (int a = 0; a < 3; ++a) max_a = std::max(max_a, sup_norm(p.a[a]));
  const double max_u = sup_norm(u);
  std::vector<double> lhs(g.size()), rhs(g.size());
  double rhs_max = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double l = 0.0, r = 0.0;
    for (int a = 0; a < 3; ++a) {
      l += gm[a][i].real() * gm[a][i].real();
      r += std::norm(G[a][i]);
    }
    lhs[i] = p.epsilon * std::sqrt(l);
    rhs[i] = std::sqrt(r);
    rhs_max = std::max(rhs_max, rhs[i]);
  }
  DiamagneticReport rep;
  rep.tolerance = 4.0 * g.spacing * max_a * max_u + 1e-10 * rhs_max;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double gap = lhs[i] - rhs[i];
    rep.max_gap = std::max(rep.max_gap, gap);
    if (gap > rep.tolerance) ++rep.violations;
  }
  return rep;
}

ScalarField resample_scaled(const ScalarField& u, double scale) {
  const Grid3& g = u.grid();
  const int n = g.n;
  const std::size_t nn = std::size_t(n);
  const double dk = dk_of(g);
  // M[i][j]: weight of node j in the interpolant evaluated at scale * x_i.
  std::vector<cplx> M(nn * nn);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double d = scale * g.coord(i) - g.coord(j);
      cplx s = std::cos(0.5 * n * dk * d);
      for (int q = -n / 2 + 1; q < n / 2; ++q) s += std::polar(1.0, q * dk * d);
      M[std::size_t(i) * nn + std::size_t(j)] = s / double(n);
    }
  }
  ScalarField cur = u;
  cur.set_real(false);
  ScalarField next(g);
  const int stride[3] = {n * n, n, 1};
  for (int axis = 0; axis < 3; ++axis) {
    const std::size_t sa = std::size_t(stride[axis]);
    const std::ptrdiff_t total = std::ptrdiff_t(g.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
      const std::size_t t = std::size_t(idx);
      const std::size_t pos = (t / sa) % nn;
      const std::size_t base = t - pos * sa;
      const cplx* row = M.data() + pos * nn;
      cplx s = 0.0;
      for (std::size_t j = 0; j < nn; ++j) s += row[j] * cur[base + j * sa];
      next[t] = s;
    }
    std::swap(cur, next);
  }
  if (u.is_real()) cur.set_real(true);
  return cur;
}

RescaleReport rescale_identity_check(const ScalarField& u, const Potentials& p,
                                     const CoulombKernel& kernel,
                                     double decay_threshold) {
  check_grid(u, p, "rescale_identity_check");
  const Grid3& g = u.grid();
  const double eps = p.epsilon;
  RescaleReport rep;
  const double top = sup_norm(u);
  double outside = 0.0;
  const double reach = eps * g.half_length;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point3 x = g.node(i);
    if (std::abs(x[0]) >= reach || std::abs(x[1]) >= reach ||
        std::abs(x[2]) >= reach)
      outside = std::max(outside, std::abs(u[i]));
  }
  rep.boundary_ratio = top > 0.0 ? outside / top : 0.0;
  if (rep.boundary_ratio > decay_threshold)
    throw Error("rescale_identity_check: field not resolved after rescaling "
                "(boundary ratio " + std::to_string(rep.boundary_ratio) + ")");
  rep.lhs = energy(u, p, kernel).total / (eps * eps * eps);
  if (eps == 1.0) {
    rep.rhs = energy(u, p, kernel).total;
    return rep;
  }
  const VectorFunction af = p.a_func;
  const ScalarFunction vf = p.v_func;
  const Potentials q = make_potentials(
      g, 1.0,
      [af, eps](const Point3& x) { return af({eps * x[0], eps * x[1], eps * x[2]}); },
      [vf, eps](const Point3& x) { return vf({eps * x[0], eps * x[1], eps * x[2]}); });
  rep.rhs = energy(resample_scaled(u, eps), q, kernel).total;
  return rep;
}

void apply_shifted_inverse(ScalarField& r, double epsilon, double shift) {
  const Grid3& g = r.grid();
  const int n = g.n;
  const double dk = dk_of(g);
  const std::size_t nn = std::size_t(n);
  auto k2 = [n, dk](std::size_t c) {
    const int ic = int(c);
    if (ic == n / 2) return 0.0;
    const double kk = (ic < n / 2 ? ic : ic - n) * dk;
    return kk * kk;
  };
  r.set_real(false);
  fft::forward(r.data(), n);
  const double inv_size = 1.0 / double(g.size());
  const std::ptrdiff_t total = std::ptrdiff_t(g.size());
  const double e2 = epsilon * epsilon;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
    const std::size_t u = std::size_t(idx);
    const double s = k2(u / (nn * nn)) + k2((u / nn) % nn) + k2(u % nn);
    r[u] *= inv_size / (e2 * s + shift);
  }
  fft::backward(r.data(), n);
}

OperatorSolve solve_operator(const ScalarField& rhs, const Potentials& p,
                             double tol, int max_iter, double shift,
                             const ScalarField* guess) {
  check_grid(rhs, p, "solve_operator");
  if (shift <= 0.0) shift = integrate(p.v).real() /
                            std::pow(2.0 * p.grid().half_length, 3);
  OperatorSolve out;
  const double bnorm = std::sqrt(k::norm2(rhs.values()));
  if (guess != nullptr) {
    out.x = *guess;
    out.x.set_real(false);
  } else {
    out.x = ScalarField(rhs.grid());
  }
  if (bnorm == 0.0) {
    out.x = ScalarField(rhs.grid());
    out.converged = true;
    return out;
  }
  ScalarField r = rhs;
  r.set_real(false);
  if (guess != nullptr) r -= magnetic_operator(out.x, p);
  ScalarField z = r;
  apply_shifted_inverse(z, p.epsilon, shift);
  ScalarField d = z;
  double rz = k::dot(r.values(), z.values()).real();
  for (int it = 0; it < max_iter; ++it) {
    const double rn = std::sqrt(k::norm2(r.values()));
    out.residual = rn / bnorm;
    out.iterations = it;
    if (out.residual <= tol) {
      out.converged = true;
      return out;
    }
    const ScalarField Ld = magnetic_operator(d, p);
    const double dLd = k::dot(d.values(), Ld.values()).real();
    const double alpha = rz / dLd;
    k::axpby(alpha, d.values(), 1.0, out.x.values());
    k::axpby(-alpha, Ld.values(), 1.0, r.values());
    z = r;
    apply_shifted_inverse(z, p.epsilon, shift);
    const double rz_new = k::dot(r.values(), z.values()).real();
    k::axpby(1.0, z.values(), rz_new / rz, d.values());
    rz = rz_new;
  }
  out.residual = std::sqrt(k::norm2(r.values())) / bnorm;
  out.iterations = max_iter;
  out.converged = out.residual <= tol;
  return out;
}

}  // namespace chq
