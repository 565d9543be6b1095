#include "chq/symmetry.hpp"

#include <algorithm>
#include <cmath>

#include "chq/fft.hpp"
#include "chq/kernels.hpp"
#include "chq/magnetic.hpp"

namespace chq {

namespace k = kernels::omp;

namespace {

int wrap(int k, int m) { return ((k % m) + m) % m; }

// out[i][j][kk] = u[pi(i, j)][kk] for a quarter-turn count q in 1..3.
ScalarField quarter_turn(const ScalarField& u, int q) {
  const Grid3& g = u.grid();
  const int n = g.n;
  ScalarField out(g, u.is_real());
  auto flip = [n](int i) { return (n - i) % n; };
  const std::ptrdiff_t ni = n;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < ni; ++ii) {
    const int i = int(ii);
    for (int j = 0; j < n; ++j) {
      int si = 0, sj = 0;
      switch (q) {
        case 1:
          si = j;
          sj = flip(i);
          break;
        case 2:
          si = flip(i);
          sj = flip(j);
          break;
        default:
          si = flip(j);
          sj = i;
          break;
      }
      const cplx* src = u.data() + g.index(si, sj, 0);
      cplx* dst = out.data() + g.index(i, j, 0);
      std::copy(src, src + n, dst);
    }
  }
  return out;
}

// out(x) = f(x + shift along `axis`), shift = coef * coordinate on `by`.
void shear(ScalarField& f, int axis, int by, double coef) {
  const Grid3& g = f.grid();
  const int n = g.n;
  const std::size_t nn = std::size_t(n);
  const double dk = M_PI / g.half_length;
  fft::forward_axis(f.data(), n, axis);
  const std::size_t stride[3] = {nn * nn, nn, 1};
  const std::ptrdiff_t total = std::ptrdiff_t(g.size());
  const double inv = 1.0 / double(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
    const std::size_t t = std::size_t(idx);
    const int q = int((t / stride[axis]) % nn);
    const int b = int((t / stride[by]) % nn);
    const double s = coef * g.coord(b);
    cplx phase;
    if (q == n / 2) {
      phase = std::cos(0.5 * n * dk * s);
    } else {
      const int sq = q < n / 2 ? q : q - n;
      phase = std::polar(1.0, sq * dk * s);
    }
    f[t] *= phase * inv;
  }
  fft::backward_axis(f.data(), n, axis);
}

}  // namespace

cplx SymmetrySector::tau(int k) const {
  const int r = wrap(k * j, m);
  if (r == 0) return 1.0;
  if (2 * r == m) return -1.0;
  if (4 * r == m) return cplx(0.0, 1.0);
  if (4 * r == 3 * m) return cplx(0.0, -1.0);
  return std::polar(1.0, 2.0 * M_PI * r / m);
}

double SymmetrySector::angle(int k) const {
  return 2.0 * M_PI * wrap(k, m) / m;
}

SymmetrySector make_sector(int m, int j) {
  if (m < 1) throw Error("symmetry: m must be at least 1");
  if (j < 0 || j >= m) throw Error("symmetry: j must lie in [0, m)");
  return SymmetrySector{m, j};
}

Point3 rotate_point(const Point3& x, int k, const SymmetrySector& s) {
  const int r = wrap(k, s.m);
  if (r == 0) return x;
  if (4 * r == s.m) return {-x[1], x[0], x[2]};
  if (2 * r == s.m) return {-x[0], -x[1], x[2]};
  if (4 * r == 3 * s.m) return {x[1], -x[0], x[2]};
  const double a = s.angle(r);
  const double c = std::cos(a), sn = std::sin(a);
  return {c * x[0] - sn * x[1], sn * x[0] + c * x[1], x[2]};
}

ScalarField rotate_field(const ScalarField& u, double angle) {
  const double quarter = M_PI / 2.0;
  const double q = std::round(angle / quarter);
  const double phi = angle - q * quarter;
  const int qi = wrap(int(q), 4);
  ScalarField out = qi == 0 ? u : quarter_turn(u, qi);
  if (std::abs(phi) < 1e-15) return out;
  const bool was_real = out.is_real();
  out.set_real(false);
  const double t = std::tan(0.5 * phi);
  shear(out, 0, 1, t);
  shear(out, 1, 0, -std::sin(phi));
  shear(out, 0, 1, t);
  if (was_real) out.set_real(true);
  return out;
}

ScalarField act(int k, const ScalarField& u, const SymmetrySector& s) {
  const int r = wrap(k, s.m);
  if (r == 0) return u;
  ScalarField out;
  if ((4 * r) % s.m == 0) {
    out = quarter_turn(u, (4 * r) / s.m);
  } else {
    out = rotate_field(u, s.angle(r));
  }
  const cplx t = s.tau(r);
  if (t != cplx(1.0)) out *= t;
  return out;
}

ScalarField symmetrize(const ScalarField& u, const SymmetrySector& s) {
  if (s.m == 1) return u;
  ScalarField acc = u;
  for (int kk = 1; kk < s.m; ++kk) acc += act(kk, u, s);
  acc *= 1.0 / s.m;
  return acc;
}

double equivariance_defect(const ScalarField& u, const SymmetrySector& s) {
  const double base = std::sqrt(norm2(u));
  if (base == 0.0) return 0.0;
  double worst = 0.0;
  for (int kk = 1; kk < s.m; ++kk) {
    const ScalarField d = act(kk, u, s) - u;
    worst = std::max(worst, std::sqrt(norm2(d)) / base);
  }
  return worst;
}

bool is_equivariant(const ScalarField& u, const SymmetrySector& s, double tol) {
  if (!(tol > 0.0)) throw Error("is_equivariant: tol must be positive");
  return equivariance_defect(u, s) <= tol;
}

OrbitInfo orbit_info(const Point3& x, const SymmetrySector& s,
                     double tol_axis) {
  if (tol_axis < 0.0) tol_axis = 1e-12;
  OrbitInfo info;
  info.representative = x;
  const bool on_axis = std::hypot(x[0], x[1]) <= tol_axis;
  info.cardinality = on_axis ? 1 : s.m;
  info.isotropy_in_kernel = !on_axis || s.j == 0 || s.m == 1;
  return info;
}

std::vector<Point3> orbit_points(const Point3& x, const SymmetrySector& s,
                                 double tol_axis) {
  const OrbitInfo info = orbit_info(x, s, tol_axis);
  std::vector<Point3> pts;
  if (info.cardinality == 1) {
    pts.push_back(x);
    return pts;
  }
  for (int kk = 0; kk < s.m; ++kk) pts.push_back(rotate_point(x, kk, s));
  return pts;
}

MinimizingSet ell_and_mtau(const ScalarField& v, const SymmetrySector& s,
                           const std::vector<Point3>& candidates, double band) {
  const Grid3& g = v.grid();
  const double tol_axis = 0.5 * g.spacing;
  std::vector<Point3> pts;
  std::vector<double> vals;
  if (candidates.empty()) {
    pts.reserve(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      pts.push_back(g.node(i));
      vals.push_back(v[i].real());
    }
  } else {
    for (const Point3& x : candidates) {
      int idx[3];
      for (int a = 0; a < 3; ++a) {
        const int i = int(std::lround((x[std::size_t(a)] + g.half_length) /
                                      g.spacing));
        idx[a] = std::clamp(i, 0, g.n - 1);
      }
      pts.push_back(x);
      vals.push_back(v[g.index(idx[0], idx[1], idx[2])].real());
    }
  }
  if (pts.empty()) throw Error("ell_and_mtau: empty candidate list");
  std::vector<double> score(pts.size());
  std::vector<int> card(pts.size());
  MinimizingSet out;
  out.ell = INFINITY;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    card[i] = orbit_info(pts[i], s, tol_axis).cardinality;
    score[i] = card[i] * std::pow(vals[i], 1.5);
    out.ell = std::min(out.ell, score[i]);
  }
  auto seen = [&out](const Point3& p) {
    for (const Point3& q : out.points) {
      if (std::abs(p[0] - q[0]) < 1e-9 && std::abs(p[1] - q[1]) < 1e-9 &&
          std::abs(p[2] - q[2]) < 1e-9)
        return true;
    }
    return false;
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (score[i] > out.ell * (1.0 + band)) continue;
    if (!orbit_info(pts[i], s, tol_axis).isotropy_in_kernel) continue;
    for (const Point3& q : orbit_points(pts[i], s, tol_axis)) {
      if (seen(q)) continue;
      out.points.push_back(q);
      out.cardinalities.push_back(card[i]);
      out.values.push_back(vals[i]);
    }
  }
  return out;
}

PotentialSymmetryReport check_potential_symmetry(const Potentials& p,
                                                 const SymmetrySector& s,
                                                 double tol) {
  PotentialSymmetryReport rep;
  const Grid3& g = p.grid();
  double vmax = 0.0, amax = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point3 x = g.node(i);
    const Point3 gx = rotate_point(x, 1, s);
    const double vx = p.v_func(x);
    rep.v_defect = std::max(rep.v_defect, std::abs(p.v_func(gx) - vx));
    vmax = std::max(vmax, std::abs(vx));
    const Point3 ax = p.a_func(x);
    const Point3 gax = rotate_point(ax, 1, s);
    const Point3 agx = p.a_func(gx);
    for (int a = 0; a < 3; ++a) {
      rep.a_defect = std::max(rep.a_defect, std::abs(agx[std::size_t(a)] -
                                                     gax[std::size_t(a)]));
      amax = std::max(amax, std::abs(ax[std::size_t(a)]));
    }
  }
  if (vmax > 0.0) rep.v_defect /= vmax;
  if (amax > 0.0) rep.a_defect /= amax;
  rep.ok = rep.v_defect <= tol && rep.a_defect <= tol;
  return rep;
}

}  // namespace chq
