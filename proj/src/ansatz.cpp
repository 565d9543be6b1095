#include "chq/ansatz.hpp"

#include <cmath>

namespace chq {

namespace {

double ramp(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

void check_orbit(const EntranceSpec& spec, const CutoffBump& bump,
                 const Grid3* grid, std::vector<Point3>& pts) {
  if (!(spec.epsilon > 0.0)) throw Error("entrance: epsilon must be positive");
  if (std::abs(bump.profile.lambda - spec.lambda) > 1e-6)
    throw Error("entrance: bump profile lambda differs from spec lambda");
  const double tol_axis = grid ? 0.5 * grid->spacing : -1.0;
  const OrbitInfo info = orbit_info(spec.xi, spec.sector, tol_axis);
  if (!info.isotropy_in_kernel)
    throw Error("entrance: isotropy of xi is not contained in ker tau");
  pts = orbit_points(spec.xi, spec.sector, tol_axis);
  const double support = spec.epsilon * bump.radius;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      const double d = std::hypot(pts[a][0] - pts[b][0], pts[a][1] - pts[b][1],
                                  pts[a][2] - pts[b][2]);
      if (d <= 2.2 * support)
        throw Error("entrance: orbit bumps overlap (distance " +
                    std::to_string(d) + ", support radius " +
                    std::to_string(support) + ")");
    }
    if (grid) {
      for (int c = 0; c < 3; ++c) {
        const double x = pts[a][std::size_t(c)];
        if (x - support < -grid->half_length ||
            x + support > grid->half_length - grid->spacing)
          throw Error("entrance: bump support leaves the box");
      }
    }
  }
}

cplx orbit_sum(const EntranceSpec& spec, const CutoffBump& bump,
               const std::vector<Point3>& pts,
               const std::vector<Point3>& apts, const Point3& x) {
  cplx acc = 0.0;
  const double inv = 1.0 / spec.epsilon;
  for (std::size_t kk = 0; kk < pts.size(); ++kk) {
    const double d0 = (x[0] - pts[kk][0]) * inv;
    const double d1 = (x[1] - pts[kk][1]) * inv;
    const double d2 = (x[2] - pts[kk][2]) * inv;
    const double r = std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
    if (r >= bump.radius) continue;
    const double phase =
        -(apts[kk][0] * d0 + apts[kk][1] * d1 + apts[kk][2] * d2);
    acc += spec.sector.tau(int(kk)) * bump(r) * std::polar(1.0, phase);
  }
  return acc;
}

}  // namespace

double smooth_cutoff(double s) {
  s = std::abs(s);
  if (s <= 0.5) return 1.0;
  if (s >= 1.0) return 0.0;
  const double t = 2.0 * (1.0 - s);
  const double up = ramp(t);
  return up / (up + ramp(1.0 - t));
}

double CutoffScale::radius(double epsilon) const {
  if (!(epsilon > 0.0)) throw Error("cutoff: epsilon must be positive");
  return scale * std::pow(epsilon, -exponent);
}

double CutoffBump::operator()(double r) const {
  if (r >= radius) return 0.0;
  return scale * smooth_cutoff(r / radius) * profile(r);
}

CutoffBump make_cutoff_bump(const RadialProfile& p, double epsilon,
                            const CutoffScale& cutoff) {
  CutoffBump b;
  b.profile = p;
  b.radius = cutoff.radius(epsilon);
  std::vector<double> f(p.values.size());
  const double h = p.spacing();
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = smooth_cutoff(double(i) * h / b.radius) * p.values[i];
  const RadialForms forms = radial_forms(f, p.r_max, p.lambda);
  b.scale = std::sqrt(forms.norm2 / forms.hartree);
  b.energy = forms.norm2 * forms.norm2 / (4.0 * forms.hartree);
  return b;
}

ScalarField cutoff_bump(const RadialProfile& p, double epsilon,
                        const Grid3& grid, const CoulombKernel& kernel,
                        const CutoffScale& cutoff) {
  const CutoffBump b = make_cutoff_bump(p, epsilon, cutoff);
  if (b.radius > grid.half_length - grid.spacing)
    throw Error("cutoff_bump: support exceeds the grid");
  ScalarField u = ScalarField::sample(grid, [&b](const Point3& x) {
    return b(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
  });
  const Potentials lim = make_potentials(grid, 1.0, zero_vector_potential(),
                                         constant_potential(p.lambda));
  return nehari_project(u, lim, kernel);
}

ScalarField entrance(const EntranceSpec& spec, const CutoffBump& bump,
                     const VectorFunction& a, const Grid3& grid) {
  std::vector<Point3> pts;
  check_orbit(spec, bump, &grid, pts);
  std::vector<Point3> apts;
  bool real = true;
  for (const Point3& q : pts) {
    apts.push_back(a(q));
    if (apts.back() != Point3{0.0, 0.0, 0.0}) real = false;
  }
  for (std::size_t kk = 0; kk < pts.size(); ++kk)
    if (spec.sector.tau(int(kk)).imag() != 0.0) real = false;
  ScalarField out(grid, false);
  const std::ptrdiff_t total = std::ptrdiff_t(grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < total; ++idx)
    out[std::size_t(idx)] =
        orbit_sum(spec, bump, pts, apts, grid.node(std::size_t(idx)));
  if (real) out.set_real(true);
  return out;
}

cplx entrance_value(const EntranceSpec& spec, const CutoffBump& bump,
                    const VectorFunction& a, const Point3& x) {
  std::vector<Point3> pts;
  check_orbit(spec, bump, nullptr, pts);
  std::vector<Point3> apts;
  for (const Point3& q : pts) apts.push_back(a(q));
  return orbit_sum(spec, bump, pts, apts, x);
}

double entrance_energy(const EntranceSpec& spec, const CutoffBump& bump,
                       const Potentials& p, const CoulombKernel& kernel) {
  if (std::abs(p.epsilon - spec.epsilon) > 1e-12 * spec.epsilon)
    throw Error("entrance_energy: potentials built for another epsilon");
  const ScalarField psi = entrance(spec, bump, p.a_func, p.grid());
  const double e = spec.epsilon;
  return projected_energy(psi, p, kernel) / (e * e * e);
}

}  // namespace chq
