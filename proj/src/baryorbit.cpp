#include "chq/baryorbit.hpp"

#include <algorithm>
#include <cmath>

#include "chq/fft.hpp"
#include "chq/kernels.hpp"

namespace chq {

namespace k = kernels::omp;

namespace {

double dist(const Point3& a, const Point3& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

// ||f||^2 = int eps^2 |grad f|^2 + w f^2 with spectral derivatives; w may be
// empty for weight 1.
double eps_norm2(const ScalarField& f, double epsilon, const ScalarField* w) {
  const VectorField g = gradient(f);
  const double kin = norm2(g[0]) + norm2(g[1]) + norm2(g[2]);
  const double pot = w ? weighted_norm2(f, *w) : norm2(f);
  return epsilon * epsilon * kin + pot;
}

void check_resolution(double epsilon, const Grid3& grid) {
  if (!(epsilon > 0.0)) throw Error("theta_template: epsilon must be positive");
  if (epsilon < 4.0 * grid.spacing * (1.0 - 1e-9))
    throw Error("theta_template: epsilon below 4h, bumps not resolved");
}

// Objective pieces for localize that change with xi: int eps^2 |grad
// theta|^2 + W theta^2 - 2 theta z, where z = -eps^2 lap |u| + W |u|.
class TemplateObjective {
 public:
  TemplateObjective(const ScalarField& a, double epsilon,
                    const SymmetrySector& s, const RadialProfile& p1,
                    const ScalarFunction& v, const ScalarField& w)
      : eps_(epsilon), s_(s), p1_(p1), v_(v), w_(w), grid_(a.grid()) {
    z_ = laplacian(a);
    z_ *= -epsilon * epsilon;
    const std::ptrdiff_t total = std::ptrdiff_t(a.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < total; ++i)
      z_[std::size_t(i)] += w[std::size_t(i)].real() * a[std::size_t(i)].real();
    z_.set_real(true);
    constant_ = integrate(multiply(a, z_)).real();
  }

  double constant() const { return constant_; }

  double operator()(const Point3& xi) const {
    const double lambda = v_(xi);
    const double inv = std::sqrt(lambda) / eps_;
    const std::vector<Point3> pts = orbit_points(xi, s_, 0.5 * grid_.spacing);
    ScalarField theta(grid_, true);
    const std::ptrdiff_t total = std::ptrdiff_t(grid_.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
      const std::size_t i = std::size_t(idx);
      const Point3 x = grid_.node(i);
      double th = 0.0;
      for (const Point3& q : pts) {
        const double d0 = x[0] - q[0], d1 = x[1] - q[1], d2 = x[2] - q[2];
        th += lambda * p1_(std::sqrt(d0 * d0 + d1 * d1 + d2 * d2) * inv);
      }
      theta[i] = th;
    }
    // Kinetic part by Parseval so that the objective is exactly the
    // spectral norm of |u| - theta up to the constant.
    ScalarField spec = theta;
    spec.set_real(false);
    fft::forward(spec.data(), grid_.n);
    ScalarField lap = spec;
    k::laplacian_multiply(lap.values(), grid_.n, M_PI / grid_.half_length, 1.0);
    const double kin = -grid_.cell_volume() / double(grid_.size()) *
                       k::real_dot(spec.values(), lap.values());
    const double quad = weighted_norm2(theta, w_);
    const double cross = integrate(multiply(theta, z_)).real();
    return eps_ * eps_ * kin + quad - 2.0 * cross;
  }

 private:
  double eps_;
  SymmetrySector s_;
  const RadialProfile& p1_;
  const ScalarFunction& v_;
  const ScalarField& w_;
  Grid3 grid_;
  ScalarField z_;
  double constant_ = 0.0;
};

std::vector<Point3> find_peaks(const ScalarField& a, double fraction) {
  const Grid3& g = a.grid();
  const int n = g.n;
  double top = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) top = std::max(top, a[i].real());
  std::vector<Point3> peaks;
  if (!(top > 0.0)) return peaks;
  auto at = [&](int i, int j, int kk) { return a[g.index(i, j, kk)].real(); };
  for (int i = 1; i < n - 1; ++i)
    for (int j = 1; j < n - 1; ++j)
      for (int kk = 1; kk < n - 1; ++kk) {
        const double c = at(i, j, kk);
        if (c < fraction * top) continue;
        bool is_max = true;
        for (int di = -1; di <= 1 && is_max; ++di)
          for (int dj = -1; dj <= 1 && is_max; ++dj)
            for (int dk = -1; dk <= 1 && is_max; ++dk) {
              if (di == 0 && dj == 0 && dk == 0) continue;
              const double nb = at(i + di, j + dj, kk + dk);
              // ties go to the first node in index order
              const bool earlier = di < 0 || (di == 0 && (dj < 0 || (dj == 0 && dk < 0)));
              if (nb > c || (earlier && nb == c)) is_max = false;
            }
        if (!is_max) continue;
        // Parabolic refinement along each axis.
        const int idx[3] = {i, j, kk};
        Point3 x = g.node(g.index(i, j, kk));
        for (int ax = 0; ax < 3; ++ax) {
          int lo[3] = {idx[0], idx[1], idx[2]}, hi[3] = {idx[0], idx[1], idx[2]};
          --lo[ax];
          ++hi[ax];
          const double fm = at(lo[0], lo[1], lo[2]);
          const double fp = at(hi[0], hi[1], hi[2]);
          const double den = fm - 2.0 * c + fp;
          if (den < 0.0) {
            const double off = std::clamp(0.5 * (fm - fp) / den, -0.5, 0.5);
            x[std::size_t(ax)] += off * g.spacing;
          }
        }
        peaks.push_back(x);
      }
  return peaks;
}

}  // namespace

ScalarFunction truncated_potential(const ScalarFunction& v, double cap) {
  return [v, cap](const Point3& x) { return std::min(v(x), cap); };
}

ScalarField truncated_potential(const ScalarField& v, double cap) {
  ScalarField w(v.grid(), true);
  for (std::size_t i = 0; i < v.size(); ++i) w[i] = std::min(v[i].real(), cap);
  return w;
}

double default_truncation(const ScalarField& v) {
  const Grid3& g = v.grid();
  const int n = g.n;
  std::vector<double> vals;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int kk = 0; kk < n; ++kk) {
        if (i != 0 && i != n - 1 && j != 0 && j != n - 1 && kk != 0 &&
            kk != n - 1)
          continue;
        vals.push_back(v[g.index(i, j, kk)].real());
      }
  const std::size_t pos = std::size_t(0.9 * double(vals.size() - 1));
  std::nth_element(vals.begin(), vals.begin() + std::ptrdiff_t(pos), vals.end());
  return vals[pos];
}

ScalarField theta_template(const Point3& xi, double epsilon,
                           const SymmetrySector& s, const RadialProfile& profile,
                           const Grid3& grid) {
  check_resolution(epsilon, grid);
  ScalarField out(grid, true);
  for (const Point3& q : orbit_points(xi, s, 0.5 * grid.spacing))
    out += embed_3d(profile, grid, q, 1.0 / epsilon, OutOfRange::kZero);
  return out;
}

ConcentrationReport localize(const ScalarField& u, double epsilon,
                             const SymmetrySector& s,
                             const RadialProfile& profile1,
                             const ScalarFunction& v, const ScalarField& w,
                             const std::vector<Point3>& candidates,
                             const LocalizeOptions& opts) {
  require_same_grid(u.grid(), w.grid(), "localize");
  if (std::abs(profile1.lambda - 1.0) > 1e-12)
    throw Error("localize: templates need the lambda = 1 profile");
  const Grid3& g = u.grid();
  check_resolution(epsilon, g);
  const ScalarField a = abs(u);
  if (sup_norm(a) == 0.0) throw Error("localize: zero field");

  std::vector<Point3> raw = find_peaks(a, opts.peak_fraction);
  raw.insert(raw.end(), candidates.begin(), candidates.end());
  if (raw.empty()) throw Error("localize: no local maxima found");
  // One representative per orbit.
  std::vector<Point3> reps;
  for (const Point3& x : raw) {
    bool seen = false;
    for (const Point3& r : reps)
      for (const Point3& q : orbit_points(r, s, 0.5 * g.spacing))
        if (dist(q, x) < 2.0 * g.spacing) seen = true;
    if (!seen) reps.push_back(x);
  }

  const TemplateObjective objective(a, epsilon, s, profile1, v, w);
  const double e3 = epsilon * epsilon * epsilon;
  std::vector<double> values;
  std::vector<Point3> refined;
  for (const Point3& start : reps) {
    Point3 xi = start;
    double best = objective(xi);
    double step = 0.1 * g.spacing;
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
      bool improved = false;
      for (int ax = 0; ax < 3; ++ax) {
        for (double dir : {1.0, -1.0}) {
          Point3 trial = xi;
          trial[std::size_t(ax)] += dir * step;
          const double f = objective(trial);
          if (f < best) {
            best = f;
            xi = trial;
            improved = true;
            break;
          }
        }
      }
      if (!improved) {
        step *= 0.5;
        if (step < 1e-6 * g.spacing) break;
      }
    }
    values.push_back((best + objective.constant()) / e3);
    refined.push_back(xi);
  }

  std::size_t arg = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[arg]) arg = i;
  ConcentrationReport rep;
  rep.candidates_considered = int(reps.size());
  rep.xi = refined[arg];
  rep.orbit = orbit_info(rep.xi, s, 0.5 * g.spacing);
  double runner = objective.constant() / e3;
  if (values.size() > 1) {
    runner = INFINITY;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (i != arg) runner = std::min(runner, values[i]);
  }
  rep.margin = std::max(0.0, runner - values[arg]);

  const double lambda = v(rep.xi);
  // omega_lambda(r) = lambda omega_1(sqrt(lambda) r)
  ScalarField theta(g, true);
  for (const Point3& q : orbit_points(rep.xi, s, 0.5 * g.spacing))
    theta += embed_3d(profile1, g, q, std::sqrt(lambda) / epsilon,
                      OutOfRange::kZero);
  theta *= lambda;
  ScalarField diff = a - theta;
  rep.objective_scaled = eps_norm2(diff, epsilon, &w) / e3;
  rep.residual_scaled = eps_norm2(diff, epsilon, nullptr) / e3;
  return rep;
}

double concentration_residual(const ScalarField& u, double epsilon,
                              const Point3& xi, const SymmetrySector& s,
                              const RadialProfile& profile, double lambda_xi) {
  if (std::abs(profile.lambda - lambda_xi) > 1e-6)
    throw Error("concentration_residual: profile lambda differs from V(xi)");
  const ScalarField theta = theta_template(xi, epsilon, s, profile, u.grid());
  const ScalarField diff = abs(u) - theta;
  return eps_norm2(diff, epsilon, nullptr) / (epsilon * epsilon * epsilon);
}

InequalityChain inequality_chain(const ScalarField& u, const Potentials& p,
                                 const CoulombKernel& kernel, double cap,
                                 double slack) {
  const Grid3& g = p.grid();
  const ScalarField a = abs(u);
  const Potentials pw = make_potentials(g, p.epsilon, zero_vector_potential(),
                                        truncated_potential(p.v_func, cap));
  const Potentials pv =
      make_potentials(g, p.epsilon, zero_vector_potential(), p.v_func);
  InequalityChain c;
  c.truncated = projected_energy(a, pw, kernel);
  c.modulus = projected_energy(a, pv, kernel);
  c.full = energy(u, p, kernel).total;
  c.holds = c.truncated <= c.modulus + slack * std::abs(c.modulus) &&
            c.modulus <= c.full + slack * std::abs(c.full);
  return c;
}

}  // namespace chq
