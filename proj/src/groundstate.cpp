#include "chq/groundstate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace chq {
namespace {

// Unknowns v_1 .. v_N of v = r omega on r_i = i h, with v_0 = 0, odd
// reflection v_{-1} = -v_1 and v_{N+1} = v_{N+2} = 0.
class RadialMesh {
 public:
  RadialMesh(int nr, double r_max, double lambda)
      : n_(nr - 1), h_(r_max / (nr - 1)), lambda_(lambda) {
    if (nr < 16) throw Error("radial mesh: nr must be at least 16");
    factor();
  }

  int size() const { return n_; }
  double h() const { return h_; }
  double r(int i) const { return (i + 1) * h_; }

  // K v = -v'' + lambda v, fourth-order five-point stencil.
  std::vector<double> apply(const std::vector<double>& v) const {
    std::vector<double> out(static_cast<std::size_t>(n_));
    const double c = 1.0 / (12.0 * h_ * h_);
    auto at = [&](int i) -> double {
      if (i == -1) return 0.0;
      if (i == -2) return -v[0];
      if (i >= n_) return 0.0;
      return v[std::size_t(i)];
    };
    for (int i = 0; i < n_; ++i) {
      const double lap = -at(i - 2) + 16.0 * at(i - 1) - 30.0 * at(i) +
                         16.0 * at(i + 1) - at(i + 2);
      out[std::size_t(i)] = -c * lap + lambda_ * at(i);
    }
    return out;
  }

  // K^{-1} b via the banded LDL^T factorization.
  std::vector<double> solve(const std::vector<double>& b) const {
    const std::size_t n = std::size_t(n_);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = b[i];
      if (i >= 1) s -= l1_[i - 1] * y[i - 1];
      if (i >= 2) s -= l2_[i - 2] * y[i - 2];
      y[i] = s;
    }
    for (std::size_t i = 0; i < n; ++i) y[i] /= d_[i];
    for (std::size_t ii = n; ii-- > 0;) {
      double s = y[ii];
      if (ii + 1 < n) s -= l1_[ii] * y[ii + 1];
      if (ii + 2 < n) s -= l2_[ii] * y[ii + 2];
      y[ii] = s;
    }
    return y;
  }

  // Phi = r U from Phi'' = -4 pi v^2 / r, Phi(0) = 0, Phi(r_{N+1}) = Q.
  // Returns U at the unknown nodes.
  std::vector<double> potential(const std::vector<double>& v) const {
    const std::size_t n = std::size_t(n_);
    std::vector<double> f(n + 2, 0.0);
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double rr = r(int(i));
      f[i + 1] = 4.0 * M_PI * v[i] * v[i] / rr;
      q += v[i] * v[i];
    }
    q *= 4.0 * M_PI * h_;
    // Tridiagonal (1, -2, 1) system, Thomas algorithm.
    std::vector<double> rhs(n), cp(n), phi(n);
    const double w = h_ * h_ / 12.0;
    for (std::size_t i = 0; i < n; ++i)
      rhs[i] = -w * (f[i] + 10.0 * f[i + 1] + f[i + 2]);
    rhs[n - 1] -= q;
    double denom = -2.0;
    cp[0] = 1.0 / denom;
    phi[0] = rhs[0] / denom;
    for (std::size_t i = 1; i < n; ++i) {
      denom = -2.0 - cp[i - 1];
      cp[i] = 1.0 / denom;
      phi[i] = (rhs[i] - phi[i - 1]) / denom;
    }
    for (std::size_t ii = n - 1; ii-- > 0;) phi[ii] -= cp[ii] * phi[ii + 1];
    for (std::size_t i = 0; i < n; ++i) phi[i] /= r(int(i));
    return phi;
  }

  double norm2(const std::vector<double>& v) const {
    const std::vector<double> kv = apply(v);
    double s = 0.0;
    for (std::size_t i = 0; i < kv.size(); ++i) s += v[i] * kv[i];
    return 4.0 * M_PI * h_ * s;
  }

  double hartree(const std::vector<double>& v,
                 const std::vector<double>& u) const {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += u[i] * v[i] * v[i];
    return 4.0 * M_PI * h_ * s;
  }

  double mass(const std::vector<double>& v) const {
    double s = 0.0;
    for (double x : v) s += x * x;
    return 4.0 * M_PI * h_ * s;
  }

 private:
  void factor() {
    const std::size_t n = std::size_t(n_);
    const double c = 1.0 / (12.0 * h_ * h_);
    d_.assign(n, 0.0);
    l1_.assign(n, 0.0);
    l2_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double diag = (i == 0 ? 29.0 : 30.0) * c + lambda_;
      const double e1 = -16.0 * c;
      const double e2 = 1.0 * c;
      double di = diag;
      if (i >= 1) di -= l1_[i - 1] * l1_[i - 1] * d_[i - 1];
      if (i >= 2) di -= l2_[i - 2] * l2_[i - 2] * d_[i - 2];
      if (!(di > 0.0)) throw Error("radial mesh: operator not positive");
      d_[i] = di;
      double a1 = e1;
      if (i >= 1) a1 -= l2_[i - 1] * d_[i - 1] * l1_[i - 1];
      l1_[i] = a1 / di;
      l2_[i] = e2 / di;
    }
  }

  int n_;
  double h_;
  double lambda_;
  std::vector<double> d_, l1_, l2_;
};

std::vector<double> to_omega(const RadialMesh& mesh,
                             const std::vector<double>& v) {
  std::vector<double> out(v.size() + 1);
  for (std::size_t i = 0; i < v.size(); ++i) out[i + 1] = v[i] / mesh.r(int(i));
  out[0] = (15.0 * out[1] - 6.0 * out[2] + out[3]) / 10.0;
  return out;
}

std::vector<double> to_v(const RadialMesh& mesh, const std::vector<double>& f) {
  std::vector<double> v(static_cast<std::size_t>(mesh.size()));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f[i + 1] * mesh.r(int(i));
  return v;
}

}  // namespace

double RadialProfile::operator()(double r) const {
  const double h = spacing();
  const double s = std::abs(r) / h;
  if (s > nr - 1) return 0.0;
  const int i = std::min(int(s), nr - 2);
  const double t = s - i;
  auto at = [this](int idx) {
    idx = std::abs(idx);
    return idx < nr ? values[std::size_t(idx)] : 0.0;
  };
  const double lm = -t * (t - 1.0) * (t - 2.0) / 6.0;
  const double l0 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
  const double l1 = -(t + 1.0) * t * (t - 2.0) / 2.0;
  const double l2 = (t + 1.0) * t * (t - 1.0) / 6.0;
  return lm * at(i - 1) + l0 * at(i) + l1 * at(i + 1) + l2 * at(i + 2);
}

double RadialProfile::derivative(double r) const {
  const double h = spacing();
  const double s = std::abs(r) / h;
  if (s > nr - 1) return 0.0;
  const int i = std::min(int(s), nr - 2);
  const double t = s - i;
  auto at = [this](int idx) {
    idx = std::abs(idx);
    return idx < nr ? values[std::size_t(idx)] : 0.0;
  };
  const double dm = -(3.0 * t * t - 6.0 * t + 2.0) / 6.0;
  const double d0 = (3.0 * t * t - 4.0 * t - 1.0) / 2.0;
  const double d1 = -(3.0 * t * t - 2.0 * t - 2.0) / 2.0;
  const double d2 = (3.0 * t * t - 1.0) / 6.0;
  const double g =
      (dm * at(i - 1) + d0 * at(i) + d1 * at(i + 1) + d2 * at(i + 2)) / h;
  return r < 0.0 ? -g : g;
}

RadialProfile solve_limit(double lambda, const LimitOptions& opts) {
  if (!(lambda > 0.0)) throw Error("solve_limit: lambda must be positive");
  const double r_max = opts.r_max_scaled / std::sqrt(lambda);
  const RadialMesh mesh(opts.nr, r_max, lambda);
  const std::size_t n = std::size_t(mesh.size());

  std::vector<double> v(n);
  if (!opts.initial.empty()) {
    if (int(opts.initial.size()) != opts.nr)
      throw Error("solve_limit: initial profile has the wrong length");
    v = to_v(mesh, opts.initial);
  } else {
    const double a = lambda / (opts.initial_width * opts.initial_width);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = mesh.r(int(i));
      v[i] = r * std::exp(-0.5 * a * r * r);
    }
  }
  auto rescale = [&](std::vector<double>& w) {
    const double n2 = mesh.norm2(w);
    const double d = mesh.hartree(w, mesh.potential(w));
    const double s = std::sqrt(n2 / d);
    for (double& x : w) x *= s;
  };
  rescale(v);

  RadialProfile out;
  out.lambda = lambda;
  out.r_max = r_max;
  out.nr = opts.nr;
  double residual = INFINITY;
  for (int it = 0; it < opts.max_iter; ++it) {
    const std::vector<double> u = mesh.potential(v);
    const std::vector<double> kv = mesh.apply(v);
    std::vector<double> uv(n);
    double top = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      uv[i] = u[i] * v[i];
      const double r = mesh.r(int(i));
      top = std::max(top, std::abs(kv[i]) / r);
      worst = std::max(worst, std::abs(kv[i] - uv[i]) / r);
    }
    residual = worst / top;
    const double n2 = mesh.norm2(v);
    const double d = mesh.hartree(v, u);
    out.nehari_gap = std::abs(n2 - d) / n2;
    out.iterations = it;
    if (residual < opts.tol && out.nehari_gap < opts.tol) {
      out.residual = residual;
      out.energy = 0.5 * n2 - 0.25 * d;
      out.values = to_omega(mesh, v);
      for (std::size_t i = 0; i < out.values.size(); ++i) {
        if (!(out.values[i] > 0.0))
          throw Error("solve_limit: profile lost positivity");
        if (i >= 2 && !(out.values[i] < out.values[i - 1])) out.monotone = false;
      }
      if (!(out.values.back() < 1e-8 * out.values.front()))
        throw Error("solve_limit: r_max too small for the decay");
      return out;
    }
    v = mesh.solve(uv);
    rescale(v);
  }
  throw NonConvergence("solve_limit: no convergence after " +
                           std::to_string(opts.max_iter) + " iterations",
                       residual);
}

RadialForms radial_forms(const std::vector<double>& f, double r_max,
                         double lambda) {
  const RadialMesh mesh(int(f.size()), r_max, lambda);
  const std::vector<double> v = to_v(mesh, f);
  RadialForms out;
  out.norm2 = mesh.norm2(v);
  out.hartree = mesh.hartree(v, mesh.potential(v));
  out.mass = mesh.mass(v);
  return out;
}

ScalarField embed_3d(const RadialProfile& p, const Grid3& grid,
                     const Point3& center, double inv_length,
                     OutOfRange policy) {
  if (policy == OutOfRange::kThrow) {
    double reach = 0.0;
    for (int c = 0; c < 8; ++c) {
      double s = 0.0;
      for (int a = 0; a < 3; ++a) {
        const double corner = (c >> a) & 1 ? grid.half_length : -grid.half_length;
        const double d = corner - center[std::size_t(a)];
        s += d * d;
      }
      reach = std::max(reach, std::sqrt(s));
    }
    if (reach * inv_length > p.r_max)
      throw Error("embed_3d: radius overflow, profile shorter than the grid");
  }
  return ScalarField::sample(grid, [&](const Point3& x) {
    const double dx = x[0] - center[0], dy = x[1] - center[1],
                 dz = x[2] - center[2];
    return p(std::sqrt(dx * dx + dy * dy + dz * dz) * inv_length);
  });
}

ScalingReport scaling_check(const RadialProfile& p1, double lambda,
                            const LimitOptions& opts) {
  if (std::abs(p1.lambda - 1.0) > 1e-12)
    throw Error("scaling_check: reference profile must have lambda = 1");
  ScalingReport rep;
  rep.direct = solve_limit(lambda, opts);
  rep.energy_ratio = rep.direct.energy / p1.energy;
  const double s = std::sqrt(lambda);
  const double h = rep.direct.spacing();
  for (int i = 0; i < rep.direct.nr; ++i) {
    const double r = i * h;
    rep.profile_gap =
        std::max(rep.profile_gap,
                 std::abs(rep.direct.values[std::size_t(i)] - lambda * p1(s * r)));
  }
  return rep;
}

void write_profile_csv(std::ostream& out, const RadialProfile& p) {
  char buf[160];
  out << "lambda,energy,nr,r_max\n";
  std::snprintf(buf, sizeof buf, "%.12g,%.12g,%d,%.12g\n", p.lambda, p.energy,
                p.nr, p.r_max);
  out << buf << "r,value\n";
  const double h = p.spacing();
  for (int i = 0; i < p.nr; ++i) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", i * h,
                  p.values[std::size_t(i)]);
    out << buf;
  }
}

void write_profile_csv(const std::filesystem::path& path,
                       const RadialProfile& p) {
  std::ofstream out(path);
  if (!out) throw Error("write_profile_csv: cannot open " + path.string());
  write_profile_csv(out, p);
}

RadialProfile read_profile_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("read_profile_csv: cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "lambda,energy,nr,r_max")
    throw Error("read_profile_csv: bad header in " + path.string());
  RadialProfile p;
  std::getline(in, line);
  char comma;
  std::istringstream meta(line);
  meta >> p.lambda >> comma >> p.energy >> comma >> p.nr >> comma >> p.r_max;
  if (!meta || p.nr < 4) throw Error("read_profile_csv: bad metadata");
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto pos = line.find(',');
    p.values.push_back(std::stod(line.substr(pos + 1)));
  }
  if (int(p.values.size()) != p.nr)
    throw Error("read_profile_csv: expected " + std::to_string(p.nr) + " rows");
  return p;
}

}  // namespace chq
