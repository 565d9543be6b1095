#include "chq/coulomb.hpp"

#include <algorithm>
#include <cmath>

#include "chq/fft.hpp"
#include "chq/kernels.hpp"

namespace chq {
namespace {

struct PaddedWorkspace {
  AlignedVector<double> real;
  AlignedVector<cplx> spec;

  void resize(int m) {
    const std::size_t mm = std::size_t(m);
    if (real.size() != mm * mm * mm) {
      real.assign(mm * mm * mm, 0.0);
      spec.assign(mm * mm * (mm / 2 + 1), cplx(0.0));
    }
  }
};

PaddedWorkspace& workspace(int m) {
  thread_local PaddedWorkspace ws;
  ws.resize(m);
  return ws;
}

}  // namespace

CoulombKernel::CoulombKernel(const Grid3& grid, OriginRule rule)
    : grid_(grid), rule_(rule), m_(2 * grid.n) {
  const int m = m_;
  const std::size_t mm = std::size_t(m);
  const double h = grid.spacing;
  const double origin = rule == OriginRule::kLatticeCorrected
                            ? kOriginLatticeCorrected
                            : kOriginCellAverage;
  AlignedVector<double> g(mm * mm * mm);
  auto image = [m](int a) { return a <= m / 2 ? a : a - m; };
  const std::ptrdiff_t mi = m;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < mi; ++i) {
    const double di = image(int(i));
    for (int j = 0; j < m; ++j) {
      const double dj = image(j);
      for (int k = 0; k < m; ++k) {
        const double dk = image(k);
        const double r = std::sqrt(di * di + dj * dj + dk * dk);
        const double inv = r == 0.0 ? origin : 1.0 / r;
        // 1/|x| at distance r h, times the cell volume h^3.
        g[(std::size_t(i) * mm + std::size_t(j)) * mm + std::size_t(k)] =
            inv * h * h;
      }
    }
  }
  AlignedVector<cplx> spec(mm * mm * (mm / 2 + 1));
  fft::r2c(g.data(), spec.data(), m);
  multiplier_.resize(spec.size());
  const double scale = 1.0 / double(mm * mm * mm);
  double lo = INFINITY;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    multiplier_[i] = spec[i].real() * scale;
    lo = std::min(lo, multiplier_[i]);
  }
  min_multiplier_ = lo;
  if (lo < 0.0)
    throw Error("CoulombKernel: negative spectral multiplier; grid too coarse");
}

ScalarField CoulombKernel::convolve(const ScalarField& rho) const {
  require_same_grid(rho.grid(), grid_, "hartree_potential");
  const int n = grid_.n;
  const int m = m_;
  const std::size_t nn = std::size_t(n);
  const std::size_t mm = std::size_t(m);
  PaddedWorkspace& ws = workspace(m);
  std::fill(ws.real.begin(), ws.real.end(), 0.0);
  const std::ptrdiff_t ni = n;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nn; ++j) {
      const cplx* src = rho.data() + (std::size_t(i) * nn + j) * nn;
      double* dst = ws.real.data() + (std::size_t(i) * mm + j) * mm;
      for (std::size_t k = 0; k < nn; ++k) dst[k] = src[k].real();
    }
  }
  fft::r2c(ws.real.data(), ws.spec.data(), m);
  kernels::omp::real_multiply(multiplier_, ws.spec);
  fft::c2r(ws.spec.data(), ws.real.data(), m);
  ScalarField out(grid_, true);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nn; ++j) {
      const double* src = ws.real.data() + (std::size_t(i) * mm + j) * mm;
      cplx* dst = out.data() + (std::size_t(i) * nn + j) * nn;
      for (std::size_t k = 0; k < nn; ++k) dst[k] = src[k];
    }
  }
  return out;
}

ScalarField hartree_potential(const ScalarField& rho,
                              const CoulombKernel& kernel) {
  if (!rho.is_real()) throw Error("hartree_potential: density must be real");
  return kernel.convolve(rho);
}

double hartree_energy(const ScalarField& u, const CoulombKernel& kernel) {
  require_same_grid(u.grid(), kernel.grid(), "hartree_energy");
  const ScalarField rho = abs2(u);
  const ScalarField pot = kernel.convolve(rho);
  return integrate(multiply(rho, pot)).real();
}

HlsBound hls_check(const ScalarField& u, const CoulombKernel& kernel,
                   double constant) {
  HlsBound out;
  out.lhs = hartree_energy(u, kernel);
  double s = 0.0;
  for (const cplx& z : u.values()) s += std::pow(std::abs(z), 12.0 / 5.0);
  const double lp = std::pow(s * u.grid().cell_volume(), 5.0 / 12.0);
  out.rhs = constant * std::pow(lp, 4.0);
  return out;
}

}  // namespace chq
