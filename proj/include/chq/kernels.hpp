#pragma once

// Pointwise, reduction and spectral-multiply loops shared by every module.
// Each kernel exists as a serial reference and an OpenMP variant. The
// reductions sum fixed-size blocks and then combine block sums pairwise, so
// both variants return bitwise identical results for any thread count.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace chq::kernels {

using cplx = std::complex<double>;

inline constexpr std::size_t kBlock = 2048;

// Thread count taken from CHQ_THREADS, else the OpenMP default.
int thread_count();

namespace detail {

template <class T>
T pairwise(std::vector<T>& parts) {
  if (parts.empty()) return T{};
  std::size_t len = parts.size();
  while (len > 1) {
    const std::size_t half = (len + 1) / 2;
    for (std::size_t i = 0; i + half < len; ++i) parts[i] += parts[i + half];
    len = half;
  }
  return parts[0];
}

template <bool Par, class T, class BlockFn>
std::vector<T> block_results(std::size_t n, BlockFn&& block) {
  const std::size_t nb = (n + kBlock - 1) / kBlock;
  std::vector<T> parts(nb);
  const std::ptrdiff_t nbs = std::ptrdiff_t(nb);
#pragma omp parallel for schedule(static) if (Par)
  for (std::ptrdiff_t b = 0; b < nbs; ++b) {
    const std::size_t lo = std::size_t(b) * kBlock;
    parts[std::size_t(b)] = block(lo, std::min(n, lo + kBlock));
  }
  return parts;
}

template <bool Par, class T, class BlockFn>
T reduce(std::size_t n, BlockFn&& block) {
  std::vector<T> parts = block_results<Par, T>(n, block);
  return pairwise(parts);
}

template <bool Par>
void axpby(cplx a, std::span<const cplx> x, cplx b, std::span<cplx> y) {
  const std::ptrdiff_t n = std::ptrdiff_t(y.size());
#pragma omp parallel for schedule(static) if (Par)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

template <bool Par>
void multiply(std::span<const cplx> x, std::span<cplx> y) {
  const std::ptrdiff_t n = std::ptrdiff_t(y.size());
#pragma omp parallel for schedule(static) if (Par)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] *= x[i];
}

template <bool Par>
void abs2(std::span<const cplx> x, std::span<cplx> out) {
  const std::ptrdiff_t n = std::ptrdiff_t(x.size());
#pragma omp parallel for schedule(static) if (Par)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = std::norm(x[i]);
}

template <bool Par>
cplx sum(std::span<const cplx> x) {
  return reduce<Par, cplx>(x.size(), [&](std::size_t lo, std::size_t hi) {
    cplx s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += x[i];
    return s;
  });
}

template <bool Par>
cplx dot(std::span<const cplx> x, std::span<const cplx> y) {
  return reduce<Par, cplx>(x.size(), [&](std::size_t lo, std::size_t hi) {
    cplx s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += std::conj(x[i]) * y[i];
    return s;
  });
}

template <bool Par>
double real_dot(std::span<const cplx> x, std::span<const cplx> y) {
  return reduce<Par, double>(x.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i)
      s += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    return s;
  });
}

template <bool Par>
double norm2(std::span<const cplx> x) {
  return reduce<Par, double>(x.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += std::norm(x[i]);
    return s;
  });
}

template <bool Par>
double weighted_norm2(std::span<const cplx> x, std::span<const cplx> w) {
  return reduce<Par, double>(x.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += w[i].real() * std::norm(x[i]);
    return s;
  });
}

template <bool Par>
double max_abs(std::span<const cplx> x) {
  const std::vector<double> parts =
      block_results<Par, double>(x.size(), [&](std::size_t lo, std::size_t hi) {
        double m = 0.0;
        for (std::size_t i = lo; i < hi; ++i) m = std::max(m, std::abs(x[i]));
        return m;
      });
  return parts.empty() ? 0.0 : *std::max_element(parts.begin(), parts.end());
}

// f[idx] *= i * k_axis * scale, Nyquist bin zeroed.
template <bool Par>
void derivative_multiply(std::span<cplx> f, int n, int axis, double dk,
                         double scale) {
  const std::ptrdiff_t total = std::ptrdiff_t(f.size());
  const std::size_t nn = std::size_t(n);
#pragma omp parallel for schedule(static) if (Par)
  for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
    const std::size_t u = std::size_t(idx);
    const std::size_t c = axis == 0 ? u / (nn * nn)
                          : axis == 1 ? (u / nn) % nn
                                      : u % nn;
    const int ic = int(c);
    const int sk = ic < n / 2 ? ic : ic - n;
    const double k = ic == n / 2 ? 0.0 : sk * dk;
    f[u] *= cplx(0.0, k * scale);
  }
}

// f[idx] *= -(sum of k_a^2) * scale, Nyquist bins zeroed per axis.
template <bool Par>
void laplacian_multiply(std::span<cplx> f, int n, double dk, double scale) {
  const std::ptrdiff_t total = std::ptrdiff_t(f.size());
  const std::size_t nn = std::size_t(n);
  auto k2 = [n, dk](std::size_t c) {
    const int ic = int(c);
    if (ic == n / 2) return 0.0;
    const double k = (ic < n / 2 ? ic : ic - n) * dk;
    return k * k;
  };
#pragma omp parallel for schedule(static) if (Par)
  for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
    const std::size_t u = std::size_t(idx);
    const double s = k2(u / (nn * nn)) + k2((u / nn) % nn) + k2(u % nn);
    f[u] *= -s * scale;
  }
}

template <bool Par>
void real_multiply(std::span<const double> m, std::span<cplx> f) {
  const std::ptrdiff_t n = std::ptrdiff_t(f.size());
#pragma omp parallel for schedule(static) if (Par)
  for (std::ptrdiff_t i = 0; i < n; ++i) f[i] *= m[i];
}

}  // namespace detail

namespace serial {
inline void axpby(cplx a, std::span<const cplx> x, cplx b, std::span<cplx> y) {
  detail::axpby<false>(a, x, b, y);
}
inline void multiply(std::span<const cplx> x, std::span<cplx> y) {
  detail::multiply<false>(x, y);
}
inline void abs2(std::span<const cplx> x, std::span<cplx> out) {
  detail::abs2<false>(x, out);
}
inline cplx sum(std::span<const cplx> x) { return detail::sum<false>(x); }
inline cplx dot(std::span<const cplx> x, std::span<const cplx> y) {
  return detail::dot<false>(x, y);
}
inline double real_dot(std::span<const cplx> x, std::span<const cplx> y) {
  return detail::real_dot<false>(x, y);
}
inline double norm2(std::span<const cplx> x) { return detail::norm2<false>(x); }
inline double weighted_norm2(std::span<const cplx> x,
                             std::span<const cplx> w) {
  return detail::weighted_norm2<false>(x, w);
}
inline double max_abs(std::span<const cplx> x) {
  return detail::max_abs<false>(x);
}
inline void derivative_multiply(std::span<cplx> f, int n, int axis, double dk,
                                double scale) {
  detail::derivative_multiply<false>(f, n, axis, dk, scale);
}
inline void laplacian_multiply(std::span<cplx> f, int n, double dk,
                               double scale) {
  detail::laplacian_multiply<false>(f, n, dk, scale);
}
inline void real_multiply(std::span<const double> m, std::span<cplx> f) {
  detail::real_multiply<false>(m, f);
}
}  // namespace serial

namespace omp {
inline void axpby(cplx a, std::span<const cplx> x, cplx b, std::span<cplx> y) {
  detail::axpby<true>(a, x, b, y);
}
inline void multiply(std::span<const cplx> x, std::span<cplx> y) {
  detail::multiply<true>(x, y);
}
inline void abs2(std::span<const cplx> x, std::span<cplx> out) {
  detail::abs2<true>(x, out);
}
inline cplx sum(std::span<const cplx> x) { return detail::sum<true>(x); }
inline cplx dot(std::span<const cplx> x, std::span<const cplx> y) {
  return detail::dot<true>(x, y);
}
inline double real_dot(std::span<const cplx> x, std::span<const cplx> y) {
  return detail::real_dot<true>(x, y);
}
inline double norm2(std::span<const cplx> x) { return detail::norm2<true>(x); }
inline double weighted_norm2(std::span<const cplx> x,
                             std::span<const cplx> w) {
  return detail::weighted_norm2<true>(x, w);
}
inline double max_abs(std::span<const cplx> x) {
  return detail::max_abs<true>(x);
}
inline void derivative_multiply(std::span<cplx> f, int n, int axis, double dk,
                                double scale) {
  detail::derivative_multiply<true>(f, n, axis, dk, scale);
}
inline void laplacian_multiply(std::span<cplx> f, int n, double dk,
                               double scale) {
  detail::laplacian_multiply<true>(f, n, dk, scale);
}
inline void real_multiply(std::span<const double> m, std::span<cplx> f) {
  detail::real_multiply<true>(m, f);
}
}  // namespace omp

}  // namespace chq::kernels
