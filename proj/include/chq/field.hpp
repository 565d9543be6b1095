#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <filesystem>
#include <new>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <fftw3.h>

namespace chq {

using cplx = std::complex<double>;
using Point3 = std::array<double, 3>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Allocator that hands out FFTW-aligned storage so field buffers can be
// passed straight to cached plans.
template <class T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) noexcept {}
  T* allocate(std::size_t count) {
    void* p = fftw_malloc(count * sizeof(T));
    if (p == nullptr) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { fftw_free(p); }
  template <class U>
  bool operator==(const FftwAllocator<U>&) const noexcept {
    return true;
  }
};

template <class T>
using AlignedVector = std::vector<T, FftwAllocator<T>>;

// Cubic box [-L, L)^3 with n nodes per axis. Index layout is row-major,
// (i * n + j) * n + k, with i along x1.
struct Grid3 {
  int n = 0;
  double half_length = 0.0;
  double spacing = 0.0;

  std::size_t size() const { return std::size_t(n) * n * n; }
  double coord(int i) const { return -half_length + i * spacing; }
  std::size_t index(int i, int j, int k) const {
    return (std::size_t(i) * n + j) * n + k;
  }
  Point3 node(std::size_t idx) const {
    const std::size_t nn = std::size_t(n);
    return {coord(int(idx / (nn * nn))), coord(int((idx / nn) % nn)),
            coord(int(idx % nn))};
  }
  double cell_volume() const { return spacing * spacing * spacing; }
  // Angular wavenumber of FFT bin i; the Nyquist bin is reported as -n/2.
  double wavenumber(int i) const;
  bool operator==(const Grid3&) const = default;
};

Grid3 make_grid(int n, double half_length);
void require_same_grid(const Grid3& a, const Grid3& b, const char* where);

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid3& grid, bool real = false);

  // Samples f at every node. A double-valued f yields a real field.
  template <class F>
  static ScalarField sample(const Grid3& grid, F&& f);

  const Grid3& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  bool is_real() const { return real_; }
  // Setting the flag zeroes every imaginary part.
  void set_real(bool real);

  cplx* data() { return values_.data(); }
  const cplx* data() const { return values_.data(); }
  std::span<cplx> values() { return {values_.data(), values_.size()}; }
  std::span<const cplx> values() const {
    return {values_.data(), values_.size()};
  }
  cplx& operator[](std::size_t i) { return values_[i]; }
  const cplx& operator[](std::size_t i) const { return values_[i]; }

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(cplx c);
  ScalarField& operator*=(double c);

 private:
  Grid3 grid_{};
  AlignedVector<cplx> values_;
  bool real_ = false;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(cplx c, ScalarField a);
ScalarField operator*(double c, ScalarField a);

struct VectorField {
  std::array<ScalarField, 3> c;

  VectorField() = default;
  explicit VectorField(const Grid3& grid, bool real = false)
      : c{ScalarField(grid, real), ScalarField(grid, real),
          ScalarField(grid, real)} {}
  VectorField(ScalarField x, ScalarField y, ScalarField z);

  const Grid3& grid() const { return c[0].grid(); }
  ScalarField& operator[](int a) { return c[a]; }
  const ScalarField& operator[](int a) const { return c[a]; }
};

// h^3 times the sum of the samples, reduced in a fixed pairwise order.
cplx integrate(const ScalarField& f);
// integral of conj(a) b
cplx inner(const ScalarField& a, const ScalarField& b);
// integral of |f|^2
double norm2(const ScalarField& f);
// integral of w |f|^2 for a real weight w
double weighted_norm2(const ScalarField& f, const ScalarField& w);
double sup_norm(const ScalarField& f);
double max_imag(const ScalarField& f);

ScalarField abs(const ScalarField& f);
ScalarField abs2(const ScalarField& f);
ScalarField multiply(const ScalarField& a, const ScalarField& b);
ScalarField conj(const ScalarField& f);

// Unitary DFT pair: inverse_transform(forward_transform(f)) == f.
ScalarField forward_transform(const ScalarField& f);
ScalarField inverse_transform(const ScalarField& f);

// Spectral derivative along one axis, multiplier i k with the Nyquist bin
// dropped so the operator stays skew-adjoint.
ScalarField derivative(const ScalarField& f, int axis);
VectorField gradient(const ScalarField& f);
// Sum of the squared spectral derivatives (Nyquist dropped).
ScalarField laplacian(const ScalarField& f);
ScalarField divergence(const VectorField& v);

// Flat binary format: 32-byte header then n^3 interleaved (re, im) doubles.
void write_field(const std::filesystem::path& path, const ScalarField& f);
ScalarField read_field(const std::filesystem::path& path);

template <class F>
ScalarField ScalarField::sample(const Grid3& grid, F&& f) {
  using R = std::invoke_result_t<F&, const Point3&>;
  constexpr bool kReal = std::is_convertible_v<R, double> &&
                         !std::is_same_v<std::decay_t<R>, cplx>;
  ScalarField out(grid, kReal);
  const std::ptrdiff_t total = std::ptrdiff_t(grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
    out.values_[std::size_t(idx)] = cplx(f(grid.node(std::size_t(idx))));
  }
  return out;
}

}  // namespace chq
