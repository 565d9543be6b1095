#include "chq/field.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "chq/fft.hpp"
#include "chq/kernels.hpp"

namespace chq {

namespace k = kernels::omp;

double Grid3::wavenumber(int i) const {
  const double dk = M_PI / half_length;
  return (i < n / 2 ? i : i - n) * dk;
}

Grid3 make_grid(int n, double half_length) {
  if (n < 8) throw Error("make_grid: n must be at least 8");
  if (n % 2 != 0) throw Error("make_grid: n must be even");
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw Error("make_grid: half length must be positive");
  kernels::thread_count();
  Grid3 g;
  g.n = n;
  g.spacing = 2.0 * half_length / n;
  // Store L so that spacing * n == 2 * L holds bitwise.
  g.half_length = (g.spacing * n) / 2.0;
  return g;
}

void require_same_grid(const Grid3& a, const Grid3& b, const char* where) {
  if (!(a == b)) throw Error(std::string(where) + ": grid mismatch");
}

ScalarField::ScalarField(const Grid3& grid, bool real)
    : grid_(grid), values_(grid.size()), real_(real) {}

void ScalarField::set_real(bool real) {
  real_ = real;
  if (!real) return;
  const std::ptrdiff_t n = std::ptrdiff_t(values_.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) values_[i].imag(0.0);
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "field addition");
  k::axpby(1.0, other.values(), 1.0, values());
  real_ = real_ && other.real_;
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "field subtraction");
  k::axpby(-1.0, other.values(), 1.0, values());
  real_ = real_ && other.real_;
  return *this;
}

ScalarField& ScalarField::operator*=(cplx c) {
  k::axpby(0.0, values(), c, values());
  if (c.imag() != 0.0) real_ = false;
  return *this;
}

ScalarField& ScalarField::operator*=(double c) { return *this *= cplx(c, 0.0); }

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(cplx c, ScalarField a) { return a *= c; }
ScalarField operator*(double c, ScalarField a) { return a *= c; }

VectorField::VectorField(ScalarField x, ScalarField y, ScalarField z)
    : c{std::move(x), std::move(y), std::move(z)} {
  require_same_grid(c[0].grid(), c[1].grid(), "vector field");
  require_same_grid(c[0].grid(), c[2].grid(), "vector field");
}

cplx integrate(const ScalarField& f) {
  return f.grid().cell_volume() * k::sum(f.values());
}

cplx inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "inner");
  return a.grid().cell_volume() * k::dot(a.values(), b.values());
}

double norm2(const ScalarField& f) {
  return f.grid().cell_volume() * k::norm2(f.values());
}

double weighted_norm2(const ScalarField& f, const ScalarField& w) {
  require_same_grid(f.grid(), w.grid(), "weighted_norm2");
  return f.grid().cell_volume() * k::weighted_norm2(f.values(), w.values());
}

double sup_norm(const ScalarField& f) { return k::max_abs(f.values()); }

double max_imag(const ScalarField& f) {
  double m = 0.0;
  for (const cplx& z : f.values()) m = std::max(m, std::abs(z.imag()));
  return m;
}

ScalarField abs(const ScalarField& f) {
  ScalarField out(f.grid(), true);
  const std::ptrdiff_t n = std::ptrdiff_t(f.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = std::abs(f[i]);
  return out;
}

ScalarField abs2(const ScalarField& f) {
  ScalarField out(f.grid(), true);
  k::abs2(f.values(), out.values());
  return out;
}

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "multiply");
  ScalarField out = b;
  k::multiply(a.values(), out.values());
  out.set_real(a.is_real() && b.is_real());
  return out;
}

ScalarField conj(const ScalarField& f) {
  ScalarField out = f;
  for (cplx& z : out.values()) z = std::conj(z);
  return out;
}

ScalarField forward_transform(const ScalarField& f) {
  ScalarField out = f;
  out.set_real(false);
  fft::forward(out.data(), f.grid().n);
  out *= 1.0 / std::sqrt(double(f.size()));
  return out;
}

ScalarField inverse_transform(const ScalarField& f) {
  ScalarField out = f;
  out.set_real(false);
  fft::backward(out.data(), f.grid().n);
  out *= 1.0 / std::sqrt(double(f.size()));
  return out;
}

ScalarField derivative(const ScalarField& f, int axis) {
  const Grid3& g = f.grid();
  ScalarField out = f;
  out.set_real(false);
  fft::forward(out.data(), g.n);
  k::derivative_multiply(out.values(), g.n, axis, M_PI / g.half_length,
                         1.0 / double(g.size()));
  fft::backward(out.data(), g.n);
  if (f.is_real()) out.set_real(true);
  return out;
}

VectorField gradient(const ScalarField& f) {
  const Grid3& g = f.grid();
  ScalarField spec = f;
  spec.set_real(false);
  fft::forward(spec.data(), g.n);
  VectorField out;
  for (int a = 0; a < 3; ++a) {
    ScalarField d = spec;
    k::derivative_multiply(d.values(), g.n, a, M_PI / g.half_length,
                           1.0 / double(g.size()));
    fft::backward(d.data(), g.n);
    if (f.is_real()) d.set_real(true);
    out.c[a] = std::move(d);
  }
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  const Grid3& g = f.grid();
  ScalarField out = f;
  out.set_real(false);
  fft::forward(out.data(), g.n);
  k::laplacian_multiply(out.values(), g.n, M_PI / g.half_length,
                        1.0 / double(g.size()));
  fft::backward(out.data(), g.n);
  if (f.is_real()) out.set_real(true);
  return out;
}

ScalarField divergence(const VectorField& v) {
  const Grid3& g = v.grid();
  ScalarField acc(g);
  fft::forward(acc.data(), g.n);
  for (int a = 0; a < 3; ++a) {
    ScalarField s = v[a];
    s.set_real(false);
    fft::forward(s.data(), g.n);
    k::derivative_multiply(s.values(), g.n, a, M_PI / g.half_length,
                           1.0 / double(g.size()));
    acc += s;
  }
  fft::backward(acc.data(), g.n);
  if (v[0].is_real() && v[1].is_real() && v[2].is_real()) acc.set_real(true);
  return acc;
}

namespace {

constexpr char kMagic[4] = {'C', 'H', 'Q', 'F'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put_le(unsigned char* dst, T value) {
  unsigned char raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T); ++i) dst[i] = raw[sizeof(T) - 1 - i];
  } else {
    std::memcpy(dst, raw, sizeof(T));
  }
}

template <class T>
T get_le(const unsigned char* src) {
  unsigned char raw[sizeof(T)];
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T); ++i) raw[i] = src[sizeof(T) - 1 - i];
  } else {
    std::memcpy(raw, src, sizeof(T));
  }
  T value;
  std::memcpy(&value, raw, sizeof(T));
  return value;
}

}  // namespace

// Header: magic[4] version:u32 n:u32 pad:u32 L:f64 real:u8 pad[7].
void write_field(const std::filesystem::path& path, const ScalarField& f) {
  unsigned char header[32] = {};
  std::memcpy(header, kMagic, 4);
  put_le<std::uint32_t>(header + 4, kVersion);
  put_le<std::uint32_t>(header + 8, std::uint32_t(f.grid().n));
  put_le<double>(header + 16, f.grid().half_length);
  header[24] = f.is_real() ? 1 : 0;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_field: cannot open " + path.string());
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  std::vector<unsigned char> buf(f.size() * 16);
  for (std::size_t i = 0; i < f.size(); ++i) {
    put_le<double>(buf.data() + 16 * i, f[i].real());
    put_le<double>(buf.data() + 16 * i + 8, f[i].imag());
  }
  out.write(reinterpret_cast<const char*>(buf.data()),
            std::streamsize(buf.size()));
  if (!out) throw Error("write_field: write failed for " + path.string());
}

ScalarField read_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("read_field: cannot open " + path.string());
  unsigned char header[32];
  in.read(reinterpret_cast<char*>(header), sizeof header);
  if (!in || std::memcmp(header, kMagic, 4) != 0)
    throw Error("read_field: bad magic in " + path.string());
  if (get_le<std::uint32_t>(header + 4) != kVersion)
    throw Error("read_field: unsupported version in " + path.string());
  const int n = int(get_le<std::uint32_t>(header + 8));
  const double half_length = get_le<double>(header + 16);
  const bool real = header[24] != 0;
  ScalarField f(make_grid(n, half_length));
  std::vector<unsigned char> buf(f.size() * 16);
  in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size()));
  if (!in) throw Error("read_field: truncated data in " + path.string());
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] = cplx(get_le<double>(buf.data() + 16 * i),
                get_le<double>(buf.data() + 16 * i + 8));
  }
  f.set_real(real);
  return f;
}

}  // namespace chq
