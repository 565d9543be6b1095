#include <random>
#include <vector>

#include "chq/kernels.hpp"
#include "doctest.h"

using namespace chq;
using kernels::cplx;

namespace {

std::vector<cplx> noise(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {d(rng), d(rng)};
  return v;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("serial and OpenMP reductions agree bitwise") {
    for (std::size_t n : {1ul, 100ul, 2048ul, 50001ul}) {
      const auto x = noise(n, 1), y = noise(n, 2);
      CHECK(kernels::serial::sum(x) == kernels::omp::sum(x));
      CHECK(kernels::serial::dot(x, y) == kernels::omp::dot(x, y));
      CHECK(kernels::serial::real_dot(x, y) == kernels::omp::real_dot(x, y));
      CHECK(kernels::serial::norm2(x) == kernels::omp::norm2(x));
      CHECK(kernels::serial::max_abs(x) == kernels::omp::max_abs(x));
    }
  }

  TEST_CASE("serial and OpenMP pointwise kernels agree") {
    const std::size_t n = 9000;
    const auto x = noise(n, 3);
    auto y1 = noise(n, 4), y2 = y1;
    kernels::serial::axpby({0.5, -1.0}, x, {2.0, 0.25}, y1);
    kernels::omp::axpby({0.5, -1.0}, x, {2.0, 0.25}, y2);
    CHECK(y1 == y2);
    kernels::serial::multiply(x, y1);
    kernels::omp::multiply(x, y2);
    CHECK(y1 == y2);
  }

  TEST_CASE("spectral multipliers agree") {
    const int n = 12;
    auto f1 = noise(std::size_t(n) * n * n, 5), f2 = f1;
    kernels::serial::laplacian_multiply(f1, n, 0.7, 1.0);
    kernels::omp::laplacian_multiply(f2, n, 0.7, 1.0);
    CHECK(f1 == f2);
    kernels::serial::derivative_multiply(f1, n, 1, 0.7, 1.0);
    kernels::omp::derivative_multiply(f2, n, 1, 0.7, 1.0);
    CHECK(f1 == f2);
  }

  TEST_CASE("norm2 matches a plain sum") {
    const auto x = noise(1000, 6);
    double s = 0.0;
    for (const auto& v : x) s += std::norm(v);
    CHECK(kernels::serial::norm2(x) == doctest::Approx(s).epsilon(1e-13));
  }
}

TEST_SUITE("kernels") {
  TEST_CASE("max_abs is the largest modulus across blocks") {
    std::vector<cplx> x(5 * kernels::kBlock + 17, cplx(0.5, 0.0));
    x[3 * kernels::kBlock + 4] = cplx(0.0, -2.0);
    CHECK(kernels::serial::max_abs(x) == 2.0);
    CHECK(kernels::omp::max_abs(x) == 2.0);
  }
}
