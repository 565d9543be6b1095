#include <cmath>
#include <random>

#include "chq/experiment.hpp"
#include "chq/magnetic.hpp"
#include "doctest.h"

using namespace chq;

namespace {

struct Fixture {
  Grid3 g = make_grid(32, 4.0);
  CoulombKernel k{g};
  Potentials p = make_potentials(g, 0.6, standard_vector_potential(),
                                 ring_well_potential({}));
  std::mt19937_64 rng{11};
  ScalarField field() { return random_smooth_field(g, rng, true, 0.6); }
};

}  // namespace

TEST_SUITE("magnetic") {
  TEST_CASE("Nehari projection and closed form") {
    Fixture f;
    for (int t = 0; t < 5; ++t) {
      const ScalarField u = f.field();
      const ScalarField pu = nehari_project(u, f.p, f.k);
      CHECK(nehari_residual(pu, f.p, f.k) < 1e-12);
      CHECK(energy(pu, f.p, f.k).total ==
            doctest::Approx(projected_energy(u, f.p, f.k)).epsilon(1e-12));
      // On the manifold J = ||u||^2 / 2 - D / (4 eps^2) = ||u||^2 / 4.
      CHECK(energy(pu, f.p, f.k).total ==
            doctest::Approx(0.25 * magnetic_norm2(pu, f.p)).epsilon(1e-12));
    }
  }

  TEST_CASE("adjoint and expanded operators agree") {
    Fixture f;
    const ScalarField u = f.field();
    const ScalarField a = magnetic_operator(u, f.p);
    const ScalarField b = expanded_operator(u, f.p);
    CHECK(sup_norm(a - b) < 1e-9 * sup_norm(a));
    CHECK(inner(u, a).real() == doctest::Approx(magnetic_norm2(u, f.p)).epsilon(1e-12));
  }

  TEST_CASE("operator is Hermitian") {
    Fixture f;
    const ScalarField u = f.field(), v = f.field();
    const cplx lhs = inner(magnetic_operator(u, f.p), v);
    const cplx rhs = inner(u, magnetic_operator(v, f.p));
    CHECK(std::abs(lhs - rhs) < 1e-11 * std::abs(lhs));
  }

  TEST_CASE("Gateaux derivative matches central differences") {
    Fixture f;
    for (int t = 0; t < 3; ++t) {
      const ScalarField u = f.field(), v = f.field();
      const double analytic =
          inner(euler_lagrange_residual(u, f.p, f.k), v).real();
      const double h = 1e-5;
      const double fd = (energy(u + h * v, f.p, f.k).total -
                         energy(u - h * v, f.p, f.k).total) /
                        (2.0 * h);
      CHECK(fd == doctest::Approx(analytic).epsilon(1e-6));
    }
  }

  TEST_CASE("diamagnetic inequality on random fields") {
    Fixture f;
    for (int t = 0; t < 5; ++t) CHECK(diamagnetic_check(f.field(), f.p).violations == 0);
  }

  TEST_CASE("gauge covariance of the energy") {
    // A -> A + grad(phi), u -> e^{-i phi / eps} u leaves J unchanged.
    Fixture f;
    const double eps = f.p.epsilon;
    const Potentials q = make_potentials(
        f.g, eps,
        [](const Point3& x) {
          return Point3{-x[1] + 0.3, x[0], 0.2};
        },
        ring_well_potential({}));
    const ScalarField u = ScalarField::sample(f.g, [](const Point3& x) {
      return std::exp(-(x[0] - 1) * (x[0] - 1) - x[1] * x[1] - x[2] * x[2]);
    });
    const ScalarField w = ScalarField::sample(f.g, [&](const Point3& x) {
      return std::polar(1.0, -(0.3 * x[0] + 0.2 * x[2]) / eps) *
             std::exp(-(x[0] - 1) * (x[0] - 1) - x[1] * x[1] - x[2] * x[2]);
    });
    CHECK(energy(w, q, f.k).total ==
          doctest::Approx(energy(u, f.p, f.k).total).epsilon(1e-3));
  }

  TEST_CASE("rescaling identity is exact at eps = 1") {
    Fixture f;
    const Potentials q = with_epsilon(f.p, 1.0);
    const ScalarField u = ScalarField::sample(f.g, [](const Point3& x) {
      return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
    });
    const RescaleReport r = rescale_identity_check(u, q, f.k);
    CHECK(r.lhs == r.rhs);
  }

  TEST_CASE("rescaling rejects fields that leave the scaled box") {
    Fixture f;
    const Potentials q = with_epsilon(f.p, 0.25);
    CHECK_THROWS_AS(rescale_identity_check(f.field(), q, f.k), Error);
  }

  TEST_CASE("operator solve inverts L") {
    Fixture f;
    const ScalarField rhs = f.field();
    const OperatorSolve s = solve_operator(rhs, f.p, 1e-11, 1000);
    CHECK(s.converged);
    CHECK(sup_norm(magnetic_operator(s.x, f.p) - rhs) < 1e-8 * sup_norm(rhs));
  }

  TEST_CASE("potentials must be positive") {
    const Grid3 g = make_grid(8, 2.0);
    CHECK_THROWS_AS(make_potentials(g, 0.5, zero_vector_potential(),
                                    [](const Point3& x) { return x[0]; }),
                    Error);
  }
}
