#include <cmath>
#include <random>

#include "chq/baryorbit.hpp"
#include "chq/experiment.hpp"
#include "doctest.h"

using namespace chq;

namespace {

const RadialProfile& p1() {
  static const RadialProfile p = solve_limit(1.0);
  return p;
}

}  // namespace

TEST_SUITE("baryorbit") {
  TEST_CASE("truncated potential") {
    const ScalarFunction w = truncated_potential(ring_well_potential({}), 2.0);
    CHECK(w({1, 0, 0}) == 1.0);
    CHECK(w({3, 0, 0}) == 2.0);
    const Grid3 g = make_grid(16, 3.0);
    const ScalarField v = ScalarField::sample(g, ring_well_potential({}));
    const double cap = default_truncation(v);
    CHECK(cap > 1.0);
    CHECK(sup_norm(truncated_potential(v, cap)) == doctest::Approx(cap));
  }

  TEST_CASE("template resolution precondition") {
    const Grid3 g = make_grid(16, 3.0);
    CHECK_THROWS_AS(theta_template({1, 0, 0}, 0.3, make_sector(2, 0), p1(), g), Error);
  }

  TEST_CASE("localize recovers a template orbit") {
    const Grid3 g = make_grid(64, 3.0);
    const SymmetrySector s = make_sector(2, 0);
    const double eps = 0.4;
    const ScalarFunction vf = ring_well_potential({});
    const ScalarField v = ScalarField::sample(g, vf);
    const Point3 xi{0.9, 0.3, 0.1};
    const double lambda = vf(xi);
    const RadialProfile pl = solve_limit(lambda);
    const ScalarField theta = theta_template(xi, eps, s, pl, g);
    const ConcentrationReport r =
        localize(theta, eps, s, p1(), vf, truncated_potential(v, default_truncation(v)));
    CHECK(r.residual_scaled < 1e-6);
    CHECK(r.margin > 0.0);
    CHECK(r.orbit.cardinality == 2);
    // Either orbit point is a valid representative.
    const double d = std::min(std::hypot(r.xi[0] - xi[0], r.xi[1] - xi[1]),
                              std::hypot(r.xi[0] + xi[0], r.xi[1] + xi[1]));
    CHECK(d < 1e-3);
    CHECK(r.xi[2] == doctest::Approx(xi[2]).epsilon(1e-3));
  }

  TEST_CASE("concentration residual needs the matching profile") {
    const Grid3 g = make_grid(64, 3.0);
    const SymmetrySector s = make_sector(2, 0);
    const ScalarField theta = theta_template({1, 0, 0}, 0.4, s, p1(), g);
    CHECK(concentration_residual(theta, 0.4, {1, 0, 0}, s, p1(), 1.0) < 1e-20);
    CHECK_THROWS_AS(concentration_residual(theta, 0.4, {1, 0, 0}, s, p1(), 1.5), Error);
  }

  TEST_CASE("inequality chain on random fields") {
    const Grid3 g = make_grid(32, 3.0);
    const CoulombKernel k(g);
    const Potentials p =
        make_potentials(g, 0.5, standard_vector_potential(), ring_well_potential({}));
    std::mt19937_64 rng(3);
    for (int t = 0; t < 3; ++t) {
      const ScalarField u = nehari_project(random_smooth_field(g, rng, true, 0.5), p, k);
      const InequalityChain c = inequality_chain(u, p, k, default_truncation(p.v));
      CHECK(c.holds);
      CHECK(c.truncated <= c.modulus);
      CHECK(c.modulus <= c.full);
    }
  }
}
