#include <cmath>

#include "chq/ansatz.hpp"
#include "doctest.h"

using namespace chq;

namespace {

const RadialProfile& p1() {
  static const RadialProfile p = solve_limit(1.0);
  return p;
}

}  // namespace

TEST_SUITE("ansatz") {
  TEST_CASE("smooth cutoff shape") {
    CHECK(smooth_cutoff(0.0) == 1.0);
    CHECK(smooth_cutoff(0.5) == 1.0);
    CHECK(smooth_cutoff(1.0) == 0.0);
    CHECK(smooth_cutoff(0.75) == doctest::Approx(0.5));
    double prev = 1.0;
    for (double s = 0.5; s <= 1.0; s += 0.01) {
      CHECK(smooth_cutoff(s) <= prev);
      prev = smooth_cutoff(s);
    }
    CHECK(CutoffScale{}.radius(0.04) == doctest::Approx(5.0));
  }

  TEST_CASE("bump energy decreases towards E_1") {
    double prev = INFINITY;
    for (double eps : {0.2, 0.1, 0.05}) {
      const CutoffBump b = make_cutoff_bump(p1(), eps);
      CHECK(b.energy < prev);
      CHECK(b.energy > p1().energy);
      prev = b.energy;
    }
    // The default radius 1/sqrt(eps) cuts into the tail of omega at these
    // eps; the limit itself shows up once the radius is large.
    CHECK(prev == doctest::Approx(1.4665).epsilon(1e-3));
    const CutoffBump far = make_cutoff_bump(p1(), 0.002);
    CHECK(std::abs(far.energy / p1().energy - 1.0) < 1e-3);
  }

  TEST_CASE("bump is Nehari-normalized in 3D") {
    const Grid3 g = make_grid(48, 6.0);
    const CoulombKernel k(g);
    const ScalarField u = cutoff_bump(p1(), 0.2, g, k, {1.0, 0.9});
    const Potentials p =
        make_potentials(g, 1.0, zero_vector_potential(), constant_potential(1.0));
    CHECK(nehari_residual(u, p, k) < 1e-12);
    CHECK_THROWS_AS(cutoff_bump(p1(), 0.01, g, k), Error);
  }

  TEST_CASE("single bump entrance energy approaches E_1") {
    // V = 1, A = 0, trivial group; support radius 0.9 in physical units.
    const Grid3 g = make_grid(64, 1.2);
    const CoulombKernel k(g);
    const SymmetrySector s = make_sector(1, 0);
    double prev = INFINITY;
    for (double eps : {0.4, 0.2, 0.1}) {
      const Potentials p =
          make_potentials(g, eps, zero_vector_potential(), constant_potential(1.0));
      const double e = entrance_energy({{0, 0, 0}, eps, s, 1.0},
                                       make_cutoff_bump(p1(), eps, {1.0, 0.9}), p, k);
      CHECK(e < prev);
      prev = e;
    }
    CHECK(std::abs(prev / kGroundEnergy - 1.0) < 0.02);
  }

  TEST_CASE("entrance map is equivariant") {
    const Grid3 g = make_grid(48, 2.0);
    const SymmetrySector s = make_sector(2, 1);
    const double eps = 0.2;
    const ScalarField psi = entrance({{1, 0, 0}, eps, s, 1.0},
                                     make_cutoff_bump(p1(), eps, {1.0, 0.9}),
                                     standard_vector_potential(), g);
    CHECK(is_equivariant(psi, s, 1e-12));
    CHECK(sup_norm(psi) > 0.0);
  }

  TEST_CASE("entrance preconditions") {
    const Grid3 g = make_grid(32, 2.0);
    const double eps = 0.2;
    const CutoffBump b = make_cutoff_bump(p1(), eps, {1.0, 0.9});
    const VectorFunction a = standard_vector_potential();
    // Orbit points 0.4 apart overlap.
    CHECK_THROWS_AS(entrance({{0.2, 0, 0}, eps, make_sector(2, 0), 1.0}, b, a, g),
                    Error);
    // Axis point with a nontrivial character.
    CHECK_THROWS_AS(entrance({{0, 0, 0}, eps, make_sector(2, 1), 1.0}, b, a, g),
                    Error);
    // Support beyond the box.
    CHECK_THROWS_AS(entrance({{1.5, 0, 0}, eps, make_sector(2, 0), 1.0}, b, a, g),
                    Error);
    // Profile at the wrong lambda.
    CHECK_THROWS_AS(entrance({{1, 0, 0}, eps, make_sector(2, 0), 2.0}, b, a, g),
                    Error);
  }

  TEST_CASE("pointwise evaluation matches the grid") {
    const Grid3 g = make_grid(32, 2.5);
    const EntranceSpec spec{{1, 0, 0}, 0.3, make_sector(2, 1), 1.0};
    const CutoffBump b = make_cutoff_bump(p1(), 0.3, {1.0, 0.9});
    const VectorFunction a = standard_vector_potential();
    const ScalarField psi = entrance(spec, b, a, g);
    const std::size_t idx = g.index(25, 17, 15);
    CHECK(std::abs(psi[idx] - entrance_value(spec, b, a, g.node(idx))) < 1e-14);
  }
}
