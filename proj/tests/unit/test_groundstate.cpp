#include <cmath>
#include <sstream>

#include "chq/groundstate.hpp"
#include "doctest.h"
#include "frozen_profile.hpp"

using namespace chq;

namespace {

const RadialProfile& p1() {
  static const RadialProfile p = solve_limit(1.0);
  return p;
}

}  // namespace

TEST_SUITE("groundstate") {
  TEST_CASE("energy matches the shooting oracle") {
    CHECK(p1().energy == doctest::Approx(oracle::kFrozenEnergy).epsilon(1e-7));
    CHECK(kGroundEnergy == doctest::Approx(oracle::kFrozenEnergy).epsilon(1e-7));
  }

  TEST_CASE("profile matches the shooting oracle") {
    for (const auto& [r, v] : oracle::kFrozenProfile)
      CHECK(std::abs(p1()(r) - v) < 1e-6);
    CHECK(p1().monotone);
    CHECK(p1().derivative(0.0) == doctest::Approx(0.0));
  }

  TEST_CASE("Nehari identity on the radial mesh") {
    const RadialForms f = radial_forms(p1().values, p1().r_max, 1.0);
    CHECK(f.norm2 == doctest::Approx(f.hartree).epsilon(1e-9));
    CHECK(0.25 * f.norm2 == doctest::Approx(p1().energy).epsilon(1e-9));
  }

  TEST_CASE("scaling law") {
    const ScalingReport r = scaling_check(p1(), 2.0);
    CHECK(r.energy_ratio == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-6));
    CHECK(r.profile_gap < 1e-4);
  }

  TEST_CASE("non-convergence is reported") {
    LimitOptions o;
    o.max_iter = 3;
    CHECK_THROWS_AS(solve_limit(1.0, o), NonConvergence);
    CHECK_THROWS_AS(solve_limit(-1.0), Error);
  }

  TEST_CASE("embedding respects the mesh range") {
    const Grid3 g = make_grid(16, 30.0);
    CHECK_THROWS_AS(embed_3d(p1(), g, {}), Error);
    const ScalarField u = embed_3d(p1(), g, {}, 1.0, OutOfRange::kZero);
    CHECK(u.is_real());
    const Grid3 small = make_grid(16, 4.0);
    CHECK(embed_3d(p1(), small, {})[small.index(8, 8, 8)].real() ==
          doctest::Approx(p1()(0.0)));
  }

  TEST_CASE("CSV round trip") {
    std::stringstream ss;
    write_profile_csv(ss, p1());
    CHECK(ss.str().rfind("lambda,energy,nr,r_max\n", 0) == 0);
    const auto path = std::filesystem::temp_directory_path() / "chq_profile.csv";
    write_profile_csv(path, p1());
    const RadialProfile back = read_profile_csv(path);
    std::filesystem::remove(path);
    CHECK(back.nr == p1().nr);
    CHECK(back(1.3) == doctest::Approx(p1()(1.3)).epsilon(1e-11));
  }
}
