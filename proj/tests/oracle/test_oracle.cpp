#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "chq/groundstate.hpp"
#include "doctest.h"
#include "frozen_profile.hpp"
#include "shooting.hpp"

TEST_CASE("live shooting reproduces the frozen values") {
  const oracle::ShootingResult live = oracle::solve_ground_state(0.5, 12.0);
  CHECK(live.energy == doctest::Approx(oracle::kFrozenEnergy).epsilon(1e-10));
  REQUIRE(live.r.size() == oracle::kFrozenProfile.size());
  for (std::size_t i = 0; i < live.r.size(); ++i) {
    CHECK(live.r[i] == doctest::Approx(oracle::kFrozenProfile[i].first));
    CHECK(std::abs(live.value[i] - oracle::kFrozenProfile[i].second) < 1e-10);
  }
  CHECK(live.center == doctest::Approx(live.value[0]));
}

TEST_CASE("library constant agrees with the oracle") {
  CHECK(std::abs(chq::kGroundEnergy / oracle::kFrozenEnergy - 1.0) < 1e-7);
}

TEST_CASE("Nehari and Pohozaev give E = mass / 3") {
  // T + M = D and T / 2 + 3 M / 2 = 5 D / 4 imply T = M / 3, D = 4 M / 3.
  const oracle::ShootingResult live = oracle::solve_ground_state(0.5, 12.0);
  CHECK(live.energy == doctest::Approx(live.mass / 3.0).epsilon(1e-9));
  CHECK(live.center == doctest::Approx(1.0 / live.mu));
}
