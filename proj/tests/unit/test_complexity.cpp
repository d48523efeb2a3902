#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "builders.hpp"
#include "oracles.hpp"
#include "qualimeter/complexity.hpp"

using namespace qtest;

TEST_CASE("cyclomatic number is decisions plus one") {
  CHECK(cyclomatic(method("straight")) == 1);
  // two ifs, one while, one && -> 4 decision points
  CHECK(cyclomatic(method("m", 4)) == 5);
}

TEST_CASE("halstead volume") {
  CHECK(halstead_volume({1, 1, 1, 1}) == doctest::Approx(2.0));
  CHECK(halstead_volume({4, 4, 10, 6}) == doctest::Approx(48.0));
  CHECK(halstead_volume({0, 0, 0, 0}) == 0.0);
  CHECK_THROWS_AS(halstead_volume({0, 0, 3, 0}), std::invalid_argument);
}

TEST_CASE("maintainability index") {
  const MiInputs base{1000, 10, 100, 0.1};
  CHECK(std::abs(maintainability_index(base) - 81.9708) < 1e-4);
  CHECK(std::abs(maintainability_index(base) - mi_oracle(1000, 10, 100, 0.1)) < 1e-9);

  const double e = std::exp(1.0);
  CHECK(maintainability_index({e, 1, e, 0}) == doctest::Approx(149.37));

  SUBCASE("percent CLPM is rescaled") {
    MiInputs pct{1000, 10, 100, 10, ClpmUnit::kPercent};
    CHECK(maintainability_index(pct) == doctest::Approx(maintainability_index(base)));
  }
  SUBCASE("domain checks") {
    CHECK_THROWS_AS(maintainability_index({0, 1, 10, 0}), std::invalid_argument);
    CHECK_THROWS_AS(maintainability_index({10, 0.5, 10, 0}), std::invalid_argument);
    CHECK_THROWS_AS(maintainability_index({10, 1, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(maintainability_index({10, 1, 10, 1.5}), std::invalid_argument);
  }
}

TEST_CASE("MI rises with comment share while the sine argument stays below pi/2") {
  double prev = maintainability_index({500, 3, 40, 0});
  for (double clpm = 0.01; std::sqrt(2.46 * clpm) < M_PI / 2; clpm *= 2) {
    const double now = maintainability_index({500, 3, 40, clpm});
    CHECK(now > prev);
    prev = now;
  }
}

TEST_CASE("MI decreases strictly in HV, CC and LOCPM") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> hv(1.5, 1e5), cc(1, 50), loc(1.5, 1e3), cl(0, 1), step(1.01, 3);
  for (int i = 0; i < 100; ++i) {
    const MiInputs p{hv(rng), cc(rng), loc(rng), cl(rng)};
    const double base = maintainability_index(p);
    auto q = p;
    q.halstead_volume *= step(rng);
    CHECK(maintainability_index(q) < base);
    q = p;
    q.cyclomatic *= step(rng);
    CHECK(maintainability_index(q) < base);
    q = p;
    q.loc_per_module *= step(rng);
    CHECK(maintainability_index(q) < base);
  }
}

TEST_CASE("system complexity summary") {
  auto a = type("A");
  a.methods = {method("a", 0), method("b", 2)};
  auto b = type("B");
  b.methods = {method("c", 1)};
  const auto s = system_complexity_summary(model({a, b}));
  CHECK(s.sum_vg == 6);
  CHECK(s.function_count == 3);
  REQUIRE(s.avg_vg);
  CHECK(*s.avg_vg == doctest::Approx(2.0));

  const auto empty = system_complexity_summary(ClassModel{});
  CHECK(empty.sum_vg == 0);
  CHECK(empty.function_count == 0);
  CHECK_FALSE(empty.avg_vg.has_value());
}

TEST_CASE("MI inputs from a class") {
  auto a = type("A");
  auto m1 = method("m1", 1);
  m1.halstead = {4, 4, 10, 6};  // HV 48
  m1.lines = {10, 2, 0};
  auto m2 = method("m2", 3);
  m2.halstead = {1, 1, 1, 1};  // HV 2
  m2.lines = {4, 0, 1};
  a.methods = {m1, m2};
  const auto in = mi_inputs(a);
  REQUIRE(in);
  CHECK(in->halstead_volume == doctest::Approx(25.0));
  CHECK(in->cyclomatic == doctest::Approx(3.0));
  CHECK(in->loc_per_module == doctest::Approx(7.0));
  CHECK(in->clpm_unit == ClpmUnit::kFraction);
  // comment share 2/12 in m1, 0 in m2
  CHECK(in->clpm == doctest::Approx(1.0 / 12.0));
  CHECK_FALSE(mi_inputs(type("Empty")).has_value());
}
