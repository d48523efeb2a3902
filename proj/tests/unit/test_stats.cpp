#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>

#include "builders.hpp"
#include "oracles.hpp"
#include "qualimeter/stats.hpp"

using namespace qtest;

namespace {

std::vector<double> iota_vec(std::size_t n) {
  std::vector<double> v(n);
  std::iota(v.begin(), v.end(), 1.0);
  return v;
}

IterationSnapshot snap(std::set<std::string> classes, std::map<std::string, std::string> renames = {}) {
  return {"it", std::move(classes), std::move(renames)};
}

}  // namespace

TEST_CASE("spearman examples") {
  for (std::size_t n = 2; n <= 10; ++n) {
    const auto a = iota_vec(n);
    auto r = a;
    std::reverse(r.begin(), r.end());
    CHECK(spearman(a, a) == 1.0);
    CHECK(spearman(a, r) == -1.0);
  }
  CHECK(spearman(std::vector<double>{1, 2, 3, 4}, std::vector<double>{2, 1, 4, 3}) == doctest::Approx(0.6));
  CHECK_THROWS_AS(spearman(std::vector<double>{1}, std::vector<double>{1}), std::invalid_argument);
  CHECK_THROWS_AS(spearman(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}), std::invalid_argument);
}

TEST_CASE("average ranks for ties") {
  const auto r = average_ranks(std::vector<double>{10, 20, 10, 30});
  CHECK(r == std::vector<double>{1.5, 3, 1.5, 4});
}

TEST_CASE("spearman is symmetric and rank invariant") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-100, 100);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + rng() % 30;
    std::vector<double> a(n), b(n);
    for (auto& x : a) x = std::round(d(rng));
    for (auto& x : b) x = std::round(d(rng));
    const double r = spearman(a, b);
    CHECK(r == doctest::Approx(spearman(b, a)).epsilon(1e-12));
    std::vector<double> a3(n);
    std::transform(a.begin(), a.end(), a3.begin(), [](double x) { return x * x * x + 7; });
    CHECK(r == doctest::Approx(spearman(a3, b)).epsilon(1e-12));
    CHECK(r >= -1.0);
    CHECK(r <= 1.0);
  }
}

TEST_CASE("spearman on permutations matches the sum of squared differences") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + rng() % 50;
    auto a = iota_vec(n), b = iota_vec(n);
    std::shuffle(a.begin(), a.end(), rng);
    std::shuffle(b.begin(), b.end(), rng);
    CHECK(std::abs(spearman(a, b) - sum_d2_oracle(a, b)) < 1e-12);
  }
}

TEST_CASE("z normalisation") {
  const auto z = z_normalize(std::vector<double>{1, 2, 3});
  CHECK(z[0] == doctest::Approx(-1.2247).epsilon(1e-4));
  CHECK(z[1] == doctest::Approx(0.0));
  CHECK(z[2] == doctest::Approx(1.2247).epsilon(1e-4));
  const auto again = z_normalize(z);
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(std::abs(again[i] - z[i]) < 1e-12);
  CHECK_THROWS_AS(z_normalize(std::vector<double>{4, 4}), std::invalid_argument);
  CHECK_THROWS_AS(z_normalize(std::vector<double>{4}), std::invalid_argument);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> d(50, 20);
  std::vector<double> v(200);
  for (auto& x : v) x = d(rng);
  const auto n = z_normalize(v);
  const double mean = std::accumulate(n.begin(), n.end(), 0.0) / static_cast<double>(n.size());
  double var = 0;
  for (double x : n) var += (x - mean) * (x - mean);
  CHECK(std::abs(mean) < 1e-12);
  CHECK(std::abs(std::sqrt(var / static_cast<double>(n.size())) - 1.0) < 1e-12);
}

TEST_CASE("system design instability") {
  auto d = sdi(snap({"A", "B", "C"}), snap({"A", "B", "D"}));
  CHECK(d.added == 1);
  CHECK(d.deleted == 1);
  CHECK(d.changed == 0);
  CHECK(d.sdi == 2);

  d = sdi(snap({"A", "B"}), snap({"A", "B"}));
  CHECK(d.sdi == 0);

  d = sdi(snap({"A", "B", "C"}), snap({"A", "B", "D"}, {{"C", "D"}}));
  CHECK(d.added == 0);
  CHECK(d.deleted == 0);
  CHECK(d.changed == 1);
  CHECK(d.sdi == 1);

  CHECK_THROWS_AS(sdi(snap({"A"}), snap({"B"}, {{"X", "B"}})), AnalysisError);
  CHECK_THROWS_AS(sdi(snap({"A", "B"}), snap({"C"}, {{"A", "C"}, {"B", "C"}})), AnalysisError);
}

TEST_CASE("sdi is zero exactly when the snapshots agree under renames") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    std::set<std::string> prev, next;
    for (int k = 0; k < 8; ++k) {
      if (rng() % 2) prev.insert("C" + std::to_string(k));
      if (rng() % 2) next.insert("C" + std::to_string(k));
    }
    const auto d = sdi(snap(prev), snap(next));
    CHECK((d.sdi == 0) == (prev == next));
  }
}

TEST_CASE("use case cohesion") {
  UseCaseModel m;
  m.use_cases = {{"U", {"s1", "s2", "s3"}}};
  CHECK(use_case_cohesion_local(m, m.use_cases[0]) == 0.0);
  CHECK(use_case_cohesion_global(m) == 1.0);

  m.similar_pairs = {{"s1", "s2"}};
  CHECK(*use_case_cohesion_local(m, m.use_cases[0]) == doctest::Approx(1.0 / 3.0));

  m.similar_pairs = {{"s1", "s2"}, {"s2", "s3"}, {"s3", "s1"}};
  CHECK(use_case_cohesion_local(m, m.use_cases[0]) == 1.0);
  CHECK(use_case_cohesion_global(m) == 0.0);

  UseCaseModel small;
  small.use_cases = {{"U", {"only"}}};
  CHECK_FALSE(use_case_cohesion_local(small, small.use_cases[0]).has_value());
  CHECK_FALSE(use_case_cohesion_global(small).has_value());
}

TEST_CASE("global cohesion over five scenarios") {
  // 10 pairs, 4 similar -> 0.6
  UseCaseModel m;
  m.use_cases = {{"U1", {"a", "b", "c"}}, {"U2", {"d", "e"}}};
  m.similar_pairs = {{"a", "b"}, {"a", "d"}, {"c", "e"}, {"d", "e"}};
  validate(m);
  CHECK(*use_case_cohesion_global(m) == doctest::Approx(0.6));
  CHECK(*use_case_cohesion_local(m, m.use_cases[1]) == 1.0);
}

TEST_CASE("use case validation") {
  UseCaseModel m;
  m.use_cases = {{"U", {"a", "b"}}, {"V", {"a"}}};
  CHECK_THROWS_AS(validate(m), AnalysisError);
  m.use_cases = {{"U", {"a", "b"}}};
  m.similar_pairs = {{"a", "zz"}};
  CHECK_THROWS_AS(validate(m), AnalysisError);
  m.similar_pairs = {{"a", "a"}};
  CHECK_THROWS_AS(validate(m), AnalysisError);
}

TEST_CASE("domain coupling delegates to the coupling factor") {
  auto a = type("A");
  a.fields = {field("b", "B")};
  auto b = type("B");
  b.fields = {field("c", "C")};
  CHECK(*domain_coupling_cf(model({a, b, type("C")})) == doctest::Approx(1.0 / 3.0));
  CHECK_FALSE(domain_coupling_cf(model({type("A")})).has_value());
}
