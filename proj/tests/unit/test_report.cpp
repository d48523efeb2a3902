#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "json.hpp"
#include "qualimeter/report.hpp"

using namespace qualimeter;
using C = Criterion;

namespace {

LogiscopeMetrics vec(std::array<double, kLogiscopeMetricCount> v) {
  LogiscopeMetrics m;
  m.values = v;
  return m;
}

// printed Kiviat rows
const auto kMatrix = vec({0.52, 65, 2, 0, 8, 8, 126, 28, 12, 4, 2, 1, 0});
const auto kTest = vec({0.19, 90, 8, 8, 5, 2, 483, 68, 22, 167, 0, 0, 0});

NamedDistribution marf() {
  NamedDistribution d{"MARF", {}};
  d.distribution.percent = {{{24, 60, 10, 6}, {51, 35, 12, 1}, {78, 15, 5, 2}, {50, 31, 16, 4}, {76, 18, 4, 2}}};
  d.distribution.class_count = 201;
  return d;
}

NamedDistribution gipsy() {
  NamedDistribution d{"GIPSY", {}};
  d.distribution.percent = {{{26, 59, 9, 6}, {40, 43, 13, 4}, {79, 12, 5, 4}, {59, 29, 9, 3}, {75, 18, 4, 2}}};
  d.distribution.class_count = 589;
  return d;
}

}  // namespace

TEST_CASE("round4 and format_real") {
  CHECK(round4(0.12345) == doctest::Approx(0.1235).epsilon(1e-12));
  CHECK(round4(-0.12345) == doctest::Approx(-0.1235).epsilon(1e-12));
  CHECK(round4(81.97084) == doctest::Approx(81.9708).epsilon(1e-12));
  CHECK(format_real(1.0 / 3.0) == "0.3333");
  CHECK(format_real(-0.00001) == "0.0000");
  CHECK(format_real(2.5) == "2.5000");
  CHECK(format_real(INFINITY) == "+inf");
  CHECK(format_real(-INFINITY) == "-inf");
  CHECK(format_optional(std::nullopt) == "");
  CHECK(format_optional(std::nullopt, "NA") == "NA");
  CHECK(format_optional(0.5) == "0.5000");
}

TEST_CASE("round4 is idempotent and within half a unit") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e4, 1e4);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    const double r = round4(x);
    CHECK(round4(r) == r);
    CHECK(std::abs(r - x) <= 0.5e-4 + 1e-9);
  }
}

TEST_CASE("csv escaping") {
  CHECK(CsvTable::escape("plain") == "plain");
  CHECK(CsvTable::escape("a,b") == "\"a,b\"");
  CHECK(CsvTable::escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(CsvTable::escape("two\nlines") == "\"two\nlines\"");
  CsvTable t({"name", "value"});
  t.add_row({"x,y", "1"});
  CHECK(t.str() == "name,value\r\n\"x,y\",1\r\n");
}

TEST_CASE("xml escaping") { CHECK(escape_xml("a<b & \"c\">") == "a&lt;b &amp; &quot;c&quot;&gt;"); }

TEST_CASE("kiviat svg marks out-of-range axes") {
  const auto profile = ThresholdProfile::standard();
  const auto test_svg = kiviat_svg("test", kTest, profile);
  CHECK(count_alert_axes(test_svg) == 4);
  CHECK(count_alert_axes(kiviat_svg("marf.util.Matrix", kMatrix, profile)) == 0);
  CHECK(test_svg == kiviat_svg("test", kTest, profile));
  CHECK(test_svg.rfind("<svg", 0) == 0);
  CHECK(test_svg.find("cu_cdused") != std::string::npos);
  CHECK(kiviat_svg("<A&B>", kMatrix, profile).find("&lt;A&amp;B&gt;") != std::string::npos);
}

TEST_CASE("alert axes equal the number of -1 statuses") {
  const auto profile = ThresholdProfile::standard();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 200);
  for (int i = 0; i < 50; ++i) {
    LogiscopeMetrics m;
    for (auto& v : m.values) v = u(rng);
    m.values[0] = u(rng) / 200;
    const auto status = kiviat_status(m, profile);
    const auto expected = static_cast<std::size_t>(std::count(status.begin(), status.end(), -1));
    CHECK(count_alert_axes(kiviat_svg("c", m, profile)) == expected);
  }
}

TEST_CASE("treemap svg has one path per leaf") {
  TreemapNode root{"root", std::nullopt, {{"a", 1.0, {}}, {"b", 3.0, {}}}};
  LayoutParams p;
  p.resolution = 64;
  const auto layout = layout_hierarchy(root, Raster::rectangle(64, 64), p);
  const auto svg = treemap_svg(layout, "demo");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("root/a") != std::string::npos);
  CHECK(svg.find("root/b") != std::string::npos);
  CHECK(svg == treemap_svg(layout_hierarchy(root, Raster::rectangle(64, 64), p), "demo"));
}

TEST_CASE("comparison echoes the printed ranking ticks") {
  const auto doc = nlohmann::json::parse(comparison_json(marf(), gipsy()));
  CHECK(doc["systems"] == nlohmann::json({"MARF", "GIPSY"}));
  const std::array<std::pair<bool, bool>, 5> ticks = {{{false, true}, {true, false}, {true, false}, {false, true},
                                                      {true, true}}};
  for (std::size_t c = 0; c < kCriterionCount; ++c) {
    const auto name = std::string(to_string(static_cast<C>(c)));
    CAPTURE(name);
    const auto& row = doc["criteria"][name];
    CHECK(row["higherRank"][0].get<bool>() == ticks[c].first);
    CHECK(row["higherRank"][1].get<bool>() == ticks[c].second);
  }
  CHECK(doc["criteria"]["maintainability"]["levels"]["excellent"] == nlohmann::json({24, 26}));
  CHECK(doc["criteria"]["analyzability"]["bad"] == nlohmann::json({13, 17}));

  const auto csv = comparison_csv(marf(), gipsy());
  CHECK(csv.rfind("criterion,MARF_excellent,MARF_good,MARF_fair,MARF_poor,MARF_bad,", 0) == 0);
  CHECK(csv.find("maintainability,24,60,10,6,16,26,59,9,6,15,,x\r\n") != std::string::npos);
  CHECK(csv.find("testability,76,18,4,2,6,75,18,4,2,6,x,x\r\n") != std::string::npos);
}

TEST_CASE("comparison refuses mismatched profiles") {
  auto a = marf();
  auto b = gipsy();
  a.distribution.profile_fingerprint = ThresholdProfile::standard().fingerprint();
  CHECK_NOTHROW(comparison_json(a, b));
  auto other = ThresholdProfile::standard();
  other[LogiscopeMetric::kClWmc].max = 99;
  b.distribution.profile_fingerprint = other.fingerprint();
  CHECK_THROWS_AS(comparison_json(a, b), AnalysisError);
  CHECK_THROWS_AS(comparison_csv(a, b), AnalysisError);
}
