#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <map>

#include "builders.hpp"
#include "oracles.hpp"
#include "qualimeter/ck.hpp"
#include "qualimeter/ingest.hpp"

using namespace qtest;

namespace {

ClassModel parse_suite(const std::string& name) {
  const std::vector<std::filesystem::path> roots{std::filesystem::path(QUALIMETER_FIXTURES) / "suites" / name};
  auto r = parse_java_tree(roots);
  REQUIRE(r.diagnostics.empty());
  return r.model;
}

std::map<std::string, CkMetrics> by_simple_name(const ClassModel& m, const CkOptions& o = {}) {
  std::map<std::string, CkMetrics> out;
  for (const auto& row : ck_suite(m, o)) out[row.type_name.substr(row.type_name.rfind('.') + 1)] = row;
  return out;
}

}  // namespace

TEST_CASE("suite1 inheritance table") {
  const auto rows = by_simple_name(parse_suite("suite1"));
  const std::map<std::string, std::pair<std::size_t, std::size_t>> expected = {
      {"A", {2, 0}}, {"B", {0, 1}}, {"C", {0, 2}}, {"D", {1, 1}}, {"SuperC", {0, 0}}};
  REQUIRE(rows.size() == expected.size());
  for (const auto& [name, nd] : expected) {
    CAPTURE(name);
    CHECK(rows.at(name).noc == nd.first);
    CHECK(rows.at(name).dit == nd.second);
  }
}

TEST_CASE("suite2 method counts") {
  const auto m = parse_suite("suite2");
  const auto rows = by_simple_name(m);
  CHECK(rows.at("A").nom == 2);
  CHECK(rows.at("B").nom == 3);
  CHECK(rows.at("SuperC").nom == 1);
  CkOptions with_ctor;
  with_ctor.nom_constructors = true;
  CHECK(by_simple_name(m, with_ctor).at("A").nom == 3);
}

TEST_CASE("suite3 weighted methods") {
  const auto rows = by_simple_name(parse_suite("suite3"));
  CHECK(rows.at("A").wmc == 2);
  CHECK(rows.at("B").wmc == 4);
  CHECK(rows.at("C").wmc == 3);
  CHECK(rows.at("SuperC").wmc == 1);
}

TEST_CASE("wmc") {
  auto a = type("A");
  CHECK(wmc(a) == 0);
  a.methods = {method("a", 1), method("b", 3), method("c", 2), method("d", 0)};
  CHECK(wmc(a) == 10);
}

TEST_CASE("dit stops at external superclass") {
  const auto m = model({type("A", "java.lang.Thread")}, {"java.lang.Thread"});
  CHECK(dit(m, m.get("A")) == 0);
}

TEST_CASE("noc of interfaces is behind a flag") {
  auto i = interface_type("I");
  std::vector<TypeDecl> types{i};
  for (const char* n : {"X", "Y", "Z"}) {
    auto t = type(n);
    t.implemented_interfaces = {"I"};
    types.push_back(t);
  }
  const auto m = model(types);
  CHECK(noc(m, m.get("I")) == 0);
  CkOptions o;
  o.noc_interfaces = true;
  CHECK(noc(m, m.get("I"), o) == 3);
}

TEST_CASE("cbo") {
  auto a = type("A");
  a.fields = {field("x", "int"), field("y", "double")};
  CHECK(cbo(model({a}), a) == 0);

  auto user = type("User");
  user.fields = {field("b", "B")};
  auto m = method("m");
  m.param_types = {"C"};
  user.methods = {m};
  const auto mdl = model({user, type("B"), type("C")});
  CHECK(cbo(mdl, mdl.get("User")) == 2);
  CHECK(cbo(mdl, mdl.get("B")) == 0);

  CkOptions both;
  both.cbo_bidirectional = true;
  CHECK(cbo(mdl, mdl.get("B"), both) == 1);

  SUBCASE("external types only under the flag") {
    auto e = type("E");
    e.fields = {field("list", "java.util.List")};
    const auto em = model({e}, {"java.util.List"});
    CHECK(cbo(em, em.get("E")) == 0);
    CkOptions ext;
    ext.cbo_external = true;
    CHECK(cbo(em, em.get("E"), ext) == 1);
  }
  SUBCASE("inheritance only under the flag") {
    const auto im = model({type("P"), type("K", "P")});
    CHECK(cbo(im, im.get("K")) == 0);
    CkOptions inh;
    inh.cbo_inheritance = true;
    CHECK(cbo(im, im.get("K"), inh) == 1);
  }
}

TEST_CASE("rfc") {
  auto a = type("A");
  CHECK(rfc(a) == 0);
  auto m1 = method("m1");
  m1.called_methods = {{"X", "foo"}, {"Y", "bar"}, {"X", "foo"}};
  a.methods = {m1, method("m2")};
  CHECK(rfc(a) == 4);

  auto s = type("S");
  auto caller = method("caller");
  caller.called_methods = {{"S", "callee"}};
  s.methods = {caller, method("callee")};
  CHECK(rfc(s) == 2);
}

TEST_CASE("lcom examples") {
  auto a = type("A");
  a.fields = {field("a"), field("b")};
  a.methods = {accessing(method("m1"), "A", {"a"})};
  CHECK(lcom(a).value == 0);
  CHECK(lcom(a).pairs.p == 0);
  CHECK(lcom(a).pairs.q == 0);

  a.methods = {accessing(method("m1"), "A", {"a"}), accessing(method("m2"), "A", {"a"}),
               accessing(method("m3"), "A", {"b"})};
  const auto r = lcom(a);
  CHECK(r.pairs.q == 1);
  CHECK(r.pairs.p == 2);
  CHECK(r.value == 1);

  a.methods = {accessing(method("m1"), "A", {"a"}), accessing(method("m2"), "A", {"a", "b"}),
               accessing(method("m3"), "A", {"a"})};
  CHECK(lcom(a).pairs.q == 3);
  CHECK(lcom(a).value == 0);
}

TEST_CASE("lcom ignores constructors, static methods and static fields") {
  auto a = type("A");
  a.fields = {field("a"), field("s", "int", Visibility::kPrivate, true)};
  auto ctor = accessing(method("A"), "A", {"a"});
  ctor.is_constructor = true;
  auto st = accessing(method("util"), "A", {"s"});
  st.is_static = true;
  a.methods = {ctor, st, accessing(method("m1"), "A", {"s"}), accessing(method("m2"), "A", {"s"})};
  const auto r = lcom(a);
  CHECK(r.pairs.p + r.pairs.q == 1);
  CHECK(r.value == 1);
}

TEST_CASE("lcom matches pair scan on random classes") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    const auto m = random_model(rng, {8, 8, 12, 2});
    for (const auto& t : m.types()) {
      const auto r = lcom(t);
      CHECK(r.value == lcom_oracle(t));
      const auto n = cohesion_methods(t).size();
      CHECK(r.pairs.p + r.pairs.q == n * (n - (n > 0 ? 1 : 0)) / 2);
    }
  }
}

TEST_CASE("suite properties on random models") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto m = random_model(rng);
    std::size_t noc_sum = 0, edges = 0;
    for (const auto& row : ck_suite(m)) {
      const auto& t = m.get(row.type_name);
      noc_sum += row.noc;
      CHECK(row.wmc >= row.nom);
      if (const auto* parent = m.superclass(t)) {
        ++edges;
        CHECK(row.dit == dit(m, *parent) + 1);
      }
    }
    CHECK(noc_sum == edges);
  }
}
