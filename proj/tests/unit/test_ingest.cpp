#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "json.hpp"
#include "qualimeter/ingest.hpp"

using namespace qualimeter;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = QUALIMETER_FIXTURES;
const fs::path kCorpus = kFixtures / "corpus";

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("qualimeter_ingest_" + tag + "_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  void write(const std::string& rel, const std::string& text) const {
    const auto p = path / rel;
    fs::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << text;
  }
};

ParseResult parse_text(const std::string& text, const std::string& path = "A.java") {
  std::vector<SourceFile> files{{path, text}};
  return parse_java_sources(files);
}

nlohmann::json manifest() {
  std::ifstream in(kCorpus / "manifest.json");
  return nlohmann::json::parse(in);
}

std::string vis_key(Visibility v) {
  switch (v) {
    case Visibility::kPublic: return "public";
    case Visibility::kProtected: return "protected";
    case Visibility::kPackage: return "package";
    case Visibility::kPrivate: return "private";
  }
  return "?";
}

std::size_t physical_lines(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::string s((std::istreambuf_iterator<char>(in)), {});
  if (s.empty()) return 0;
  auto n = static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
  return s.back() == '\n' ? n : n + 1;
}

}  // namespace

TEST_CASE("single class with field, method and decision") {
  const auto r = parse_text("class A extends B { private int x; public void m(){ if(x>0){} } }");
  REQUIRE(r.model.type_count() == 1);
  const auto& a = r.model.types()[0];
  CHECK(a.qualified_name == "A");
  CHECK(a.super_types == std::vector<std::string>{"B"});
  REQUIRE(a.fields.size() == 1);
  CHECK(a.fields[0].visibility == Visibility::kPrivate);
  REQUIRE(a.methods.size() == 1);
  CHECK(a.methods[0].visibility == Visibility::kPublic);
  CHECK(a.methods[0].decision_count == 1);
}

TEST_CASE("empty tree gives an empty model") {
  TempDir dir("empty");
  std::vector<fs::path> roots{dir.path};
  const auto r = parse_java_tree(roots);
  CHECK(r.model.type_count() == 0);
  CHECK(count_lines(roots).files.empty());
}

TEST_CASE("braces inside comments and literals do not count") {
  const auto r = parse_text("/* } */ class A { // }\n String s = \"}\"; char c = '{'; void m() {} }");
  CHECK(r.model.type_count() == 1);
  for (const auto& d : r.diagnostics) CHECK(d.severity != Diagnostic::Severity::kError);
}

TEST_CASE("unbalanced file is skipped with an error") {
  std::vector<SourceFile> files{{"Bad.java", "class Bad { void m() {"}, {"Good.java", "class Good {}"}};
  const auto r = parse_java_sources(files);
  CHECK(r.model.type_count() == 1);
  CHECK(std::any_of(r.diagnostics.begin(), r.diagnostics.end(),
                    [](const Diagnostic& d) { return d.severity == Diagnostic::Severity::kError; }));
}

TEST_CASE("decision tokens inside literals are masked") {
  const auto r = parse_text("class A { void m(boolean a, boolean b) { String s = \"if && ||\"; if (a && b) {} } }");
  REQUIRE(r.model.type_count() == 1);
  CHECK(r.model.types()[0].methods[0].decision_count == 2);
}

TEST_CASE("interchange round trip") {
  std::vector<fs::path> roots{kCorpus};
  const auto parsed = parse_java_tree(roots).model;
  REQUIRE(parsed.type_count() > 0);
  const auto back = load_interchange(save_interchange(parsed));
  CHECK(back.types() == parsed.types());
  CHECK(back.external_types() == parsed.external_types());
  CHECK(back.files() == parsed.files());
}

TEST_CASE("interchange schema errors name the path") {
  try {
    load_interchange(R"({"files": []})");
    FAIL("expected schema error");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("types") != std::string::npos);
  }
  CHECK_THROWS_AS(load_interchange(R"({"types":[{"name":"A","fields":[{"name":"x","type":"int","visibility":"friend"}]}]})"),
                  SchemaError);
  CHECK_THROWS_AS(load_interchange("not json"), SchemaError);
}

TEST_CASE("three class interchange file") {
  const auto m = load_interchange(R"({"types":[
    {"name":"p.A","kind":"class","package":"p"},
    {"name":"p.B","kind":"class","package":"p","extends":["p.A"]},
    {"name":"p.I","kind":"interface","package":"p"}]})");
  CHECK(m.type_count() == 3);
  CHECK(m.find("p.B")->super_types == std::vector<std::string>{"p.A"});
}

TEST_CASE("line classification") {
  const auto& java = java_language_config();
  SUBCASE("three code, two comment, one blank") {
    const auto kinds = classify_lines("int a;\n// one\n\nint b;\n/* two */\nint c;\n", java);
    const auto t = tally(kinds);
    CHECK(t.code == 3);
    CHECK(t.comment == 2);
    CHECK(t.blank == 1);
  }
  SUBCASE("empty text") {
    const auto t = tally(classify_lines("", java));
    CHECK(t.code + t.comment + t.blank == 0);
  }
  SUBCASE("mixed line is code") {
    const auto kinds = classify_lines("int x; // note\n", java);
    REQUIRE(kinds.size() == 1);
    CHECK(kinds[0] == LineKind::kCode);
  }
  SUBCASE("block comment spanning lines") {
    const auto kinds = classify_lines("/* a\n\n b */ int x;\n", java);
    REQUIRE(kinds.size() == 3);
    CHECK(kinds[0] == LineKind::kComment);
    CHECK(kinds[1] == LineKind::kBlank);
    CHECK(kinds[2] == LineKind::kCode);
  }
  SUBCASE("comment marker in a string") {
    CHECK(classify_lines("String s = \"//\";\n", java)[0] == LineKind::kCode);
  }
}

TEST_CASE("language config validation") {
  LanguageCommentConfig c{"X", {".x"}, {"#"}, {{"/*", "*/"}}, "\""};
  CHECK_NOTHROW(validate(c));
  c.block_comments = {{"/*", ""}};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.block_comments = {};
  c.line_comments = {""};
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  for (const auto& d : default_language_configs()) CHECK_NOTHROW(validate(d));
}

TEST_CASE("unknown extension and empty file") {
  TempDir dir("unknown");
  dir.write("notes.zzz", "alpha\n\nbeta\n");
  dir.write("Empty.java", "");
  std::vector<fs::path> roots{dir.path};
  const auto census = count_lines(roots);
  REQUIRE(census.files.size() == 2);
  for (const auto& f : census.files) {
    if (f.language == "unknown") {
      CHECK(f.lines.code == 2);
      CHECK(f.lines.blank == 1);
    } else {
      CHECK(f.language == "Java");
      CHECK(f.lines.code + f.lines.comment + f.lines.blank == 0);
    }
  }
  CHECK(census.by_language.at("unknown").files == 1);
}

TEST_CASE("corpus census matches the manifest") {
  const auto man = manifest();
  std::vector<fs::path> roots{kCorpus};
  const auto r = parse_java_tree(roots);
  for (const auto& d : r.diagnostics) CHECK(d.severity != Diagnostic::Severity::kError);

  std::map<std::string, std::map<std::string, std::size_t>> census;
  std::set<std::pair<std::string, std::string>> extends, implements;
  for (const auto& t : r.model.types()) {
    const std::string kind = t.is_interface() ? "interface" : "class";
    ++census[kind]["total"];
    ++census[kind][vis_key(t.visibility)];
    for (const auto& s : t.super_types) (t.is_interface() ? implements : extends).insert({t.qualified_name, s});
    for (const auto& s : t.implemented_interfaces) implements.insert({t.qualified_name, s});
  }
  for (const auto& [kind, row] : man["types"].items()) {
    for (const auto& [key, n] : row.items()) {
      INFO(kind << "." << key);
      CHECK(census[kind][key] == n.get<std::size_t>());
    }
  }
  std::set<std::pair<std::string, std::string>> want_ext, want_impl;
  for (const auto& e : man["extends"]) want_ext.emplace(e[0].get<std::string>(), e[1].get<std::string>());
  for (const auto& e : man["implements"]) want_impl.emplace(e[0].get<std::string>(), e[1].get<std::string>());
  CHECK(extends == want_ext);
  CHECK(implements == want_impl);
}

TEST_CASE("corpus line counts match the manifest") {
  const auto man = manifest();
  std::vector<fs::path> roots{kCorpus};
  const auto census = count_lines(roots);
  std::map<std::string, FileLineCount> got;
  for (const auto& f : census.files) {
    got[f.path] = f;
  }
  got.erase("manifest.json");
  REQUIRE(got.size() == man["files"].size());
  for (const auto& want : man["files"]) {
    const std::string path = want["path"];
    INFO(path);
    REQUIRE(got.count(path) == 1);
    const auto& f = got[path];
    CHECK(f.language == want["language"].get<std::string>());
    CHECK(f.lines.code == want["code"].get<std::size_t>());
    CHECK(f.lines.comment == want["comment"].get<std::size_t>());
    CHECK(f.lines.blank == want["blank"].get<std::size_t>());
    CHECK(f.lines.code + f.lines.comment + f.lines.blank == physical_lines(kCorpus / path));
  }
  // language rows are column sums
  for (const auto& [lang, totals] : census.by_language) {
    LineCounts sum;
    std::size_t files = 0;
    for (const auto& f : census.files) {
      if (f.language != lang) continue;
      ++files;
      sum.code += f.lines.code;
      sum.comment += f.lines.comment;
      sum.blank += f.lines.blank;
    }
    CHECK(totals.files == files);
    CHECK(totals.lines.code == sum.code);
    CHECK(totals.lines.comment == sum.comment);
    CHECK(totals.lines.blank == sum.blank);
  }
}

TEST_CASE("parsing ignores file order") {
  std::vector<SourceFile> files;
  for (const auto& e : fs::recursive_directory_iterator(kCorpus)) {
    if (e.path().extension() != ".java") continue;
    std::ifstream in(e.path(), std::ios::binary);
    files.push_back({fs::relative(e.path(), kCorpus).generic_string(), std::string((std::istreambuf_iterator<char>(in)), {})});
  }
  REQUIRE(files.size() == 15);
  const auto base = save_interchange(parse_java_sources(files).model);
  std::mt19937 rng(7);
  for (int i = 0; i < 5; ++i) {
    std::shuffle(files.begin(), files.end(), rng);
    CHECK(save_interchange(parse_java_sources(files).model) == base);
  }
}

TEST_CASE("comment stripping keeps the type count") {
  const std::string code = "package p;\npublic class A {}\nclass B {}\ninterface C {}\n";
  const std::string noisy = "/* class Fake {} */\npackage p;\n// class Other {}\npublic class A {}\nclass B { String s = \"class X {}\"; }\ninterface C {}\n";
  CHECK(parse_text(code).model.type_count() == 3);
  CHECK(parse_text(noisy).model.type_count() == 3);
}
