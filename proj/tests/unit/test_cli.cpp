#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "builders.hpp"
#include "json.hpp"
#include "qualimeter/cli.hpp"
#include "qualimeter/ingest.hpp"
#include "qualimeter/report.hpp"

using namespace qualimeter;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kFixtures = QUALIMETER_FIXTURES;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  ::unsetenv("QUALIMETER_CONFIG");
  args.insert(args.begin(), "qualimeter");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("qualimeter_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  fs::path write(const std::string& rel, const std::string& text) const {
    const auto p = path / rel;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::string distribution_doc(const std::string& name, const std::array<std::array<int, 4>, 5>& rows) {
  json percent = json::object();
  const char* crit[] = {"maintainability", "analyzability", "changeability", "stability", "testability"};
  for (std::size_t c = 0; c < 5; ++c) {
    percent[crit[c]] = {{"excellent", rows[c][0]}, {"good", rows[c][1]}, {"fair", rows[c][2]}, {"poor", rows[c][3]}};
  }
  return json{{"name", name}, {"classCount", 10}, {"percent", percent}}.dump();
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run_cli({"--help"}).code == kExitOk);
  CHECK(run_cli({}).code == kExitUsage);
  CHECK(run_cli({"analyze", "--no-such-flag", "x"}).code == kExitUsage);
  CHECK(run_cli({"bogus"}).code == kExitUsage);
  CHECK(run_cli({"analyze", "--suite", "nope", (kFixtures / "suites").string()}).code == kExitUsage);
  CHECK(run_cli({"kiviat", "--vector", "1,2,3"}).code == kExitUsage);
}

TEST_CASE("missing input is an analysis error") {
  const auto r = run_cli({"analyze", "--suite", "ck", (kFixtures / "does-not-exist").string()});
  CHECK(r.code != kExitOk);
  CHECK(r.err.find("qualimeter:") != std::string::npos);
}

TEST_CASE("analyze ck on the inheritance suite") {
  const auto r = run_cli({"analyze", "--suite", "ck", (kFixtures / "suites" / "suite1").string()});
  REQUIRE(r.code == kExitOk);
  const auto doc = json::parse(r.out);
  CHECK(doc["command"] == "analyze");
  std::map<std::string, std::pair<int, int>> noc_dit;
  for (const auto& c : doc["ck"]["classes"]) {
    const std::string name = c["name"];
    noc_dit[name.substr(name.rfind('.') + 1)] = {c["noc"].get<int>(), c["dit"].get<int>()};
  }
  CHECK(noc_dit["A"] == std::pair{2, 0});
  CHECK(noc_dit["B"] == std::pair{0, 1});
  CHECK(noc_dit["C"] == std::pair{0, 2});
  CHECK(noc_dit["D"] == std::pair{1, 1});
  CHECK(noc_dit["SuperC"] == std::pair{0, 0});
}

TEST_CASE("analyze all suites writes json and csv files") {
  TempDir dir;
  const auto src = (kFixtures / "suites").string();
  auto r = run_cli({"analyze", "--suite", "ck,mood,qmood,logiscope,complexity", src, "--out", dir.path.string()});
  REQUIRE(r.code == kExitOk);
  const auto doc = json::parse(slurp(dir.path / "analysis.json"));
  for (const char* k : {"ck", "mood", "qmood", "logiscope", "complexity"}) CHECK(doc.contains(k));
  CHECK(doc["complexity"]["system"]["eVG"] == "unsupported");

  CHECK(run_cli({"analyze", "--suite", "ck,mood", src, "--format", "csv"}).code == kExitUsage);
  r = run_cli({"analyze", "--suite", "ck,mood", src, "--format", "csv", "--out", dir.path.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(slurp(dir.path / "ck.csv").rfind("class,wmc,dit,noc,cbo,rfc,lcom,nom\r\n", 0) == 0);
  CHECK(fs::exists(dir.path / "mood.csv"));
}

TEST_CASE("supplied maintainability index inputs") {
  const auto r = run_cli({"analyze", "--suite", "complexity", "--mi-inputs", "1000,10,100,0.1"});
  REQUIRE(r.code == kExitOk);
  const auto doc = json::parse(r.out);
  CHECK(doc["complexity"]["supplied"]["value"].get<double>() == doctest::Approx(81.9708).epsilon(1e-9));
}

TEST_CASE("cloc report equals the line counter") {
  const auto root = kFixtures / "corpus";
  const auto r = run_cli({"cloc", root.string()});
  REQUIRE(r.code == kExitOk);
  const auto doc = json::parse(r.out);
  std::vector<fs::path> roots{root};
  const auto census = count_lines(roots);
  REQUIRE(doc["files"].size() == census.files.size());
  for (std::size_t i = 0; i < census.files.size(); ++i) {
    const auto& f = doc["files"][i];
    CHECK(f["path"] == census.files[i].path);
    CHECK(f["code"] == census.files[i].lines.code);
    CHECK(f["comment"] == census.files[i].lines.comment);
    CHECK(f["blank"] == census.files[i].lines.blank);
  }
  const auto csv = run_cli({"cloc", root.string(), "--format", "csv"});
  CHECK(csv.out.find("\r\nJava,15,") != std::string::npos);
  CHECK(csv.out.find("\r\nSUM,") != std::string::npos);
}

TEST_CASE("extract then analyze the interchange file") {
  TempDir dir;
  auto r = run_cli({"extract", (kFixtures / "corpus").string(), "--out", dir.path.string()});
  REQUIRE(r.code == kExitOk);
  const auto model_file = dir.path / "model.json";
  REQUIRE(fs::exists(model_file));
  CHECK(load_interchange_file(model_file).type_count() == 21);
  r = run_cli({"analyze", "--suite", "ck", model_file.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(json::parse(r.out)["ck"]["classes"].size() == 21);
}

TEST_CASE("detect flags the god class") {
  TempDir dir;
  const auto file = dir.write("god.json", save_interchange(qtest::god_class_model()));
  auto r = run_cli({"detect", file.string()});
  REQUIRE(r.code == kExitOk);
  bool flagged = false;
  const auto found = json::parse(r.out);
  for (const auto& d : found["detections"]) {
    if (d["rule"].get<std::string>() != "GodClass") continue;
    for (const auto& f : d["flagged"]) flagged = flagged || f["entity"].get<std::string>() == "God";
  }
  CHECK(flagged);

  const auto calm = dir.write("calm.json", save_interchange(qtest::god_class_model(true)));
  r = run_cli({"detect", calm.string()});
  REQUIRE(r.code == kExitOk);
  const auto none = json::parse(r.out);
  for (const auto& d : none["detections"]) {
    if (d["rule"].get<std::string>() == "GodClass") CHECK(d["flagged"].empty());
  }

  const auto rules = dir.write("rules.json", R"({"name":"Wide","scope":"class","expr":{"metric":"wmc","op":"higherThan","value":69}})");
  r = run_cli({"detect", file.string(), "--rules", rules.string()});
  REQUIRE(r.code == kExitOk);
  const auto doc = json::parse(r.out);
  REQUIRE(doc["detections"].size() == 1);
  REQUIRE(doc["detections"][0]["flagged"].size() == 1);
  CHECK(doc["detections"][0]["flagged"][0]["entity"].get<std::string>() == "God");

  const auto bad = dir.write("bad.json", R"({"name":"Bad","expr":{"metric":"wmc","op":"~","value":1}})");
  CHECK(run_cli({"detect", file.string(), "--rules", bad.string()}).code == kExitAnalysis);
}

TEST_CASE("kiviat from a printed vector") {
  auto r = run_cli({"kiviat", "--vector", "0.19,90,8,8,5,2,483,68,22,167,0,0,0"});
  REQUIRE(r.code == kExitOk);
  CHECK(count_alert_axes(r.out) == 4);
  r = run_cli({"kiviat", "--vector", "0.19,90,8,8,5,2,483,68,22,167,0,0,0", "--format", "json"});
  REQUIRE(r.code == kExitOk);
  int alerts = 0;
  const auto doc = json::parse(r.out);
  for (const auto& m : doc["kiviat"][0]["metrics"]) alerts += m["status"].get<int>() == -1;
  CHECK(alerts == 4);
}

TEST_CASE("treemap from a hierarchy file") {
  TempDir dir;
  const auto h = dir.write("h.json", R"({"name":"root","children":[{"name":"a","weight":1},{"name":"b","weight":1}]})");
  auto r = run_cli({"treemap", "--hierarchy", h.string(), "--format", "json", "--resolution", "64"});
  REQUIRE(r.code == kExitOk);
  const auto doc = json::parse(r.out);
  double total = 0;
  for (const auto& c : doc["cells"]) {
    if (c["leaf"].get<bool>()) {
      CHECK(c["areaShare"].get<double>() == doctest::Approx(0.5).epsilon(0.04));
      total += c["areaShare"].get<double>();
    }
  }
  CHECK(total == doctest::Approx(1.0));
  CHECK(run_cli({"treemap", "--hierarchy", h.string(), "--resolution", "4"}).code == kExitUsage);
  const auto neg = dir.write("neg.json", R"({"name":"root","children":[{"name":"a","weight":-1}]})");
  CHECK(run_cli({"treemap", "--hierarchy", neg.string()}).code == kExitAnalysis);
}

TEST_CASE("stability transitions") {
  TempDir dir;
  const auto f = dir.write("it.json", R"([{"iteration":"i1","classes":["A","B"]},
    {"iteration":"i2","classes":["A","C"],"renames":{"B":"C"}}])");
  const auto r = run_cli({"stability", "--iterations", f.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(json::parse(r.out)["transitions"].size() == 1);
}

TEST_CASE("correlate csv columns") {
  TempDir dir;
  const auto f = dir.write("m.csv", "class,wmc,rfc,label\nA,1,10,x\nB,2,20,y\nC,3,30,z\nD,4,25,w\n");
  const auto r = run_cli({"correlate", f.string(), "--columns", "wmc,rfc"});
  REQUIRE(r.code == kExitOk);
  const auto doc = json::parse(r.out);
  REQUIRE(doc["pairs"].size() == 1);
  CHECK(doc["pairs"][0]["spearman"].get<double>() == doctest::Approx(0.8));
}

TEST_CASE("compare echoes the ranking ticks") {
  TempDir dir;
  const auto a = dir.write("marf.json", distribution_doc("MARF", {{{24, 60, 10, 6}, {51, 35, 12, 1}, {78, 15, 5, 2},
                                                                  {50, 31, 16, 4}, {76, 18, 4, 2}}}));
  const auto b = dir.write("gipsy.json", distribution_doc("GIPSY", {{{26, 59, 9, 6}, {40, 43, 13, 4}, {79, 12, 5, 4},
                                                                    {59, 29, 9, 3}, {75, 18, 4, 2}}}));
  auto r = run_cli({"compare", a.string(), b.string()});
  REQUIRE(r.code == kExitOk);
  const auto doc = json::parse(r.out);
  CHECK(doc["criteria"]["maintainability"]["higherRank"] == json({false, true}));
  CHECK(doc["criteria"]["analyzability"]["higherRank"] == json({true, false}));
  CHECK(doc["criteria"]["changeability"]["higherRank"] == json({true, false}));
  CHECK(doc["criteria"]["stability"]["higherRank"] == json({false, true}));
  CHECK(doc["criteria"]["testability"]["higherRank"] == json({true, true}));

  r = run_cli({"compare", a.string(), b.string(), "--out", dir.path.string(), "--names", "X,Y"});
  REQUIRE(r.code == kExitOk);
  CHECK(slurp(dir.path / "comparison.csv").rfind("criterion,X_excellent", 0) == 0);
  CHECK(fs::exists(dir.path / "comparison.json"));
  CHECK(run_cli({"compare", a.string()}).code == kExitUsage);
}

TEST_CASE("defaults file supplies options") {
  TempDir dir;
  const auto cfg = dir.write("cfg.json", R"({"format":"csv"})");
  const auto r = run_cli({"cloc", (kFixtures / "corpus").string(), "--config", cfg.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.rfind("language,files,blank,comment,code", 0) == 0);
}
