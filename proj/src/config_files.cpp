#include <fstream>
#include <sstream>

#include "json_reader.hpp"
#include "qualimeter/config.hpp"

namespace qualimeter {

using detail::json;
using Reader = detail::JsonReader;

namespace {

template <std::size_t N>
std::array<double, N> read_cutoffs(const Reader& r) {
  if (!r.node().is_array() || r.node().size() != N) {
    throw SchemaError(r.path(), "expected an array of " + std::to_string(N) + " numbers");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = Reader(r.node()[i], r.path() + "[" + std::to_string(i) + "]").as_number();
    if (i > 0 && out[i] < out[i - 1]) throw SchemaError(r.path(), "cut-offs must be non-decreasing");
  }
  return out;
}

RuleExpr read_rule_node(const Reader& r) {
  r.require_object();
  for (const char* op : {"and", "or"}) {
    if (!r.has(op)) continue;
    std::vector<RuleExpr> children;
    for (const auto& c : r.array(op)) children.push_back(read_rule_node(c));
    if (children.empty()) throw SchemaError(r.path() + "." + op, "composition needs at least one operand");
    return std::string_view(op) == "and" ? all_of(std::move(children)) : any_of(std::move(children));
  }
  Filter f;
  f.metric = r.string("metric");
  const auto kind_node = r.child(r.has("op") ? "op" : "filter");
  const auto kind = parse_filter_kind(kind_node.as_string());
  if (!kind) throw SchemaError(kind_node.path(), "unknown filter '" + kind_node.as_string() + "'");
  f.kind = *kind;
  f.value = r.number("value");
  return f;
}

DetectionRule read_rule(const Reader& r) {
  r.require_object();
  DetectionRule rule;
  rule.name = r.string("name");
  rule.scope = r.string("scope", "class");
  if (rule.scope != "class" && rule.scope != "method") {
    throw SchemaError(r.path() + ".scope", "scope must be 'class' or 'method'");
  }
  rule.expr = read_rule_node(r.child(r.has("expr") ? "expr" : "rule"));
  return rule;
}

TreemapNode read_node(const Reader& r) {
  r.require_object();
  TreemapNode node;
  node.name = r.string("name");
  if (r.has("weight")) node.weight = r.number("weight");
  for (const auto& c : r.array("children")) node.children.push_back(read_node(c));
  return node;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw SchemaError(file.generic_string(), "cannot read file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ThresholdProfile parse_profile(std::string_view json_text) {
  const json doc = detail::parse_json_document(json_text);
  Reader root(doc, "");
  root.require_object();
  auto profile = ThresholdProfile::standard();
  for (const auto& [key, value] : doc.items()) {
    if (key == "bands") continue;
    const auto metric = parse_logiscope_metric(key);
    if (!metric) throw SchemaError(key, "unknown metric");
    Reader entry(value, key);
    entry.require_object();
    auto& b = profile[*metric];
    if (entry.has("min")) b.min = entry.number("min");
    if (entry.has("max")) b.max = entry.number("max");
    if (b.min > b.max) throw SchemaError(key, "min exceeds max");
  }
  if (root.has("bands")) {
    const auto bands = root.child("bands");
    bands.require_object();
    if (bands.has("excess")) profile.excess_cutoffs = read_cutoffs<2>(bands.child("excess"));
    if (bands.has("criterion")) profile.criterion_levels = read_cutoffs<3>(bands.child("criterion"));
    if (bands.has("factor")) profile.factor_levels = read_cutoffs<3>(bands.child("factor"));
  }
  return profile;
}

QmoodWeights parse_weights(std::string_view json_text) {
  const json doc = detail::parse_json_document(json_text);
  Reader root(doc, "");
  root.require_object();
  auto weights = QmoodWeights::published();
  for (const auto& [attr_key, row] : doc.items()) {
    const auto attr = parse_attribute(attr_key);
    if (!attr) throw SchemaError(attr_key, "unknown quality attribute");
    Reader row_reader(row, attr_key);
    row_reader.require_object();
    for (const auto& [prop_key, value] : row.items()) {
      const auto prop = parse_property(prop_key);
      if (!prop) throw SchemaError(attr_key + "." + prop_key, "unknown design property");
      weights.at(*attr, *prop) = Reader(value, attr_key + "." + prop_key).as_number();
    }
  }
  return weights;
}

std::vector<DetectionRule> parse_rules(std::string_view json_text) {
  const json doc = detail::parse_json_document(json_text);
  Reader root(doc, "");
  root.require_object();
  std::vector<DetectionRule> rules;
  if (root.has("rules")) {
    for (const auto& r : root.array("rules")) rules.push_back(read_rule(r));
  } else {
    rules.push_back(read_rule(root));
  }
  return rules;
}

TreemapNode parse_hierarchy(std::string_view json_text) {
  const json doc = detail::parse_json_document(json_text);
  return read_node(Reader(doc, ""));
}

UseCaseModel parse_use_cases(std::string_view json_text) {
  const json doc = detail::parse_json_document(json_text);
  Reader root(doc, "");
  root.require_object();
  UseCaseModel model;
  for (const auto& uc : root.array("useCases", true)) {
    uc.require_object();
    model.use_cases.push_back({uc.string("name"), uc.strings("scenarios")});
  }
  for (const auto& pair : root.array(root.has("similarPairs") ? "similarPairs" : "similar")) {
    if (!pair.node().is_array() || pair.node().size() != 2 || !pair.node()[0].is_string() ||
        !pair.node()[1].is_string()) {
      throw SchemaError(pair.path(), "expected a pair of scenario names");
    }
    model.similar_pairs.emplace_back(pair.node()[0].get<std::string>(), pair.node()[1].get<std::string>());
  }
  return model;
}

std::vector<IterationSnapshot> parse_iterations(std::string_view json_text) {
  const json doc = detail::parse_json_document(json_text);
  Reader root(doc, "");
  std::vector<Reader> items;
  if (doc.is_array()) {
    for (std::size_t i = 0; i < doc.size(); ++i) items.emplace_back(doc[i], "[" + std::to_string(i) + "]");
  } else {
    root.require_object();
    items = root.array("iterations", true);
  }
  std::vector<IterationSnapshot> out;
  for (const auto& it : items) {
    it.require_object();
    IterationSnapshot snap;
    snap.iteration = it.string(it.has("iteration") ? "iteration" : "name");
    for (const auto& c : it.strings("classes")) snap.classes.insert(c);
    if (it.has("renames")) {
      const auto renames = it.child("renames");
      renames.require_object();
      for (const auto& [from, to] : renames.node().items()) {
        snap.renames[from] = Reader(to, renames.path() + "." + from).as_string();
      }
    }
    out.push_back(std::move(snap));
  }
  return out;
}

NamedDistribution parse_distribution(std::string_view json_text, std::string fallback_name) {
  const json doc = detail::parse_json_document(json_text);
  const json* node = &doc;
  std::string prefix;
  if (doc.is_object() && doc.contains("logiscope") && doc["logiscope"].is_object() &&
      doc["logiscope"].contains("distribution")) {
    node = &doc["logiscope"]["distribution"];
    prefix = "logiscope.distribution";
  } else if (doc.is_object() && doc.contains("distribution")) {
    node = &doc["distribution"];
    prefix = "distribution";
  }
  Reader r(*node, prefix);
  r.require_object();
  NamedDistribution out;
  out.name = r.string("name", fallback_name);
  if (doc.is_object() && doc.contains("name") && doc["name"].is_string() && !r.has("name")) {
    out.name = doc["name"].get<std::string>();
  }
  out.distribution.class_count = r.count("classCount");
  out.distribution.profile_fingerprint = r.string("profile", "");
  const auto percent = r.child("percent");
  percent.require_object();
  for (std::size_t c = 0; c < kCriterionCount; ++c) {
    const auto crit = std::string(to_string(static_cast<Criterion>(c)));
    const auto row = percent.child(crit.c_str());
    row.require_object();
    int sum = 0;
    for (std::size_t l = 0; l < kQualityLevelCount; ++l) {
      const auto level = std::string(to_string(static_cast<QualityLevel>(l)));
      const auto v = row.count(level.c_str(), true);
      if (v > 100) throw SchemaError(row.path() + "." + level, "percentage above 100");
      out.distribution.percent[c][l] = static_cast<int>(v);
      sum += static_cast<int>(v);
    }
    if (sum < 98 || sum > 102) throw SchemaError(row.path(), "level percentages do not add up to 100");
  }
  return out;
}

}  // namespace qualimeter
