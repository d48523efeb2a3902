#include "qualimeter/detect.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>

#include "qualimeter/complexity.hpp"

namespace qualimeter {

namespace {

constexpr std::array<std::pair<FilterKind, std::string_view>, 6> kKinds{{
    {FilterKind::kHigherThan, "higherThan"},
    {FilterKind::kLowerThan, "lowerThan"},
    {FilterKind::kTopCount, "topCount"},
    {FilterKind::kTopPercent, "topPercent"},
    {FilterKind::kBottomCount, "bottomCount"},
    {FilterKind::kBottomPercent, "bottomPercent"},
}};

bool is_relative(FilterKind k) { return k != FilterKind::kHigherThan && k != FilterKind::kLowerThan; }

void validate_expr(const RuleExpr& expr, const MetricTable& table, const std::string& rule) {
  if (const auto* f = std::get_if<Filter>(&expr)) {
    if (!table.has_metric(f->metric)) {
      throw AnalysisError("rule '" + rule + "': unknown metric '" + f->metric + "'");
    }
    switch (f->kind) {
      case FilterKind::kHigherThan:
      case FilterKind::kLowerThan:
        if (!std::isfinite(f->value)) throw AnalysisError("rule '" + rule + "': threshold must be finite");
        break;
      case FilterKind::kTopCount:
      case FilterKind::kBottomCount:
        if (!(f->value >= 1) || f->value != std::floor(f->value)) {
          throw AnalysisError("rule '" + rule + "': count must be an integer >= 1");
        }
        break;
      case FilterKind::kTopPercent:
      case FilterKind::kBottomPercent:
        if (!(f->value > 0 && f->value <= 100)) throw AnalysisError("rule '" + rule + "': percent must be in (0, 100]");
        break;
    }
    return;
  }
  const auto& node = std::get<std::shared_ptr<const RuleNode>>(expr);
  if (!node || node->children.empty()) throw AnalysisError("rule '" + rule + "': empty composition");
  for (const auto& child : node->children) validate_expr(child, table, rule);
}

std::set<std::size_t> eval(const RuleExpr& expr, const MetricTable& table, std::vector<const Filter*>& leaves) {
  if (const auto* f = std::get_if<Filter>(&expr)) {
    leaves.push_back(f);
    auto hits = apply_filter(*f, table);
    return {hits.begin(), hits.end()};
  }
  const auto& node = *std::get<std::shared_ptr<const RuleNode>>(expr);
  std::set<std::size_t> acc;
  bool first = true;
  for (const auto& child : node.children) {
    auto part = eval(child, table, leaves);
    if (first) {
      acc = std::move(part);
      first = false;
    } else if (node.op == Composition::kAnd) {
      std::set<std::size_t> both;
      std::set_intersection(acc.begin(), acc.end(), part.begin(), part.end(), std::inserter(both, both.end()));
      acc = std::move(both);
    } else {
      acc.insert(part.begin(), part.end());
    }
  }
  return acc;
}

std::optional<double> as_value(std::size_t v) { return static_cast<double>(v); }

}  // namespace

void MetricTable::add_column(const std::string& name, std::vector<std::optional<double>> values) {
  if (values.size() != entities.size()) throw AnalysisError("metric column '" + name + "' has the wrong length");
  columns[name] = std::move(values);
}

std::string_view to_string(FilterKind k) {
  for (const auto& [kind, name] : kKinds) {
    if (kind == k) return name;
  }
  return "higherThan";
}

std::optional<FilterKind> parse_filter_kind(std::string_view token) {
  for (const auto& [kind, name] : kKinds) {
    if (name == token) return kind;
  }
  return std::nullopt;
}

RuleExpr all_of(std::vector<RuleExpr> children) {
  return std::make_shared<const RuleNode>(RuleNode{Composition::kAnd, std::move(children)});
}

RuleExpr any_of(std::vector<RuleExpr> children) {
  return std::make_shared<const RuleNode>(RuleNode{Composition::kOr, std::move(children)});
}

void validate_rule(const DetectionRule& rule, const MetricTable& table) { validate_expr(rule.expr, table, rule.name); }

std::vector<std::size_t> apply_filter(const Filter& filter, const MetricTable& table) {
  auto it = table.columns.find(filter.metric);
  if (it == table.columns.end()) throw AnalysisError("unknown metric '" + filter.metric + "'");
  const auto& column = it->second;

  std::vector<std::size_t> defined;
  for (std::size_t i = 0; i < column.size(); ++i) {
    if (column[i]) defined.push_back(i);
  }

  std::vector<std::size_t> out;
  if (!is_relative(filter.kind)) {
    for (auto i : defined) {
      const double v = *column[i];
      if ((filter.kind == FilterKind::kHigherThan && v > filter.value) ||
          (filter.kind == FilterKind::kLowerThan && v < filter.value)) {
        out.push_back(i);
      }
    }
    return out;
  }

  const bool top = filter.kind == FilterKind::kTopCount || filter.kind == FilterKind::kTopPercent;
  std::sort(defined.begin(), defined.end(), [&](std::size_t a, std::size_t b) {
    const double va = *column[a], vb = *column[b];
    if (va != vb) return top ? va > vb : va < vb;
    return table.entities[a] < table.entities[b];
  });
  std::size_t keep = 0;
  if (filter.kind == FilterKind::kTopCount || filter.kind == FilterKind::kBottomCount) {
    keep = static_cast<std::size_t>(filter.value);
  } else {
    keep = static_cast<std::size_t>(std::ceil(filter.value / 100.0 * static_cast<double>(defined.size()) - 1e-9));
  }
  keep = std::min(keep, defined.size());
  out.assign(defined.begin(), defined.begin() + static_cast<std::ptrdiff_t>(keep));
  std::sort(out.begin(), out.end());
  return out;
}

DetectionResult evaluate_rule(const DetectionRule& rule, const MetricTable& table) {
  validate_rule(rule, table);
  std::vector<const Filter*> leaves;
  const auto flagged = eval(rule.expr, table, leaves);

  std::vector<std::set<std::size_t>> leaf_hits;
  for (const auto* leaf : leaves) {
    auto hits = apply_filter(*leaf, table);
    leaf_hits.emplace_back(hits.begin(), hits.end());
  }

  DetectionResult result{rule.name, {}};
  for (auto idx : flagged) {
    FlaggedEntity fe{table.entities[idx], {}};
    for (std::size_t l = 0; l < leaves.size(); ++l) {
      const auto* leaf = leaves[l];
      fe.evidence.push_back(
          {leaf->metric, leaf->kind, leaf->value, table.columns.at(leaf->metric)[idx], leaf_hits[l].count(idx) > 0});
    }
    result.flagged.push_back(std::move(fe));
  }
  std::sort(result.flagged.begin(), result.flagged.end(),
            [](const FlaggedEntity& a, const FlaggedEntity& b) { return a.entity < b.entity; });
  return result;
}

std::size_t atfd(const ClassModel& model, const TypeDecl& type) {
  std::set<std::string> foreign;
  for (const auto& m : type.methods) {
    for (const auto& a : m.accessed_fields) {
      if (a.owner != type.qualified_name && model.find(a.owner)) foreign.insert(a.owner);
    }
  }
  return foreign.size();
}

std::optional<double> tcc(const TypeDecl& type) {
  const auto methods = cohesion_methods(type);
  if (methods.size() < 2) return std::nullopt;
  std::vector<std::vector<std::string>> used;
  for (const auto* m : methods) used.push_back(own_instance_fields_accessed(type, *m));
  std::size_t connected = 0, pairs = 0;
  for (std::size_t i = 0; i < used.size(); ++i) {
    for (std::size_t j = i + 1; j < used.size(); ++j) {
      ++pairs;
      std::vector<std::string> common;
      std::set_intersection(used[i].begin(), used[i].end(), used[j].begin(), used[j].end(), std::back_inserter(common));
      if (!common.empty()) ++connected;
    }
  }
  return static_cast<double>(connected) / static_cast<double>(pairs);
}

MetricTable class_metric_table(const ClassModel& model, const CkOptions& options) {
  MetricTable table;
  table.scope = "class";
  for (const auto& t : model.types()) table.entities.push_back(t.qualified_name);
  const auto ck = ck_suite(model, options);
  std::vector<std::optional<double>> wmc_c, dit_c, noc_c, cbo_c, rfc_c, lcom_c, nom_c, atfd_c, tcc_c;
  for (std::size_t i = 0; i < ck.size(); ++i) {
    const auto& t = model.types()[i];
    wmc_c.push_back(as_value(ck[i].wmc));
    dit_c.push_back(as_value(ck[i].dit));
    noc_c.push_back(as_value(ck[i].noc));
    cbo_c.push_back(as_value(ck[i].cbo));
    rfc_c.push_back(as_value(ck[i].rfc));
    lcom_c.push_back(as_value(ck[i].lcom.value));
    nom_c.push_back(as_value(ck[i].nom));
    atfd_c.push_back(as_value(atfd(model, t)));
    tcc_c.push_back(tcc(t));
  }
  table.add_column("wmc", std::move(wmc_c));
  table.add_column("dit", std::move(dit_c));
  table.add_column("noc", std::move(noc_c));
  table.add_column("cbo", std::move(cbo_c));
  table.add_column("rfc", std::move(rfc_c));
  table.add_column("lcom", std::move(lcom_c));
  table.add_column("nom", std::move(nom_c));
  table.add_column("atfd", std::move(atfd_c));
  table.add_column("tcc", std::move(tcc_c));
  return table;
}

MetricTable method_metric_table(const ClassModel& model) {
  MetricTable table;
  table.scope = "method";
  std::vector<std::optional<double>> loc, vg, foreign, own, margin;
  for (const auto& t : model.types()) {
    for (const auto& m : t.methods) {
      table.entities.push_back(t.qualified_name + "#" + m.signature());
      std::set<MemberRef> foreign_refs, own_refs;
      for (const auto& a : m.accessed_fields) {
        if (a.owner == t.qualified_name) {
          own_refs.insert(a);
        } else if (model.find(a.owner)) {
          foreign_refs.insert(a);
        }
      }
      loc.push_back(as_value(m.lines.code));
      vg.push_back(as_value(cyclomatic(m)));
      foreign.push_back(as_value(foreign_refs.size()));
      own.push_back(as_value(own_refs.size()));
      margin.push_back(static_cast<double>(foreign_refs.size()) - static_cast<double>(own_refs.size()));
    }
  }
  table.add_column("methodLoc", std::move(loc));
  table.add_column("methodVg", std::move(vg));
  table.add_column("foreignAccess", std::move(foreign));
  table.add_column("ownAccess", std::move(own));
  table.add_column("envyMargin", std::move(margin));
  return table;
}

std::vector<DetectionRule> builtin_rules() {
  std::vector<DetectionRule> rules;
  rules.push_back({"GodClass", "class",
                   all_of({Filter{"atfd", FilterKind::kTopPercent, 20}, Filter{"wmc", FilterKind::kHigherThan, 47},
                           Filter{"tcc", FilterKind::kLowerThan, 0.33}})});
  rules.push_back({"LongMethod", "method",
                   any_of({Filter{"methodLoc", FilterKind::kHigherThan, 80},
                           Filter{"methodVg", FilterKind::kHigherThan, 10}})});
  // foreign - own >= 3 on integer counts
  rules.push_back({"FeatureEnvy", "method", all_of({Filter{"envyMargin", FilterKind::kHigherThan, 2}})});
  return rules;
}

}  // namespace qualimeter
