#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qualimeter/ck.hpp"
#include "qualimeter/model.hpp"

namespace qualimeter {

// A table of named metric columns over a population of entities (classes or
// methods). Missing values are absent and never satisfy a filter.
struct MetricTable {
  std::string scope;  // "class" or "method"
  std::vector<std::string> entities;
  std::map<std::string, std::vector<std::optional<double>>> columns;

  bool has_metric(std::string_view name) const { return columns.find(std::string(name)) != columns.end(); }
  void add_column(const std::string& name, std::vector<std::optional<double>> values);
};

enum class FilterKind { kHigherThan, kLowerThan, kTopCount, kTopPercent, kBottomCount, kBottomPercent };

std::string_view to_string(FilterKind k);
std::optional<FilterKind> parse_filter_kind(std::string_view token);

struct Filter {
  std::string metric;
  FilterKind kind = FilterKind::kHigherThan;
  double value = 0.0;  // threshold t, count k or percentage p
};

enum class Composition { kAnd, kOr };

struct RuleNode;
using RuleExpr = std::variant<Filter, std::shared_ptr<const RuleNode>>;

struct RuleNode {
  Composition op = Composition::kAnd;
  std::vector<RuleExpr> children;
};

struct DetectionRule {
  std::string name;
  std::string scope = "class";
  RuleExpr expr;
};

RuleExpr all_of(std::vector<RuleExpr> children);
RuleExpr any_of(std::vector<RuleExpr> children);

struct LeafEvidence {
  std::string metric;
  FilterKind kind;
  double threshold;
  std::optional<double> value;
  bool verdict;
};

struct FlaggedEntity {
  std::string entity;
  std::vector<LeafEvidence> evidence;
};

struct DetectionResult {
  std::string rule;
  std::vector<FlaggedEntity> flagged;  // sorted by entity
};

// Throws AnalysisError when a filter is malformed or names a metric the
// table lacks.
void validate_rule(const DetectionRule& rule, const MetricTable& table);
// Indices of entities passing a single filter. Relative filters rank the
// defined values descending (top) or ascending (bottom), ties by entity name,
// and keep ceil(p/100 * n) entries for percentages.
std::vector<std::size_t> apply_filter(const Filter& filter, const MetricTable& table);
DetectionResult evaluate_rule(const DetectionRule& rule, const MetricTable& table);

// Access to foreign data: distinct declared classes whose fields this class reads.
std::size_t atfd(const ClassModel& model, const TypeDecl& type);
// Tight class cohesion; absent with fewer than two eligible methods.
std::optional<double> tcc(const TypeDecl& type);

MetricTable class_metric_table(const ClassModel& model, const CkOptions& options = {});
// Columns: methodLoc, methodVg, foreignAccess, ownAccess, envyMargin.
MetricTable method_metric_table(const ClassModel& model);

// GodClass, LongMethod, FeatureEnvy with the shipped thresholds.
std::vector<DetectionRule> builtin_rules();

}  // namespace qualimeter
