#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qualimeter/detect.hpp"
#include "qualimeter/maintain.hpp"
#include "qualimeter/qmood.hpp"
#include "qualimeter/report.hpp"
#include "qualimeter/stats.hpp"
#include "qualimeter/treemap.hpp"

namespace qualimeter {

// Loaders for the JSON input files the command line accepts. Every loader
// throws SchemaError naming the offending key path.

// {"cl_wmc": {"min": 0, "max": 60}, ..., "bands": {"excess": [a, b],
// "criterion": [e, g, f], "factor": [e, g, f]}}. Metrics not listed keep the
// standard bounds. "-inf"/"+inf" strings denote open ends.
ThresholdProfile parse_profile(std::string_view json_text);

// {"reusability": {"DCC": 0.25, ...}, ...}; unlisted cells keep the
// published coefficients.
QmoodWeights parse_weights(std::string_view json_text);

// {"rules": [{"name", "scope", "expr": node}]} or a single rule object, where
// node is {"and": [...]}, {"or": [...]} or {"metric", "op", "value"}.
// "rule" and "filter" are accepted as spellings of "expr" and "op".
std::vector<DetectionRule> parse_rules(std::string_view json_text);

// {"name", "weight"?, "children": [...]}
TreemapNode parse_hierarchy(std::string_view json_text);

// {"useCases": [{"name", "scenarios": [...]}], "similarPairs": [["s1", "s2"], ...]}
// ("similar" is accepted too).
UseCaseModel parse_use_cases(std::string_view json_text);

// [{"iteration", "classes": [...], "renames": {"old": "new"}}, ...], either
// bare or under "iterations". "name" is accepted for "iteration".
std::vector<IterationSnapshot> parse_iterations(std::string_view json_text);

// A level distribution, either bare or wrapped in an analyze report:
// {"name", "classCount", "profile", "percent": {"maintainability":
// {"excellent": 24, ...}, ...}}
NamedDistribution parse_distribution(std::string_view json_text, std::string fallback_name);

std::string read_text_file(const std::filesystem::path& file);

}  // namespace qualimeter
