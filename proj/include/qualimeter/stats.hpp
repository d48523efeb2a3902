#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qualimeter/model.hpp"
#include "qualimeter/relations.hpp"

namespace qualimeter {

// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

// Spearman's r_s = 1 - 6 sum(d^2) / (n (n^2 - 1)) on tie-averaged ranks.
// Throws std::invalid_argument when n < 2 or the lengths differ.
double spearman(std::span<const double> a, std::span<const double> b);

// (x - mean) / population standard deviation. Throws std::invalid_argument
// on fewer than two values or zero variance.
std::vector<double> z_normalize(std::span<const double> values);

struct IterationSnapshot {
  std::string iteration;
  std::set<std::string> classes;
  std::map<std::string, std::string> renames;  // old -> new, relative to the previous snapshot
};

struct StabilityDelta {
  std::size_t added = 0;
  std::size_t deleted = 0;
  std::size_t changed = 0;
  std::size_t sdi = 0;
};

// Throws AnalysisError when `next.renames` is not injective or renames a
// class absent from `prev`.
StabilityDelta sdi(const IterationSnapshot& prev, const IterationSnapshot& next);

struct UseCase {
  std::string name;
  std::vector<std::string> scenarios;
};

struct UseCaseModel {
  std::vector<UseCase> use_cases;
  std::vector<std::pair<std::string, std::string>> similar_pairs;  // unordered
};

// Throws AnalysisError on duplicate scenario names or pairs naming unknown
// scenarios or a scenario with itself.
void validate(const UseCaseModel& model);

// |similar pairs inside the use case| / C(scenarios, 2); absent below two scenarios.
std::optional<double> use_case_cohesion_local(const UseCaseModel& model, const UseCase& use_case);
// 1 - |similar pairs| / C(all scenarios, 2); absent below two scenarios.
std::optional<double> use_case_cohesion_global(const UseCaseModel& model);

// Coupling factor of a domain class model.
std::optional<double> domain_coupling_cf(const ClassModel& model, const CouplingOptions& options = {});

}  // namespace qualimeter
