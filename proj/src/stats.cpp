#include "qualimeter/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qualimeter/mood.hpp"

namespace qualimeter {

namespace {

std::pair<std::string, std::string> unordered(const std::string& a, const std::string& b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

std::set<std::pair<std::string, std::string>> canonical_pairs(const UseCaseModel& model) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& [a, b] : model.similar_pairs) out.insert(unordered(a, b));
  return out;
}

double choose2(std::size_t n) { return static_cast<double>(n) * static_cast<double>(n - 1) / 2.0; }

}  // namespace

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("spearman: series lengths differ");
  const auto n = a.size();
  if (n < 2) throw std::invalid_argument("spearman: need at least two observations");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  double sum_d2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = ra[i] - rb[i];
    sum_d2 += d * d;
  }
  const double nn = static_cast<double>(n);
  return 1.0 - 6.0 * sum_d2 / (nn * (nn * nn - 1.0));
}

std::vector<double> z_normalize(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("z-normalize: need at least two values");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / n);
  if (!(sd > 0.0)) throw std::invalid_argument("z-normalize: zero variance");
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back((v - mean) / sd);
  return out;
}

StabilityDelta sdi(const IterationSnapshot& prev, const IterationSnapshot& next) {
  std::set<std::string> targets;
  for (const auto& [from, to] : next.renames) {
    if (!prev.classes.count(from)) {
      throw AnalysisError("rename source '" + from + "' does not exist in iteration '" + prev.iteration + "'");
    }
    if (!targets.insert(to).second) throw AnalysisError("rename map is not injective: '" + to + "' used twice");
  }

  std::set<std::string> carried;
  for (const auto& c : prev.classes) {
    auto it = next.renames.find(c);
    carried.insert(it == next.renames.end() ? c : it->second);
  }

  StabilityDelta d;
  d.changed = next.renames.size();
  for (const auto& c : next.classes) d.added += carried.count(c) ? 0 : 1;
  for (const auto& c : prev.classes) {
    if (!next.renames.count(c) && !next.classes.count(c)) ++d.deleted;
  }
  d.sdi = d.added + d.deleted + d.changed;
  return d;
}

void validate(const UseCaseModel& model) {
  std::set<std::string> scenarios;
  for (const auto& uc : model.use_cases) {
    for (const auto& s : uc.scenarios) {
      if (!scenarios.insert(s).second) throw AnalysisError("duplicate scenario '" + s + "'");
    }
  }
  for (const auto& [a, b] : model.similar_pairs) {
    if (a == b) throw AnalysisError("scenario '" + a + "' paired with itself");
    if (!scenarios.count(a)) throw AnalysisError("similar pair names unknown scenario '" + a + "'");
    if (!scenarios.count(b)) throw AnalysisError("similar pair names unknown scenario '" + b + "'");
  }
}

std::optional<double> use_case_cohesion_local(const UseCaseModel& model, const UseCase& use_case) {
  validate(model);
  const auto n = use_case.scenarios.size();
  if (n < 2) return std::nullopt;
  const std::set<std::string> own(use_case.scenarios.begin(), use_case.scenarios.end());
  std::size_t similar = 0;
  for (const auto& [a, b] : canonical_pairs(model)) similar += (own.count(a) && own.count(b)) ? 1 : 0;
  return static_cast<double>(similar) / choose2(n);
}

std::optional<double> use_case_cohesion_global(const UseCaseModel& model) {
  validate(model);
  std::size_t n = 0;
  for (const auto& uc : model.use_cases) n += uc.scenarios.size();
  if (n < 2) return std::nullopt;
  return 1.0 - static_cast<double>(canonical_pairs(model).size()) / choose2(n);
}

std::optional<double> domain_coupling_cf(const ClassModel& model, const CouplingOptions& options) {
  return cf(model, options);
}

}  // namespace qualimeter
