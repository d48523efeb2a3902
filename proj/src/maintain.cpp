#include "qualimeter/maintain.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "qualimeter/complexity.hpp"
#include "qualimeter/relations.hpp"

namespace qualimeter {

namespace {

struct MetricInfo {
  LogiscopeMetric metric;
  std::string_view name;
  std::string_view caption;
};

constexpr std::array<MetricInfo, kLogiscopeMetricCount> kMetrics{{
    {LogiscopeMetric::kClComf, "cl_comf", "Class comment rate"},
    {LogiscopeMetric::kClComm, "cl_comm", "Number of lines of comment"},
    {LogiscopeMetric::kClData, "cl_data", "Total number of attributes"},
    {LogiscopeMetric::kClDataPubl, "cl_data_publ", "Number of public attributes"},
    {LogiscopeMetric::kClFunc, "cl_func", "Total number of methods"},
    {LogiscopeMetric::kClFuncPubl, "cl_func_publ", "Number of public methods"},
    {LogiscopeMetric::kClLine, "cl_line", "Number of lines"},
    {LogiscopeMetric::kClStat, "cl_stat", "Number of statements"},
    {LogiscopeMetric::kClWmc, "cl_wmc", "Weighted Methods per Class"},
    {LogiscopeMetric::kCuCdused, "cu_cdused", "Number of direct used classes"},
    {LogiscopeMetric::kCuCdusers, "cu_cdusers", "Number of direct users classes"},
    {LogiscopeMetric::kInBases, "in_bases", "Number of base classes"},
    {LogiscopeMetric::kInNoc, "in_noc", "Number of children"},
}};

constexpr std::array<std::string_view, kCriterionCount> kCriteria{
    "maintainability", "analyzability", "changeability", "stability", "testability"};

constexpr std::array<std::string_view, kQualityLevelCount> kLevels{"excellent", "good", "fair", "poor"};

QualityLevel classify(double band_sum, const std::array<double, 3>& cutoffs) {
  if (band_sum <= cutoffs[0]) return QualityLevel::kExcellent;
  if (band_sum <= cutoffs[1]) return QualityLevel::kGood;
  if (band_sum <= cutoffs[2]) return QualityLevel::kFair;
  return QualityLevel::kPoor;
}

std::size_t interface_bases(const ClassModel& model, const TypeDecl& type) {
  std::set<std::string> seen;
  std::vector<std::pair<const TypeDecl*, std::string>> pending;
  auto push_all = [&](const TypeDecl& t, const std::vector<std::string>& names) {
    for (const auto& n : names) pending.emplace_back(&t, n);
  };
  push_all(type, type.implemented_interfaces);
  for (const auto* anc : superclass_chain(model, type)) push_all(*anc, anc->implemented_interfaces);
  while (!pending.empty()) {
    auto [ctx, name] = pending.back();
    pending.pop_back();
    const auto resolved = model.resolve(*ctx, name);
    const std::string key = resolved ? *resolved : erase_type_arguments(name);
    if (!seen.insert(key).second) continue;
    if (resolved) {
      const auto& decl = model.get(*resolved);
      push_all(decl, decl.super_types);
    }
  }
  return seen.size();
}

LogiscopeMetrics compute_metrics(const ClassModel& model, const TypeDecl& type, const ReferenceGraph& graph,
                                 const LogiscopeOptions& options) {
  using M = LogiscopeMetric;
  LogiscopeMetrics out;
  const auto methods = counted_methods(type, options.ck);

  std::size_t public_fields = 0;
  for (const auto& f : type.fields) public_fields += f.visibility == Visibility::kPublic ? 1 : 0;
  std::size_t public_methods = 0;
  for (const auto* m : methods) public_methods += m->visibility == Visibility::kPublic ? 1 : 0;
  std::size_t statements = type.initializer_statements;
  for (const auto& m : type.methods) statements += m.statement_count;

  out[M::kClComm] = static_cast<double>(type.comment_lines);
  out[M::kClLine] = static_cast<double>(type.total_lines);
  out[M::kClComf] = type.total_lines > 0 ? static_cast<double>(type.comment_lines) / static_cast<double>(type.total_lines) : 0.0;
  out[M::kClData] = static_cast<double>(type.fields.size());
  out[M::kClDataPubl] = static_cast<double>(public_fields);
  out[M::kClFunc] = static_cast<double>(methods.size());
  out[M::kClFuncPubl] = static_cast<double>(public_methods);
  out[M::kClStat] = static_cast<double>(statements);
  out[M::kClWmc] = static_cast<double>(wmc(type, options.ck));
  out[M::kCuCdused] = static_cast<double>(graph.outgoing(type.qualified_name).size());
  out[M::kCuCdusers] = static_cast<double>(graph.incoming(type.qualified_name).size());
  auto bases = dit(model, type);
  if (options.bases_include_interfaces) bases += interface_bases(model, type);
  out[M::kInBases] = static_cast<double>(bases);
  out[M::kInNoc] = static_cast<double>(noc(model, type, options.ck));
  return out;
}

int percent_half_up(std::size_t count, std::size_t total) {
  return static_cast<int>((200 * count + total) / (2 * total));
}

}  // namespace

std::string_view metric_name(LogiscopeMetric m) { return kMetrics[static_cast<std::size_t>(m)].name; }
std::string_view metric_caption(LogiscopeMetric m) { return kMetrics[static_cast<std::size_t>(m)].caption; }

std::optional<LogiscopeMetric> parse_logiscope_metric(std::string_view token) {
  if (token == "cl_conf") return LogiscopeMetric::kClComf;
  for (const auto& info : kMetrics) {
    if (info.name == token) return info.metric;
  }
  return std::nullopt;
}

std::string_view to_string(QualityLevel level) { return kLevels[static_cast<std::size_t>(level)]; }
std::string_view to_string(Criterion c) { return kCriteria[static_cast<std::size_t>(c)]; }

std::optional<Criterion> parse_criterion(std::string_view token) {
  for (std::size_t i = 0; i < kCriteria.size(); ++i) {
    if (kCriteria[i] == token) return static_cast<Criterion>(i);
  }
  return std::nullopt;
}

ThresholdProfile ThresholdProfile::standard() {
  using M = LogiscopeMetric;
  constexpr double inf = std::numeric_limits<double>::infinity();
  ThresholdProfile p;
  p[M::kClComf] = {0.20, inf};
  p[M::kClComm] = {-inf, inf};
  p[M::kClData] = {0, 7};
  p[M::kClDataPubl] = {0, 0};
  p[M::kClFunc] = {0, 25};
  p[M::kClFuncPubl] = {0, 15};
  p[M::kClLine] = {-inf, inf};
  p[M::kClStat] = {0, 100};
  p[M::kClWmc] = {0, 60};
  p[M::kCuCdused] = {0, 10};
  p[M::kCuCdusers] = {0, 5};
  p[M::kInBases] = {0, 3};
  p[M::kInNoc] = {0, 3};
  return p;
}

std::string ThresholdProfile::fingerprint() const {
  std::string out;
  char buf[64];
  auto append = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g;", v);
    out += buf;
  };
  for (const auto& b : bounds) {
    append(b.min);
    append(b.max);
  }
  for (double c : excess_cutoffs) append(c);
  for (double c : criterion_levels) append(c);
  for (double c : factor_levels) append(c);
  return out;
}

LogiscopeMetrics logiscope_metrics(const ClassModel& model, const TypeDecl& type, const LogiscopeOptions& options) {
  ReferenceGraph graph(model, options.ck.coupling());
  return compute_metrics(model, type, graph, options);
}

LogiscopeMetrics logiscope_metrics(const ClassModel& model, std::string_view type_name,
                                   const LogiscopeOptions& options) {
  return logiscope_metrics(model, model.get(type_name), options);
}

std::array<int, kLogiscopeMetricCount> kiviat_status(const LogiscopeMetrics& metrics, const ThresholdProfile& profile) {
  std::array<int, kLogiscopeMetricCount> out{};
  for (std::size_t i = 0; i < kLogiscopeMetricCount; ++i) {
    const double v = metrics.values[i];
    const auto& b = profile.bounds[i];
    out[i] = (v < b.min || v > b.max) ? -1 : 0;
  }
  return out;
}

int band_score(double value, const MetricBounds& bounds, const ThresholdProfile& profile) {
  double excess = 0.0, scale = 1.0;
  if (value > bounds.max) {
    excess = value - bounds.max;
    scale = bounds.max != 0.0 ? std::fabs(bounds.max) : 1.0;
  } else if (value < bounds.min) {
    excess = bounds.min - value;
    scale = bounds.min != 0.0 ? std::fabs(bounds.min) : 1.0;
  } else {
    return 0;
  }
  const double relative = excess / scale;
  if (relative <= profile.excess_cutoffs[0]) return 1;
  if (relative <= profile.excess_cutoffs[1]) return 2;
  return 3;
}

CriterionScores criteria(const LogiscopeMetrics& metrics, const ThresholdProfile& profile, CriteriaMode mode) {
  using M = LogiscopeMetric;
  std::array<double, kLogiscopeMetricCount> raw = metrics.values;
  std::array<double, kLogiscopeMetricCount> banded{};
  for (std::size_t i = 0; i < kLogiscopeMetricCount; ++i) {
    banded[i] = band_score(metrics.values[i], profile.bounds[i], profile);
  }

  auto sums = [](const std::array<double, kLogiscopeMetricCount>& v) {
    auto at = [&](M m) { return v[static_cast<std::size_t>(m)]; };
    std::array<double, kCriterionCount> s{};
    s[1] = at(M::kClWmc) + at(M::kClComf) + at(M::kInBases) + at(M::kCuCdused);
    s[2] = at(M::kClStat) + at(M::kClFunc) + at(M::kClData);
    s[3] = at(M::kClDataPubl) + at(M::kCuCdusers) + at(M::kInNoc) + at(M::kClFuncPubl);
    s[4] = at(M::kClWmc) + at(M::kClFunc) + at(M::kCuCdused);
    s[0] = s[1] + s[2] + s[3] + s[4];
    return s;
  };

  const auto band_sums = sums(banded);
  CriterionScores out;
  out.values = mode == CriteriaMode::kRaw ? sums(raw) : band_sums;
  out.levels[0] = classify(band_sums[0], profile.factor_levels);
  for (std::size_t c = 1; c < kCriterionCount; ++c) out.levels[c] = classify(band_sums[c], profile.criterion_levels);
  return out;
}

LevelDistribution level_distribution(const std::vector<CriterionScores>& scores) {
  if (scores.empty()) throw AnalysisError("level distribution needs at least one class");
  LevelDistribution d;
  d.class_count = scores.size();
  for (std::size_t c = 0; c < kCriterionCount; ++c) {
    std::array<std::size_t, kQualityLevelCount> counts{};
    for (const auto& s : scores) ++counts[static_cast<std::size_t>(s.levels[c])];
    for (std::size_t l = 0; l < kQualityLevelCount; ++l) d.percent[c][l] = percent_half_up(counts[l], scores.size());
  }
  return d;
}

LevelDistribution level_distribution(const ClassModel& model, const ThresholdProfile& profile,
                                     const LogiscopeOptions& options) {
  if (model.type_count() == 0) throw AnalysisError("level distribution needs at least one class");
  ReferenceGraph graph(model, options.ck.coupling());
  std::vector<CriterionScores> scores;
  for (const auto& t : model.types()) {
    scores.push_back(criteria(compute_metrics(model, t, graph, options), profile, CriteriaMode::kBanded));
  }
  auto d = level_distribution(scores);
  d.profile_fingerprint = profile.fingerprint();
  return d;
}

std::array<RankingMark, kCriterionCount> ranking_matrix(const LevelDistribution& a, const LevelDistribution& b) {
  std::array<RankingMark, kCriterionCount> out{};
  for (std::size_t c = 0; c < kCriterionCount; ++c) {
    const auto crit = static_cast<Criterion>(c);
    const int bad_a = a.bad_percent(crit), bad_b = b.bad_percent(crit);
    out[c].first = bad_a <= bad_b;
    out[c].second = bad_b <= bad_a;
  }
  return out;
}

}  // namespace qualimeter
