#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qualimeter/ck.hpp"
#include "qualimeter/model.hpp"

namespace qualimeter {

// Per-class Logiscope-style metrics, in the order of the Kiviat table.
enum class LogiscopeMetric : std::size_t {
  kClComf,
  kClComm,
  kClData,
  kClDataPubl,
  kClFunc,
  kClFuncPubl,
  kClLine,
  kClStat,
  kClWmc,
  kCuCdused,
  kCuCdusers,
  kInBases,
  kInNoc,
};
inline constexpr std::size_t kLogiscopeMetricCount = 13;

std::string_view metric_name(LogiscopeMetric m);    // "cl_wmc"
std::string_view metric_caption(LogiscopeMetric m); // "Weighted Methods per Class"
// Accepts the "cl_conf" spelling as an alias of cl_comf.
std::optional<LogiscopeMetric> parse_logiscope_metric(std::string_view token);

struct LogiscopeMetrics {
  std::array<double, kLogiscopeMetricCount> values{};

  double& operator[](LogiscopeMetric m) { return values[static_cast<std::size_t>(m)]; }
  double operator[](LogiscopeMetric m) const { return values[static_cast<std::size_t>(m)]; }
};

struct LogiscopeOptions {
  CkOptions ck;
  bool bases_include_interfaces = false;  // in_bases adds every transitively implemented interface
};

enum class QualityLevel { kExcellent, kGood, kFair, kPoor };
inline constexpr std::size_t kQualityLevelCount = 4;
std::string_view to_string(QualityLevel level);

struct MetricBounds {
  double min = -std::numeric_limits<double>::infinity();
  double max = std::numeric_limits<double>::infinity();
};

// Acceptable [min, max] per metric plus the cut-offs that turn metric values
// into band scores (0 excellent .. 3 poor) and band-score sums into levels.
struct ThresholdProfile {
  std::array<MetricBounds, kLogiscopeMetricCount> bounds{};
  // Relative excess beyond a bound at or below which the band score is 1,
  // then 2; larger excess scores 3.
  std::array<double, 2> excess_cutoffs{0.5, 1.0};
  // Band-score sum at or below which a criterion is excellent, good, fair.
  std::array<double, 3> criterion_levels{1, 3, 6};
  // Same for the maintainability factor, which sums all four criteria.
  std::array<double, 3> factor_levels{4, 12, 24};

  MetricBounds& operator[](LogiscopeMetric m) { return bounds[static_cast<std::size_t>(m)]; }
  const MetricBounds& operator[](LogiscopeMetric m) const { return bounds[static_cast<std::size_t>(m)]; }

  // The thirteen min/max rows shipped with the Kiviat report.
  static ThresholdProfile standard();
  // Stable text fingerprint; equal profiles give equal fingerprints.
  std::string fingerprint() const;
};

enum class CriteriaMode { kRaw, kBanded };

enum class Criterion : std::size_t { kMaintainability, kAnalyzability, kChangeability, kStability, kTestability };
inline constexpr std::size_t kCriterionCount = 5;
std::string_view to_string(Criterion c);
std::optional<Criterion> parse_criterion(std::string_view token);

struct CriterionScores {
  // Indexed by Criterion; maintainability is the sum of the four others.
  std::array<double, kCriterionCount> values{};
  // Always derived from band scores, whichever mode produced `values`.
  std::array<QualityLevel, kCriterionCount> levels{};

  double operator[](Criterion c) const { return values[static_cast<std::size_t>(c)]; }
  QualityLevel level(Criterion c) const { return levels[static_cast<std::size_t>(c)]; }
};

LogiscopeMetrics logiscope_metrics(const ClassModel& model, const TypeDecl& type, const LogiscopeOptions& options = {});
LogiscopeMetrics logiscope_metrics(const ClassModel& model, std::string_view type_name,
                                   const LogiscopeOptions& options = {});

// -1 when the value lies outside [min, max] (bounds inclusive), else 0.
std::array<int, kLogiscopeMetricCount> kiviat_status(const LogiscopeMetrics& metrics, const ThresholdProfile& profile);

int band_score(double value, const MetricBounds& bounds, const ThresholdProfile& profile);
CriterionScores criteria(const LogiscopeMetrics& metrics, const ThresholdProfile& profile,
                         CriteriaMode mode = CriteriaMode::kBanded);

// Integer percentages of classes per level, per criterion.
struct LevelDistribution {
  std::array<std::array<int, kQualityLevelCount>, kCriterionCount> percent{};
  std::size_t class_count = 0;
  std::string profile_fingerprint;

  int at(Criterion c, QualityLevel l) const {
    return percent[static_cast<std::size_t>(c)][static_cast<std::size_t>(l)];
  }
  // fair + poor
  int bad_percent(Criterion c) const { return at(c, QualityLevel::kFair) + at(c, QualityLevel::kPoor); }
};

LevelDistribution level_distribution(const std::vector<CriterionScores>& scores);
// Throws AnalysisError on an empty model.
LevelDistribution level_distribution(const ClassModel& model, const ThresholdProfile& profile,
                                     const LogiscopeOptions& options = {});

// Per criterion, which side ranks higher (smaller bad share). Ties mark both.
struct RankingMark {
  bool first = false;
  bool second = false;
};
std::array<RankingMark, kCriterionCount> ranking_matrix(const LevelDistribution& a, const LevelDistribution& b);

}  // namespace qualimeter
