#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qualimeter/model.hpp"

namespace qualimeter {

// The eleven QMOOD design properties, in the order the weight matrix uses.
enum class DesignProperty : std::size_t {
  kDesignSize,     // DSC
  kHierarchies,    // NOH
  kAbstraction,    // ANA
  kEncapsulation,  // DAM
  kCoupling,       // DCC
  kCohesion,       // CAMC
  kComposition,    // MOA
  kInheritance,    // MFA
  kPolymorphism,   // NOP
  kMessaging,      // CIS
  kComplexity,     // NOM
};
inline constexpr std::size_t kDesignPropertyCount = 11;

enum class QualityAttribute : std::size_t {
  kReusability,
  kFlexibility,
  kUnderstandability,
  kFunctionality,
  kExtendibility,
  kEffectiveness,
};
inline constexpr std::size_t kQualityAttributeCount = 6;

std::string_view property_name(DesignProperty p);     // "coupling"
std::string_view property_acronym(DesignProperty p);  // "DCC"
std::string_view attribute_name(QualityAttribute a);  // "reusability"
std::optional<DesignProperty> parse_property(std::string_view token);
std::optional<QualityAttribute> parse_attribute(std::string_view token);

struct QmoodProperties {
  std::array<double, kDesignPropertyCount> values{};

  double& operator[](DesignProperty p) { return values[static_cast<std::size_t>(p)]; }
  double operator[](DesignProperty p) const { return values[static_cast<std::size_t>(p)]; }
};

struct QmoodWeights {
  std::array<std::array<double, kDesignPropertyCount>, kQualityAttributeCount> rows{};

  double& at(QualityAttribute a, DesignProperty p) {
    return rows[static_cast<std::size_t>(a)][static_cast<std::size_t>(p)];
  }
  double at(QualityAttribute a, DesignProperty p) const {
    return rows[static_cast<std::size_t>(a)][static_cast<std::size_t>(p)];
  }

  // Coefficients exactly as the published index computation table prints
  // them, including +0.25 coupling in the reusability row.
  static QmoodWeights published();
};

struct QualityIndexes {
  std::array<double, kQualityAttributeCount> values{};
  double tqi = 0.0;

  double operator[](QualityAttribute a) const { return values[static_cast<std::size_t>(a)]; }
};

struct RankedDesign {
  std::string name;
  QualityIndexes indexes;
};

// Throws AnalysisError on an empty model.
QmoodProperties design_properties(const ClassModel& model);
QualityIndexes quality_indexes(const QmoodProperties& props, const QmoodWeights& weights = QmoodWeights::published());
// Descending TQI; ties by name.
std::vector<RankedDesign> rank_designs(std::vector<RankedDesign> designs);
// Rescales each property to [0,1] across the design set; constant columns map to 0.
void normalize_min_max(std::vector<QmoodProperties>& designs);

}  // namespace qualimeter
