#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qualimeter/maintain.hpp"
#include "qualimeter/treemap.hpp"

namespace qualimeter {

inline constexpr int kReportSchemaVersion = 1;

// Rounds half away from zero at the fourth decimal. Binary noise below 1e-9
// of a unit in the last place is discarded first so 0.12345 rounds up.
double round4(double value);
// Fixed four-decimal text ("-0.0000" is written as "0.0000"); infinities as
// "+inf"/"-inf".
std::string format_real(double value);
std::string format_optional(const std::optional<double>& value, std::string_view missing = "");

// Comma separated, header first, fields quoted only when they contain a
// comma, quote or line break.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> row);
  std::string str() const;

  static std::string escape(std::string_view field);

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::string escape_xml(std::string_view text);

// 13-axis radar chart: acceptable band ring, value polygon, alert-styled
// axes for status -1, and the value table as text.
std::string kiviat_svg(std::string_view title, const LogiscopeMetrics& metrics, const ThresholdProfile& profile);
// Number of axes drawn with the alert style in an SVG produced above.
std::size_t count_alert_axes(std::string_view svg);

std::string treemap_svg(const HierarchyLayout& layout, std::string_view title);

struct NamedDistribution {
  std::string name;
  LevelDistribution distribution;
};

// Throws AnalysisError when both sides carry profile fingerprints that differ.
void check_comparable(const NamedDistribution& a, const NamedDistribution& b);
std::string comparison_json(const NamedDistribution& a, const NamedDistribution& b);
std::string comparison_csv(const NamedDistribution& a, const NamedDistribution& b);

}  // namespace qualimeter
