#include "qualimeter/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace qualimeter {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
  return s;
}

std::string point(double x, double y) { return fixed(x, 2) + "," + fixed(y, 2); }

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

double round4(double value) {
  if (!std::isfinite(value)) return value;
  const double scaled = std::round(value * 1e4 * 1e5) / 1e5;  // strip binary noise
  const double r = std::round(scaled);                         // half away from zero
  return r / 1e4;
}

std::string format_real(double value) {
  if (std::isinf(value)) return value > 0 ? "+inf" : "-inf";
  if (std::isnan(value)) return "nan";
  return fixed(round4(value), 4);
}

std::string format_optional(const std::optional<double>& value, std::string_view missing) {
  return value ? format_real(*value) : std::string(missing);
}

CsvTable::CsvTable(std::vector<std::string> header) { rows_.push_back(std::move(header)); }

void CsvTable::add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

std::string CsvTable::escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string CsvTable::str() const {
  std::string out;
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += escape(row[i]);
    }
    out += "\r\n";
  }
  return out;
}

std::string escape_xml(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string kiviat_svg(std::string_view title, const LogiscopeMetrics& metrics, const ThresholdProfile& profile) {
  constexpr double cx = 360, cy = 330, radius = 230;
  const auto status = kiviat_status(metrics, profile);
  std::array<double, kLogiscopeMetricCount> scale{};
  std::array<double, kLogiscopeMetricCount> angle{};
  for (std::size_t k = 0; k < kLogiscopeMetricCount; ++k) {
    const auto& b = profile.bounds[k];
    double s = std::abs(metrics.values[k]);
    if (std::isfinite(b.min)) s = std::max(s, std::abs(b.min));
    if (std::isfinite(b.max)) s = std::max(s, std::abs(b.max));
    scale[k] = s > 0 ? s * 1.25 : 1.0;
    angle[k] = -kPi / 2 + 2 * kPi * static_cast<double>(k) / kLogiscopeMetricCount;
  }
  auto at = [&](std::size_t k, double v) {
    const double r = radius * std::clamp(v / scale[k], 0.0, 1.0);
    return point(cx + r * std::cos(angle[k]), cy + r * std::sin(angle[k]));
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"900\" viewBox=\"0 0 720 900\">\n";
  svg << "<style>"
         ".axis{stroke:#8c8c8c;stroke-width:1}"
         ".axis.alert{stroke:#d62728;stroke-width:2.5}"
         ".label{font:12px sans-serif;fill:#333}"
         ".label.alert{fill:#d62728;font-weight:bold}"
         ".band{fill:#2ca02c;fill-opacity:0.15;fill-rule:evenodd;stroke:#2ca02c;stroke-dasharray:4 2}"
         ".value{fill:#1f77b4;fill-opacity:0.25;stroke:#1f77b4;stroke-width:2}"
         ".row{font:12px monospace;fill:#333}"
         ".row.alert{fill:#d62728}"
         "</style>\n";
  svg << "<title>" << escape_xml(title) << "</title>\n";
  svg << "<text x=\"360\" y=\"36\" text-anchor=\"middle\" class=\"label\" font-size=\"16\">Kiviat diagram for "
      << escape_xml(title) << "</text>\n";

  std::string outer = "M", inner = "M";
  for (std::size_t k = 0; k < kLogiscopeMetricCount; ++k) {
    const auto& b = profile.bounds[k];
    outer += (k ? " L" : "") + at(k, std::isfinite(b.max) ? b.max : scale[k]);
    inner += (k ? " L" : "") + at(k, std::isfinite(b.min) ? b.min : 0.0);
  }
  svg << "<path class=\"band\" d=\"" << outer << " Z " << inner << " Z\"/>\n";

  for (std::size_t k = 0; k < kLogiscopeMetricCount; ++k) {
    const bool alert = status[k] == -1;
    svg << "<line class=\"" << (alert ? "axis alert" : "axis") << "\" x1=\"" << fixed(cx, 2) << "\" y1=\""
        << fixed(cy, 2) << "\" x2=\"" << fixed(cx + radius * std::cos(angle[k]), 2) << "\" y2=\""
        << fixed(cy + radius * std::sin(angle[k]), 2) << "\" data-metric=\""
        << metric_name(static_cast<LogiscopeMetric>(k)) << "\"/>\n";
  }

  svg << "<polygon class=\"value\" points=\"";
  for (std::size_t k = 0; k < kLogiscopeMetricCount; ++k) svg << (k ? " " : "") << at(k, metrics.values[k]);
  svg << "\"/>\n";

  for (std::size_t k = 0; k < kLogiscopeMetricCount; ++k) {
    const double lx = cx + (radius + 22) * std::cos(angle[k]);
    const double ly = cy + (radius + 22) * std::sin(angle[k]) + 4;
    const double c = std::cos(angle[k]);
    const char* anchor = c > 0.2 ? "start" : (c < -0.2 ? "end" : "middle");
    svg << "<text class=\"" << (status[k] == -1 ? "label alert" : "label") << "\" x=\"" << fixed(lx, 2) << "\" y=\""
        << fixed(ly, 2) << "\" text-anchor=\"" << anchor << "\">" << metric_name(static_cast<LogiscopeMetric>(k))
        << "</text>\n";
  }

  double y = 620;
  svg << "<text class=\"row\" x=\"60\" y=\"" << fixed(y, 0) << "\">metric        value        min        max   status</text>\n";
  for (std::size_t k = 0; k < kLogiscopeMetricCount; ++k) {
    y += 18;
    char line[160];
    std::snprintf(line, sizeof line, "%-12s %10s %10s %10s %6d", std::string(metric_name(static_cast<LogiscopeMetric>(k))).c_str(),
                  format_real(metrics.values[k]).c_str(), format_real(profile.bounds[k].min).c_str(),
                  format_real(profile.bounds[k].max).c_str(), status[k]);
    svg << "<text class=\"" << (status[k] == -1 ? "row alert" : "row") << "\" x=\"60\" y=\"" << fixed(y, 0)
        << "\" xml:space=\"preserve\">" << escape_xml(line) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::size_t count_alert_axes(std::string_view svg) {
  std::size_t n = 0;
  constexpr std::string_view needle = "class=\"axis alert\"";
  for (auto pos = svg.find(needle); pos != std::string_view::npos; pos = svg.find(needle, pos + 1)) ++n;
  return n;
}

std::string treemap_svg(const HierarchyLayout& layout, std::string_view title) {
  const auto& raster = layout.raster;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << raster.width << "\" height=\"" << raster.height
      << "\" viewBox=\"0 0 " << raster.width << " " << raster.height << "\">\n";
  svg << "<title>" << escape_xml(title) << "</title>\n";
  svg << "<style>.leaf{stroke:#fff;stroke-width:0.6}.group{fill:none;stroke:#222}"
         ".name{font:9px sans-serif;fill:#111;text-anchor:middle}</style>\n";

  // Leaves first so group outlines stay on top.
  for (const auto& cell : layout.cells) {
    if (!cell.leaf || cell.samples.empty()) continue;
    const auto hue = fnv1a(cell.path) % 360;
    svg << "<polygon class=\"leaf\" fill=\"hsl(" << hue << ",55%,70%)\" data-path=\"" << escape_xml(cell.path)
        << "\" data-weight=\"" << format_real(cell.weight) << "\" points=\"";
    bool first = true;
    for (const auto& p : cell_outline(raster, cell.samples)) {
      svg << (first ? "" : " ") << point(p.x, p.y);
      first = false;
    }
    svg << "\"/>\n";
  }
  for (const auto& cell : layout.cells) {
    if (cell.leaf || cell.depth == 0 || cell.samples.empty()) continue;
    const double width = std::max(0.5, 3.0 - static_cast<double>(cell.depth) * 0.75);
    svg << "<polygon class=\"group\" stroke-width=\"" << fixed(width, 2) << "\" data-path=\""
        << escape_xml(cell.path) << "\" points=\"";
    bool first = true;
    for (const auto& p : cell_outline(raster, cell.samples)) {
      svg << (first ? "" : " ") << point(p.x, p.y);
      first = false;
    }
    svg << "\"/>\n";
  }
  const double total = static_cast<double>(raster.samples.size());
  for (const auto& cell : layout.cells) {
    if (!cell.leaf || static_cast<double>(cell.samples.size()) < 0.01 * total) continue;
    double sx = 0, sy = 0;
    for (auto s : cell.samples) {
      const auto c = raster.center(s);
      sx += c.x;
      sy += c.y;
    }
    const double n = static_cast<double>(cell.samples.size());
    const auto slash = cell.path.rfind('/');
    svg << "<text class=\"name\" x=\"" << fixed(sx / n, 2) << "\" y=\"" << fixed(sy / n, 2) << "\">"
        << escape_xml(slash == std::string::npos ? cell.path : cell.path.substr(slash + 1)) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void check_comparable(const NamedDistribution& a, const NamedDistribution& b) {
  const auto& fa = a.distribution.profile_fingerprint;
  const auto& fb = b.distribution.profile_fingerprint;
  if (!fa.empty() && !fb.empty() && fa != fb) {
    throw AnalysisError("reports '" + a.name + "' and '" + b.name + "' were computed with different threshold profiles");
  }
}

std::string comparison_json(const NamedDistribution& a, const NamedDistribution& b) {
  check_comparable(a, b);
  using nlohmann::ordered_json;
  const auto marks = ranking_matrix(a.distribution, b.distribution);
  ordered_json criteria = ordered_json::object();
  for (std::size_t c = 0; c < kCriterionCount; ++c) {
    const auto crit = static_cast<Criterion>(c);
    ordered_json levels = ordered_json::object();
    for (std::size_t l = 0; l < kQualityLevelCount; ++l) {
      const auto level = static_cast<QualityLevel>(l);
      levels[std::string(to_string(level))] = {a.distribution.at(crit, level), b.distribution.at(crit, level)};
    }
    criteria[std::string(to_string(crit))] = {
        {"levels", levels},
        {"bad", {a.distribution.bad_percent(crit), b.distribution.bad_percent(crit)}},
        {"higherRank", {marks[c].first, marks[c].second}}};
  }
  ordered_json doc = {{"schemaVersion", kReportSchemaVersion},
                      {"report", "comparison"},
                      {"systems", {a.name, b.name}},
                      {"classCounts", {a.distribution.class_count, b.distribution.class_count}},
                      {"criteria", criteria}};
  return doc.dump(2) + "\n";
}

std::string comparison_csv(const NamedDistribution& a, const NamedDistribution& b) {
  check_comparable(a, b);
  std::vector<std::string> header{"criterion"};
  for (const auto* side : {&a, &b}) {
    for (std::size_t l = 0; l < kQualityLevelCount; ++l) {
      header.push_back(side->name + "_" + std::string(to_string(static_cast<QualityLevel>(l))));
    }
    header.push_back(side->name + "_bad");
  }
  header.push_back(a.name + "_ranks_higher");
  header.push_back(b.name + "_ranks_higher");
  CsvTable table(header);
  const auto marks = ranking_matrix(a.distribution, b.distribution);
  for (std::size_t c = 0; c < kCriterionCount; ++c) {
    const auto crit = static_cast<Criterion>(c);
    std::vector<std::string> row{std::string(to_string(crit))};
    for (const auto* side : {&a, &b}) {
      for (std::size_t l = 0; l < kQualityLevelCount; ++l) {
        row.push_back(std::to_string(side->distribution.at(crit, static_cast<QualityLevel>(l))));
      }
      row.push_back(std::to_string(side->distribution.bad_percent(crit)));
    }
    row.push_back(marks[c].first ? "x" : "");
    row.push_back(marks[c].second ? "x" : "");
    table.add_row(std::move(row));
  }
  return table.str();
}

}  // namespace qualimeter
