#include "qualimeter/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qualimeter/ck.hpp"
#include "qualimeter/complexity.hpp"
#include "qualimeter/config.hpp"
#include "qualimeter/detect.hpp"
#include "qualimeter/ingest.hpp"
#include "qualimeter/maintain.hpp"
#include "qualimeter/mood.hpp"
#include "qualimeter/qmood.hpp"
#include "qualimeter/report.hpp"
#include "qualimeter/stats.hpp"
#include "qualimeter/treemap.hpp"

namespace qualimeter {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

const std::vector<std::string> kSuites = {"ck", "mood", "qmood", "logiscope", "complexity"};

std::string_view command_name(Command c) {
  switch (c) {
    case Command::kExtract: return "extract";
    case Command::kCloc: return "cloc";
    case Command::kAnalyze: return "analyze";
    case Command::kDetect: return "detect";
    case Command::kKiviat: return "kiviat";
    case Command::kTreemap: return "treemap";
    case Command::kStability: return "stability";
    case Command::kCorrelate: return "correlate";
    case Command::kCompare: return "compare";
  }
  return "?";
}

ordered_json real(double v) {
  if (!std::isfinite(v)) return v > 0 ? "+inf" : (v < 0 ? "-inf" : "nan");
  return round4(v);
}

ordered_json real(const std::optional<double>& v) { return v ? real(*v) : ordered_json(nullptr); }

ordered_json document(Command c) {
  return ordered_json{{"schemaVersion", kReportSchemaVersion}, {"command", std::string(command_name(c))}};
}

std::string dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

class Emitter {
 public:
  Emitter(const RunConfig& config, std::ostream& out) : config_(config), out_(out) {
    if (config_.out_dir) {
      std::error_code ec;
      fs::create_directories(*config_.out_dir, ec);
      if (ec) throw std::runtime_error("cannot create output directory " + config_.out_dir->generic_string());
    }
  }

  void emit(const std::string& file_name, const std::string& content) {
    if (!config_.out_dir) {
      out_ << content;
      return;
    }
    const auto path = *config_.out_dir / file_name;
    std::ofstream f(path, std::ios::binary);
    f << content;
    if (!f) throw std::runtime_error("write failed for " + path.generic_string());
  }

 private:
  const RunConfig& config_;
  std::ostream& out_;
};

OutputFormat effective_format(const RunConfig& config, OutputFormat fallback) {
  return config.format == OutputFormat::kDefault ? fallback : config.format;
}

void require_format(const RunConfig& config, OutputFormat fallback, std::initializer_list<OutputFormat> allowed) {
  const auto f = effective_format(config, fallback);
  for (auto a : allowed) {
    if (a == f) return;
  }
  throw UsageError("the requested --format is not available for '" + std::string(command_name(config.command)) + "'");
}

std::vector<double> parse_number_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string(what) + ": '" + item + "' is not a number");
    }
  }
  return out;
}

ThresholdProfile load_profile(const RunConfig& config) {
  return config.thresholds ? parse_profile(read_text_file(*config.thresholds)) : ThresholdProfile::standard();
}

CkOptions ck_options(const RunConfig& config) {
  CkOptions o;
  o.cbo_bidirectional = config.cbo_bidirectional;
  o.noc_interfaces = config.noc_interfaces;
  return o;
}

void report(std::ostream& err, std::string_view level, std::string_view kind, const std::string& message) {
  err << "qualimeter:" << level << ":" << kind << ": " << message << "\n";
}

bool looks_like_interchange(const std::vector<fs::path>& inputs) {
  if (inputs.empty()) return false;
  for (const auto& p : inputs) {
    std::error_code ec;
    if (!fs::is_regular_file(p, ec) || p.extension() != ".json") return false;
  }
  return true;
}

ClassModel load_model(const RunConfig& config, std::ostream& err) {
  if (config.inputs.empty()) throw UsageError("no input paths given");
  for (const auto& p : config.inputs) {
    std::error_code ec;
    if (!fs::exists(p, ec)) throw std::runtime_error("input not found: " + p.generic_string());
  }
  const bool interchange = config.input_mode == InputMode::kInterchange ||
                           (config.input_mode == InputMode::kAuto && looks_like_interchange(config.inputs));
  ClassModel model;
  if (interchange) {
    if (config.inputs.size() == 1) {
      model = load_interchange_file(config.inputs.front());
    } else {
      std::vector<TypeDecl> types;
      std::set<std::string> externals;
      std::vector<FileLineCount> files;
      for (const auto& p : config.inputs) {
        const auto part = load_interchange_file(p);
        types.insert(types.end(), part.types().begin(), part.types().end());
        externals.insert(part.external_types().begin(), part.external_types().end());
        files.insert(files.end(), part.files().begin(), part.files().end());
      }
      model = ClassModel(std::move(types), std::move(externals), std::move(files));
    }
  } else {
    auto parsed = parse_java_tree(config.inputs);
    for (const auto& d : parsed.diagnostics) {
      report(err, d.severity == Diagnostic::Severity::kError ? "error" : "warning", "extract", d.describe());
    }
    model = std::move(parsed.model);
  }
  for (const auto& v : validate(model)) report(err, "warning", "model", v.describe());
  return model;
}

// ---------------------------------------------------------------------------
// extract / cloc

int run_extract(const RunConfig& config, Emitter& emit, std::ostream& err) {
  require_format(config, OutputFormat::kJson, {OutputFormat::kJson});
  const auto model = load_model(config, err);
  emit.emit("model.json", save_interchange(model));
  return kExitOk;
}

int run_cloc(const RunConfig& config, Emitter& emit) {
  require_format(config, OutputFormat::kJson, {OutputFormat::kJson, OutputFormat::kCsv});
  if (config.inputs.empty()) throw UsageError("no input paths given");
  for (const auto& p : config.inputs) {
    std::error_code ec;
    if (!fs::exists(p, ec)) throw std::runtime_error("input not found: " + p.generic_string());
  }
  const auto census = count_lines(config.inputs);
  if (effective_format(config, OutputFormat::kJson) == OutputFormat::kCsv) {
    CsvTable table({"language", "files", "blank", "comment", "code"});
    LanguageTotals sum;
    for (const auto& [lang, t] : census.by_language) {
      table.add_row({lang, std::to_string(t.files), std::to_string(t.lines.blank), std::to_string(t.lines.comment),
                     std::to_string(t.lines.code)});
      sum.files += t.files;
      sum.lines.blank += t.lines.blank;
      sum.lines.comment += t.lines.comment;
      sum.lines.code += t.lines.code;
    }
    table.add_row({"SUM", std::to_string(sum.files), std::to_string(sum.lines.blank),
                   std::to_string(sum.lines.comment), std::to_string(sum.lines.code)});
    emit.emit("cloc.csv", table.str());
    return kExitOk;
  }
  auto doc = document(config.command);
  ordered_json langs = ordered_json::array();
  for (const auto& [lang, t] : census.by_language) {
    langs.push_back({{"language", lang},
                     {"files", t.files},
                     {"blank", t.lines.blank},
                     {"comment", t.lines.comment},
                     {"code", t.lines.code}});
  }
  ordered_json files = ordered_json::array();
  for (const auto& f : census.files) {
    files.push_back({{"path", f.path},
                     {"language", f.language},
                     {"blank", f.lines.blank},
                     {"comment", f.lines.comment},
                     {"code", f.lines.code}});
  }
  doc["languages"] = langs;
  doc["files"] = files;
  emit.emit("cloc.json", dump(doc));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze

struct SuiteOutput {
  ordered_json json;
  std::optional<CsvTable> csv;
};

SuiteOutput ck_section(const ClassModel& model, const RunConfig& config) {
  const auto options = ck_options(config);
  const auto rows = ck_suite(model, options);
  ordered_json classes = ordered_json::array();
  CsvTable csv({"class", "wmc", "dit", "noc", "cbo", "rfc", "lcom", "nom"});
  for (const auto& r : rows) {
    classes.push_back({{"name", r.type_name},
                       {"wmc", r.wmc},
                       {"dit", r.dit},
                       {"noc", r.noc},
                       {"cbo", r.cbo},
                       {"rfc", r.rfc},
                       {"lcom", r.lcom.value},
                       {"nom", r.nom}});
    csv.add_row({r.type_name, std::to_string(r.wmc), std::to_string(r.dit), std::to_string(r.noc),
                 std::to_string(r.cbo), std::to_string(r.rfc), std::to_string(r.lcom.value), std::to_string(r.nom)});
  }
  ordered_json json = {{"options",
                        {{"cboBidirectional", options.cbo_bidirectional}, {"nocInterfaces", options.noc_interfaces}}},
                       {"classes", classes}};
  return {json, csv};
}

SuiteOutput mood_section(const ClassModel& model) {
  const auto m = mood_suite(model);
  const std::vector<std::pair<std::string, std::optional<double>>> values = {
      {"MHF", m.mhf}, {"AHF", m.ahf}, {"MIF", m.mif}, {"AIF", m.aif}, {"CF", m.cf}, {"PF", m.pf}};
  ordered_json json = ordered_json::object();
  CsvTable csv({"metric", "value"});
  for (const auto& [k, v] : values) {
    json[k] = real(v);
    csv.add_row({k, format_optional(v)});
  }
  return {json, csv};
}

SuiteOutput qmood_section(const ClassModel& model, const RunConfig& config) {
  const auto weights = config.weights ? parse_weights(read_text_file(*config.weights)) : QmoodWeights::published();
  const auto props = design_properties(model);
  const auto idx = quality_indexes(props, weights);
  ordered_json p = ordered_json::object(), q = ordered_json::object();
  CsvTable csv({"kind", "name", "value"});
  for (std::size_t i = 0; i < kDesignPropertyCount; ++i) {
    const auto dp = static_cast<DesignProperty>(i);
    p[std::string(property_acronym(dp))] = real(props.values[i]);
    csv.add_row({"property", std::string(property_acronym(dp)), format_real(props.values[i])});
  }
  for (std::size_t i = 0; i < kQualityAttributeCount; ++i) {
    const auto qa = static_cast<QualityAttribute>(i);
    q[std::string(attribute_name(qa))] = real(idx.values[i]);
    csv.add_row({"index", std::string(attribute_name(qa)), format_real(idx.values[i])});
  }
  csv.add_row({"index", "TQI", format_real(idx.tqi)});
  return {{{"properties", p}, {"indexes", q}, {"tqi", real(idx.tqi)}}, csv};
}

ordered_json distribution_json(const LevelDistribution& d, const std::string& name) {
  ordered_json percent = ordered_json::object();
  for (std::size_t c = 0; c < kCriterionCount; ++c) {
    ordered_json row = ordered_json::object();
    for (std::size_t l = 0; l < kQualityLevelCount; ++l) {
      row[std::string(to_string(static_cast<QualityLevel>(l)))] = d.percent[c][l];
    }
    percent[std::string(to_string(static_cast<Criterion>(c)))] = row;
  }
  return {{"name", name}, {"classCount", d.class_count}, {"profile", d.profile_fingerprint}, {"percent", percent}};
}

std::string system_name(const RunConfig& config) {
  if (config.inputs.empty()) return "system";
  auto p = config.inputs.front();
  if (p.filename().empty()) p = p.parent_path();
  const auto stem = p.stem().string();
  return stem.empty() ? "system" : stem;
}

SuiteOutput logiscope_section(const ClassModel& model, const RunConfig& config) {
  const auto profile = load_profile(config);
  LogiscopeOptions options;
  options.ck = ck_options(config);
  std::vector<std::string> header{"class"};
  for (std::size_t k = 0; k < kLogiscopeMetricCount; ++k) header.emplace_back(metric_name(static_cast<LogiscopeMetric>(k)));
  for (std::size_t c = 0; c < kCriterionCount; ++c) header.emplace_back(to_string(static_cast<Criterion>(c)));
  CsvTable csv(header);

  ordered_json classes = ordered_json::array();
  std::vector<CriterionScores> scores;
  for (const auto& t : model.types()) {
    const auto m = logiscope_metrics(model, t, options);
    const auto status = kiviat_status(m, profile);
    const auto s = criteria(m, profile);
    scores.push_back(s);
    ordered_json metrics = ordered_json::object(), st = ordered_json::object(), crit = ordered_json::object();
    std::vector<std::string> row{t.qualified_name};
    for (std::size_t k = 0; k < kLogiscopeMetricCount; ++k) {
      const auto name = std::string(metric_name(static_cast<LogiscopeMetric>(k)));
      metrics[name] = real(m.values[k]);
      st[name] = status[k];
      row.push_back(format_real(m.values[k]));
    }
    for (std::size_t c = 0; c < kCriterionCount; ++c) {
      const auto cr = static_cast<Criterion>(c);
      crit[std::string(to_string(cr))] = {{"score", real(s[cr])}, {"level", std::string(to_string(s.level(cr)))}};
      row.emplace_back(to_string(s.level(cr)));
    }
    classes.push_back({{"name", t.qualified_name}, {"metrics", metrics}, {"status", st}, {"criteria", crit}});
    csv.add_row(std::move(row));
  }
  ordered_json json = {{"profile", profile.fingerprint()}, {"classes", classes}};
  if (!scores.empty()) {
    auto d = level_distribution(scores);
    d.profile_fingerprint = profile.fingerprint();
    json["distribution"] = distribution_json(d, system_name(config));
  }
  return {json, csv};
}

MiInputs parse_mi_inputs(const RunConfig& config) {
  const auto v = parse_number_list(*config.mi_inputs, "--mi-inputs");
  if (v.size() != 4) throw UsageError("--mi-inputs expects HV,CC,LOCPM,CLPM");
  return {v[0], v[1], v[2], v[3], config.clpm_percent ? ClpmUnit::kPercent : ClpmUnit::kFraction};
}

ordered_json mi_json(const MiInputs& in) {
  return {{"halsteadVolume", real(in.halstead_volume)},
          {"cyclomatic", real(in.cyclomatic)},
          {"locPerModule", real(in.loc_per_module)},
          {"clpm", real(in.clpm)},
          {"clpmUnit", in.clpm_unit == ClpmUnit::kPercent ? "percent" : "fraction"},
          {"value", real(maintainability_index(in))}};
}

SuiteOutput complexity_section(const ClassModel* model, const RunConfig& config) {
  ordered_json json = ordered_json::object();
  CsvTable csv({"scope", "name", "functions", "sum_vg", "avg_vg", "mi"});
  if (config.mi_inputs) {
    const auto in = parse_mi_inputs(config);
    json["supplied"] = mi_json(in);
    csv.add_row({"supplied", "", "", "", "", format_real(maintainability_index(in))});
  }
  if (model) {
    const auto sys = system_complexity_summary(*model);
    const auto sys_mi = mi_inputs(*model);
    json["system"] = {{"functions", sys.function_count},
                      {"sumVG", sys.sum_vg},
                      {"avgVG", real(sys.avg_vg)},
                      {"eVG", "unsupported"},
                      {"iVG", "unsupported"},
                      {"mi", sys_mi ? mi_json(*sys_mi) : ordered_json(nullptr)}};
    csv.add_row({"system", "", std::to_string(sys.function_count), std::to_string(sys.sum_vg),
                 format_optional(sys.avg_vg), sys_mi ? format_real(maintainability_index(*sys_mi)) : ""});
    ordered_json classes = ordered_json::array();
    for (const auto& t : model->types()) {
      std::size_t sum = 0;
      for (const auto& m : t.methods) sum += cyclomatic(m);
      const auto n = t.methods.size();
      const std::optional<double> avg =
          n ? std::optional<double>(static_cast<double>(sum) / static_cast<double>(n)) : std::nullopt;
      const auto in = mi_inputs(t);
      classes.push_back({{"name", t.qualified_name},
                         {"functions", n},
                         {"sumVG", sum},
                         {"avgVG", real(avg)},
                         {"mi", in ? real(maintainability_index(*in)) : ordered_json(nullptr)}});
      csv.add_row({"class", t.qualified_name, std::to_string(n), std::to_string(sum), format_optional(avg),
                   in ? format_real(maintainability_index(*in)) : ""});
    }
    json["classes"] = classes;
  }
  return {json, csv};
}

ordered_json use_case_section(const RunConfig& config, const ClassModel* model) {
  const auto uc = parse_use_cases(read_text_file(*config.use_cases));
  validate(uc);
  ordered_json local = ordered_json::object();
  for (const auto& u : uc.use_cases) local[u.name] = real(use_case_cohesion_local(uc, u));
  ordered_json json = {{"local", local}, {"global", real(use_case_cohesion_global(uc))}};
  if (model) json["domainCouplingCF"] = real(domain_coupling_cf(*model));
  // the global value reads both ways; say so rather than pick one
  json["interpretation"] = {
      "local: share of similar scenario pairs inside a use case, 1 when all are similar",
      "global: 1 - similar pairs / all scenario pairs; 1 can mean the most cohesive split, higher values can also "
      "point at scenarios that cut across use cases"};
  return json;
}

int run_analyze(const RunConfig& config, Emitter& emit, std::ostream& err) {
  require_format(config, OutputFormat::kJson, {OutputFormat::kJson, OutputFormat::kCsv});
  const bool csv = effective_format(config, OutputFormat::kJson) == OutputFormat::kCsv;
  if (csv && config.suites.size() > 1 && !config.out_dir) {
    throw UsageError("CSV output of several suites needs --out");
  }
  const bool only_supplied_mi =
      config.inputs.empty() && config.mi_inputs && config.suites == std::vector<std::string>{"complexity"};
  std::optional<ClassModel> model;
  if (!only_supplied_mi) model = load_model(config, err);

  auto doc = document(config.command);
  for (const auto& suite : config.suites) {
    SuiteOutput out;
    if (suite == "ck") out = ck_section(*model, config);
    else if (suite == "mood") out = mood_section(*model);
    else if (suite == "qmood") out = qmood_section(*model, config);
    else if (suite == "logiscope") out = logiscope_section(*model, config);
    else out = complexity_section(model ? &*model : nullptr, config);
    doc[suite] = out.json;
    if (csv && out.csv) emit.emit(suite + ".csv", out.csv->str());
  }
  if (config.use_cases) doc["useCases"] = use_case_section(config, model ? &*model : nullptr);
  if (!csv) emit.emit("analysis.json", dump(doc));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// detect

std::string filter_text(const LeafEvidence& e) {
  return e.metric + " " + std::string(to_string(e.kind)) + " " + format_real(e.threshold) + " (value " +
         format_optional(e.value, "none") + ")";
}

int run_detect(const RunConfig& config, Emitter& emit, std::ostream& err) {
  require_format(config, OutputFormat::kJson, {OutputFormat::kJson, OutputFormat::kCsv});
  const auto model = load_model(config, err);
  std::vector<DetectionRule> rules;
  for (const auto& f : config.rules) {
    auto more = parse_rules(read_text_file(f));
    rules.insert(rules.end(), more.begin(), more.end());
  }
  if (rules.empty()) rules = builtin_rules();
  const auto class_table = class_metric_table(model, ck_options(config));
  const auto method_table = method_metric_table(model);

  auto doc = document(config.command);
  ordered_json detections = ordered_json::array();
  CsvTable csv({"rule", "scope", "entity", "evidence"});
  for (const auto& rule : rules) {
    const auto& table = rule.scope == "method" ? method_table : class_table;
    const auto result = evaluate_rule(rule, table);
    ordered_json flagged = ordered_json::array();
    for (const auto& f : result.flagged) {
      ordered_json evidence = ordered_json::array();
      std::string summary;
      for (const auto& e : f.evidence) {
        evidence.push_back({{"metric", e.metric},
                            {"filter", std::string(to_string(e.kind))},
                            {"threshold", real(e.threshold)},
                            {"value", real(e.value)},
                            {"verdict", e.verdict}});
        if (!summary.empty()) summary += "; ";
        summary += filter_text(e) + (e.verdict ? " pass" : " fail");
      }
      flagged.push_back({{"entity", f.entity}, {"evidence", evidence}});
      csv.add_row({rule.name, rule.scope, f.entity, summary});
    }
    detections.push_back({{"rule", rule.name}, {"scope", rule.scope}, {"flagged", flagged}});
  }
  doc["detections"] = detections;
  if (effective_format(config, OutputFormat::kJson) == OutputFormat::kCsv) {
    emit.emit("detections.csv", csv.str());
  } else {
    emit.emit("detections.json", dump(doc));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// kiviat

std::string safe_file_name(std::string name) {
  for (auto& c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '_' && c != '-') c = '_';
  }
  return name;
}

int run_kiviat(const RunConfig& config, Emitter& emit, std::ostream& err) {
  require_format(config, OutputFormat::kSvg, {OutputFormat::kSvg, OutputFormat::kJson, OutputFormat::kCsv});
  const auto profile = load_profile(config);
  std::vector<std::pair<std::string, LogiscopeMetrics>> subjects;
  if (config.vector) {
    if (!config.inputs.empty()) throw UsageError("--vector and input paths are mutually exclusive");
    const auto v = parse_number_list(*config.vector, "--vector");
    if (v.size() != kLogiscopeMetricCount) throw UsageError("--vector expects 13 values in Kiviat table order");
    LogiscopeMetrics m;
    std::copy(v.begin(), v.end(), m.values.begin());
    subjects.emplace_back(config.class_name.value_or("vector"), m);
  } else {
    const auto model = load_model(config, err);
    LogiscopeOptions options;
    options.ck = ck_options(config);
    if (config.class_name) {
      subjects.emplace_back(*config.class_name, logiscope_metrics(model, *config.class_name, options));
    } else {
      for (const auto& t : model.types()) subjects.emplace_back(t.qualified_name, logiscope_metrics(model, t, options));
    }
  }
  const auto format = effective_format(config, OutputFormat::kSvg);
  if (format == OutputFormat::kSvg && subjects.size() != 1 && !config.out_dir) {
    throw UsageError("one SVG per class needs --out (or pick one with --class)");
  }
  if (format == OutputFormat::kSvg) {
    for (const auto& [name, m] : subjects) emit.emit(safe_file_name(name) + ".svg", kiviat_svg(name, m, profile));
    return kExitOk;
  }
  auto doc = document(config.command);
  ordered_json list = ordered_json::array();
  CsvTable csv({"class", "metric", "value", "min", "max", "status"});
  for (const auto& [name, m] : subjects) {
    const auto status = kiviat_status(m, profile);
    ordered_json metrics = ordered_json::array();
    for (std::size_t k = 0; k < kLogiscopeMetricCount; ++k) {
      const auto metric = std::string(metric_name(static_cast<LogiscopeMetric>(k)));
      metrics.push_back({{"metric", metric},
                         {"value", real(m.values[k])},
                         {"min", real(profile.bounds[k].min)},
                         {"max", real(profile.bounds[k].max)},
                         {"status", status[k]}});
      csv.add_row({name, metric, format_real(m.values[k]), format_real(profile.bounds[k].min),
                   format_real(profile.bounds[k].max), std::to_string(status[k])});
    }
    list.push_back({{"class", name}, {"metrics", metrics}});
  }
  doc["kiviat"] = list;
  if (format == OutputFormat::kCsv) emit.emit("kiviat.csv", csv.str());
  else emit.emit("kiviat.json", dump(doc));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// treemap

TreemapNode hierarchy_from_model(const ClassModel& model, const std::string& root_name) {
  TreemapNode root{root_name, std::nullopt, {}};
  for (const auto& t : model.types()) {
    std::vector<std::string> parts;
    std::stringstream ss(t.package_name);
    std::string part;
    while (std::getline(ss, part, '.')) {
      if (!part.empty()) parts.push_back(part);
    }
    auto leaf = t.package_name.empty() ? t.qualified_name : t.qualified_name.substr(t.package_name.size() + 1);
    TreemapNode* node = &root;
    for (const auto& p : parts) {
      auto it = std::find_if(node->children.begin(), node->children.end(),
                             [&](const TreemapNode& c) { return c.name == p && !c.is_leaf(); });
      if (it == node->children.end()) {
        node->children.push_back({p, std::nullopt, {}});
        node->children.back().children.reserve(0);
        it = node->children.end() - 1;
      }
      node = &*it;
    }
    node->children.push_back({leaf, static_cast<double>(std::max<std::size_t>(1, t.total_lines)), {}});
  }
  return root;
}

int run_treemap(const RunConfig& config, Emitter& emit, std::ostream& err) {
  require_format(config, OutputFormat::kSvg, {OutputFormat::kSvg, OutputFormat::kJson});
  if (config.resolution < 8 || config.resolution > 4096) throw UsageError("--resolution must be within [8, 4096]");
  TreemapNode root;
  if (config.hierarchy) {
    if (!config.inputs.empty()) throw UsageError("--hierarchy and input paths are mutually exclusive");
    root = parse_hierarchy(read_text_file(*config.hierarchy));
  } else {
    const auto model = load_model(config, err);
    if (model.type_count() == 0) throw AnalysisError("no types to lay out");
    root = hierarchy_from_model(model, system_name(config));
  }
  LayoutParams params;
  params.resolution = config.resolution;
  params.max_iterations = config.max_iterations;
  params.seed = config.seed;
  const auto raster = Raster::rectangle(config.resolution, config.resolution);
  const auto layout = layout_hierarchy(root, raster, params);

  for (const auto& cell : layout.cells) {
    if (cell.children_report && !cell.children_report->converged) {
      report(err, "warning", "treemap",
             "children of '" + cell.path + "' did not converge (max relative error " +
                 format_real(cell.children_report->max_relative_error) + ")");
    }
  }
  if (effective_format(config, OutputFormat::kSvg) == OutputFormat::kSvg) {
    emit.emit("treemap.svg", treemap_svg(layout, root.name));
    return kExitOk;
  }
  auto doc = document(config.command);
  const double total = static_cast<double>(raster.samples.size());
  ordered_json cells = ordered_json::array();
  for (const auto& c : layout.cells) {
    ordered_json entry = {{"path", c.path},
                          {"depth", c.depth},
                          {"weight", real(c.weight)},
                          {"leaf", c.leaf},
                          {"samples", c.samples.size()},
                          {"areaShare", real(static_cast<double>(c.samples.size()) / total)}};
    if (c.children_report) {
      entry["children"] = {{"iterations", c.children_report->iterations},
                           {"maxRelativeError", real(c.children_report->max_relative_error)},
                           {"converged", c.children_report->converged}};
    }
    cells.push_back(entry);
  }
  doc["resolution"] = config.resolution;
  doc["seed"] = config.seed;
  doc["cells"] = cells;
  emit.emit("treemap.json", dump(doc));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// stability

int run_stability(const RunConfig& config, Emitter& emit) {
  require_format(config, OutputFormat::kJson, {OutputFormat::kJson, OutputFormat::kCsv});
  if (!config.iterations) throw UsageError("stability needs --iterations <file>");
  const auto snaps = parse_iterations(read_text_file(*config.iterations));
  if (snaps.size() < 2) throw AnalysisError("stability needs at least two iterations");
  auto doc = document(config.command);
  ordered_json list = ordered_json::array();
  CsvTable csv({"from", "to", "added", "deleted", "changed", "sdi"});
  for (std::size_t i = 1; i < snaps.size(); ++i) {
    const auto d = sdi(snaps[i - 1], snaps[i]);
    list.push_back({{"from", snaps[i - 1].iteration},
                    {"to", snaps[i].iteration},
                    {"added", d.added},
                    {"deleted", d.deleted},
                    {"changed", d.changed},
                    {"sdi", d.sdi}});
    csv.add_row({snaps[i - 1].iteration, snaps[i].iteration, std::to_string(d.added), std::to_string(d.deleted),
                 std::to_string(d.changed), std::to_string(d.sdi)});
  }
  doc["transitions"] = list;
  if (effective_format(config, OutputFormat::kJson) == OutputFormat::kCsv) emit.emit("stability.csv", csv.str());
  else emit.emit("stability.json", dump(doc));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// correlate

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw AnalysisError("CSV: unterminated quoted field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

int run_correlate(const RunConfig& config, Emitter& emit) {
  require_format(config, OutputFormat::kJson, {OutputFormat::kJson, OutputFormat::kCsv});
  if (config.inputs.size() != 1) throw UsageError("correlate takes exactly one CSV file");
  const auto rows = parse_csv(read_text_file(config.inputs.front()));
  if (rows.size() < 3) throw AnalysisError("CSV needs a header and at least two data rows");
  const auto& header = rows.front();
  std::map<std::string, std::vector<double>> numeric;
  for (std::size_t c = 0; c < header.size(); ++c) {
    std::vector<double> values;
    bool ok = true;
    for (std::size_t r = 1; r < rows.size() && ok; ++r) {
      if (rows[r].size() != header.size()) {
        throw AnalysisError("CSV row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                            " fields, header has " + std::to_string(header.size()));
      }
      try {
        std::size_t used = 0;
        values.push_back(std::stod(rows[r][c], &used));
        ok = used == rows[r][c].size();
      } catch (const std::exception&) {
        ok = false;
      }
    }
    if (ok) numeric.emplace(header[c], std::move(values));
  }
  std::vector<std::string> chosen = config.columns;
  if (chosen.empty()) {
    for (const auto& h : header) {
      if (numeric.count(h)) chosen.push_back(h);
    }
  }
  for (const auto& c : chosen) {
    if (!numeric.count(c)) throw AnalysisError("column '" + c + "' is missing or not numeric");
  }
  if (chosen.size() < 2) throw AnalysisError("need at least two numeric columns");

  auto doc = document(config.command);
  ordered_json pairs = ordered_json::array();
  CsvTable csv({"x", "y", "n", "spearman"});
  const auto n = rows.size() - 1;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    for (std::size_t j = i + 1; j < chosen.size(); ++j) {
      const double r = spearman(numeric[chosen[i]], numeric[chosen[j]]);
      pairs.push_back({{"x", chosen[i]}, {"y", chosen[j]}, {"n", n}, {"spearman", real(r)}});
      csv.add_row({chosen[i], chosen[j], std::to_string(n), format_real(r)});
    }
  }
  doc["pairs"] = pairs;
  if (effective_format(config, OutputFormat::kJson) == OutputFormat::kCsv) emit.emit("correlation.csv", csv.str());
  else emit.emit("correlation.json", dump(doc));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// compare

int run_compare(const RunConfig& config, Emitter& emit) {
  require_format(config, OutputFormat::kJson, {OutputFormat::kJson, OutputFormat::kCsv});
  if (config.inputs.size() != 2) throw UsageError("compare takes exactly two report files");
  if (!config.names.empty() && config.names.size() != 2) throw UsageError("--names expects two names");
  std::array<NamedDistribution, 2> sides;
  for (std::size_t i = 0; i < 2; ++i) {
    sides[i] = parse_distribution(read_text_file(config.inputs[i]), config.inputs[i].stem().string());
    if (!config.names.empty()) sides[i].name = config.names[i];
  }
  check_comparable(sides[0], sides[1]);
  if (config.out_dir) {
    emit.emit("comparison.json", comparison_json(sides[0], sides[1]));
    emit.emit("comparison.csv", comparison_csv(sides[0], sides[1]));
  } else if (effective_format(config, OutputFormat::kJson) == OutputFormat::kCsv) {
    emit.emit("comparison.csv", comparison_csv(sides[0], sides[1]));
  } else {
    emit.emit("comparison.json", comparison_json(sides[0], sides[1]));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Command line

struct Defaults {
  std::optional<fs::path> thresholds, weights, out;
  std::vector<fs::path> rules;
  std::optional<std::string> format, input_mode;
  std::optional<std::uint64_t> seed;
  bool clpm_percent = false, cbo_bidirectional = false, noc_interfaces = false;
};

Defaults load_defaults(const fs::path& file) {
  Defaults d;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text_file(file));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config " + file.generic_string() + ": " + e.what());
  }
  if (!doc.is_object()) throw UsageError("config " + file.generic_string() + ": expected an object");
  const auto base = file.parent_path();
  auto rel = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
  try {
    if (doc.contains("thresholds")) d.thresholds = rel(doc["thresholds"].get<std::string>());
    if (doc.contains("weights")) d.weights = rel(doc["weights"].get<std::string>());
    if (doc.contains("out")) d.out = rel(doc["out"].get<std::string>());
    if (doc.contains("rules")) {
      for (const auto& r : doc["rules"]) d.rules.push_back(rel(r.get<std::string>()));
    }
    if (doc.contains("format")) d.format = doc["format"].get<std::string>();
    if (doc.contains("inputMode")) d.input_mode = doc["inputMode"].get<std::string>();
    if (doc.contains("seed")) d.seed = doc["seed"].get<std::uint64_t>();
    d.clpm_percent = doc.value("clpmPercent", false);
    d.cbo_bidirectional = doc.value("cboBidirectional", false);
    d.noc_interfaces = doc.value("nocInterfaces", false);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config " + file.generic_string() + ": " + e.what());
  }
  return d;
}

OutputFormat parse_format(const std::string& s) {
  if (s == "json") return OutputFormat::kJson;
  if (s == "csv") return OutputFormat::kCsv;
  if (s == "svg") return OutputFormat::kSvg;
  throw UsageError("unknown format '" + s + "'");
}

InputMode parse_input_mode(const std::string& s) {
  if (s == "java") return InputMode::kJava;
  if (s == "interchange") return InputMode::kInterchange;
  if (s == "auto") return InputMode::kAuto;
  throw UsageError("unknown input mode '" + s + "'");
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

}  // namespace

void validate(const RunConfig& config) {
  if (config.command == Command::kAnalyze) {
    if (config.suites.empty()) throw UsageError("analyze needs --suite (ck|mood|qmood|logiscope|complexity)");
    for (const auto& s : config.suites) {
      if (std::find(kSuites.begin(), kSuites.end(), s) == kSuites.end()) throw UsageError("unknown suite '" + s + "'");
    }
    if (config.mi_inputs && std::find(config.suites.begin(), config.suites.end(), "complexity") == config.suites.end()) {
      throw UsageError("--mi-inputs belongs to the complexity suite");
    }
  }
  if (config.clpm_percent && !config.mi_inputs && config.command == Command::kAnalyze) {
    // Extracted comment shares are always fractions; the flag only rescales supplied values.
  }
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    Emitter emit(config, out);
    switch (config.command) {
      case Command::kExtract: return run_extract(config, emit, err);
      case Command::kCloc: return run_cloc(config, emit);
      case Command::kAnalyze: return run_analyze(config, emit, err);
      case Command::kDetect: return run_detect(config, emit, err);
      case Command::kKiviat: return run_kiviat(config, emit, err);
      case Command::kTreemap: return run_treemap(config, emit, err);
      case Command::kStability: return run_stability(config, emit);
      case Command::kCorrelate: return run_correlate(config, emit);
      case Command::kCompare: return run_compare(config, emit);
    }
  } catch (const UsageError& e) {
    report(err, "error", "usage", e.what());
    return kExitUsage;
  } catch (const SchemaError& e) {
    report(err, "error", "input", e.what());
    return kExitAnalysis;
  } catch (const AnalysisError& e) {
    report(err, "error", "analysis", e.what());
    return kExitAnalysis;
  } catch (const std::invalid_argument& e) {
    report(err, "error", "analysis", e.what());
    return kExitAnalysis;
  } catch (const std::exception& e) {
    report(err, "error", "io", e.what());
    return kExitAnalysis;
  }
  return kExitAnalysis;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Object-oriented quality metrics for Java code bases and interchange class models", "qualimeter"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::vector<std::string> inputs, suites, rules, columns, names;
  std::string format, input_mode, config_file;
  std::string thresholds, weights, out_dir, mi, use_cases, class_name, vector, hierarchy, iterations;
  std::uint64_t seed = 1;

  struct Spec {
    Command command;
    const char* name;
    const char* help;
  };
  const std::vector<Spec> specs = {
      {Command::kExtract, "extract", "Extract the class model and write it as interchange JSON"},
      {Command::kCloc, "cloc", "Count blank, comment and code lines per language"},
      {Command::kAnalyze, "analyze", "Compute metric suites (ck, mood, qmood, logiscope, complexity)"},
      {Command::kDetect, "detect", "Evaluate detection strategies over class and method metrics"},
      {Command::kKiviat, "kiviat", "Render Kiviat diagrams of the 13 per-class metrics"},
      {Command::kTreemap, "treemap", "Lay out a weighted hierarchy as a Voronoi treemap"},
      {Command::kStability, "stability", "System design instability between iterations"},
      {Command::kCorrelate, "correlate", "Spearman rank correlation between CSV columns"},
      {Command::kCompare, "compare", "Compare the quality-level distributions of two reports"},
  };
  std::map<CLI::App*, Command> commands;
  std::map<std::string, CLI::Option*> opts;
  for (const auto& s : specs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    commands[sub] = s.command;
    sub->add_option("inputs", inputs, "Input paths");
    sub->add_option("--input-mode", input_mode, "java | interchange (default: by file type)");
    sub->add_option("--format", format, "json | csv | svg");
    sub->add_option("--out", out_dir, "Output directory (default: standard output)");
    sub->add_option("--seed", seed, "Seed for randomised layout steps");
    sub->add_option("--thresholds", thresholds, "Threshold profile JSON");
    sub->add_option("--weights", weights, "QMOOD weight matrix JSON");
    sub->add_option("--rules", rules, "Detection rule JSON file (repeatable)")->allow_extra_args(false);
    sub->add_flag("--clpm-percent", cfg.clpm_percent, "Supplied CLPM values are percentages");
    sub->add_flag("--cbo-bidirectional", cfg.cbo_bidirectional, "CBO also counts incoming references");
    sub->add_flag("--noc-interfaces", cfg.noc_interfaces, "NOC counts implementors of interfaces");
    sub->add_option("--config", config_file, "Defaults file (overrides QUALIMETER_CONFIG)");
    switch (s.command) {
      case Command::kAnalyze:
        sub->add_option("--suite", suites, "Suite(s) to run, comma separated or repeated")->allow_extra_args(false);
        sub->add_option("--mi-inputs", mi, "Evaluate the Maintainability Index at HV,CC,LOCPM,CLPM");
        sub->add_option("--use-cases", use_cases, "Use-case/scenario JSON for cohesion metrics");
        break;
      case Command::kKiviat:
        sub->add_option("--class", class_name, "Qualified class name");
        sub->add_option("--vector", vector, "13 comma-separated metric values instead of a model");
        break;
      case Command::kTreemap:
        sub->add_option("--hierarchy", hierarchy, "Weighted hierarchy JSON instead of a model");
        sub->add_option("--resolution", cfg.resolution, "Samples per side (default 256)");
        sub->add_option("--max-iterations", cfg.max_iterations, "Iteration budget per sibling group");
        break;
      case Command::kStability:
        sub->add_option("--iterations", iterations, "Iteration snapshot JSON");
        break;
      case Command::kCorrelate:
        sub->add_option("--columns", columns, "Columns to correlate (default: all numeric)")->allow_extra_args(false);
        break;
      case Command::kCompare:
        sub->add_option("--names", names, "Display names of the two systems")->allow_extra_args(false);
        break;
      default:
        break;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report(err, "error", "usage", e.what());
    err << app.help();
    return kExitUsage;
  }

  CLI::App* chosen = nullptr;
  for (auto* sub : app.get_subcommands()) chosen = sub;
  cfg.command = commands.at(chosen);
  auto given = [&](const char* flag) {
    const auto* opt = chosen->get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  };

  try {
    Defaults defaults;
    std::string defaults_path = config_file;
    if (defaults_path.empty()) {
      if (const char* env = std::getenv("QUALIMETER_CONFIG"); env && *env) defaults_path = env;
    }
    if (!defaults_path.empty()) defaults = load_defaults(defaults_path);

    for (const auto& i : inputs) cfg.inputs.emplace_back(i);
    cfg.suites = split_list(suites);
    cfg.columns = split_list(columns);
    cfg.names = split_list(names);
    if (given("--thresholds")) cfg.thresholds = thresholds;
    else cfg.thresholds = defaults.thresholds;
    if (given("--weights")) cfg.weights = weights;
    else cfg.weights = defaults.weights;
    if (given("--out")) cfg.out_dir = out_dir;
    else cfg.out_dir = defaults.out;
    for (const auto& r : rules) cfg.rules.emplace_back(r);
    if (cfg.rules.empty()) cfg.rules = defaults.rules;
    if (given("--format")) cfg.format = parse_format(format);
    else if (defaults.format) cfg.format = parse_format(*defaults.format);
    if (given("--input-mode")) cfg.input_mode = parse_input_mode(input_mode);
    else if (defaults.input_mode) cfg.input_mode = parse_input_mode(*defaults.input_mode);
    cfg.seed = given("--seed") ? seed : defaults.seed.value_or(1);
    cfg.clpm_percent = cfg.clpm_percent || defaults.clpm_percent;
    cfg.cbo_bidirectional = cfg.cbo_bidirectional || defaults.cbo_bidirectional;
    cfg.noc_interfaces = cfg.noc_interfaces || defaults.noc_interfaces;
    if (given("--mi-inputs")) cfg.mi_inputs = mi;
    if (given("--use-cases")) cfg.use_cases = use_cases;
    if (given("--class")) cfg.class_name = class_name;
    if (given("--vector")) cfg.vector = vector;
    if (given("--hierarchy")) cfg.hierarchy = hierarchy;
    if (given("--iterations")) cfg.iterations = iterations;
  } catch (const UsageError& e) {
    report(err, "error", "usage", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    report(err, "error", "usage", e.what());
    return kExitUsage;
  }
  return run(cfg, out, err);
}

}  // namespace qualimeter
