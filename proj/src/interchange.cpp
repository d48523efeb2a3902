#include <fstream>
#include <sstream>

#include "json_reader.hpp"
#include "qualimeter/ingest.hpp"

namespace qualimeter {

using detail::json;
using Reader = detail::JsonReader;

namespace {

Visibility read_visibility(const Reader& r) {
  if (!r.has("visibility")) return Visibility::kPackage;
  const auto c = r.child("visibility");
  const auto token = c.as_string();
  auto v = parse_visibility(token);
  if (!v) throw SchemaError(c.path(), "unknown visibility '" + token + "'");
  return *v;
}

std::vector<MemberRef> read_refs(const Reader& r, const char* key) {
  std::vector<MemberRef> out;
  for (const auto& e : r.array(key)) {
    if (!e.node().is_array() || e.node().size() != 2 || !e.node()[0].is_string() || !e.node()[1].is_string()) {
      throw SchemaError(e.path(), "expected a [owner, member] pair of strings");
    }
    out.push_back({e.node()[0].get<std::string>(), e.node()[1].get<std::string>()});
  }
  return out;
}

MethodDecl read_method(const Reader& r) {
  r.require_object();
  MethodDecl m;
  m.name = r.string("name");
  m.param_types = r.strings("params");
  m.return_type = r.string("returns", "");
  m.visibility = read_visibility(r);
  m.is_static = r.boolean("static");
  m.is_abstract = r.boolean("abstract");
  m.is_constructor = r.boolean("constructor");
  m.overrides_super = r.boolean("overrides");
  m.decision_count = r.count("decisions");
  m.statement_count = r.count("statements");
  if (r.has("halstead")) {
    const auto h = r.child("halstead");
    h.require_object();
    m.halstead = {h.count("n1", true), h.count("n2", true), h.count("N1", true), h.count("N2", true)};
  }
  if (r.has("lines")) {
    const auto l = r.child("lines");
    l.require_object();
    m.lines = {l.count("code"), l.count("comment"), l.count("blank")};
  }
  m.accessed_fields = read_refs(r, "accesses");
  m.called_methods = read_refs(r, "calls");
  return m;
}

TypeDecl read_type(const Reader& r) {
  r.require_object();
  TypeDecl t;
  t.qualified_name = r.string("name");
  t.package_name = r.string("package", "");
  if (t.qualified_name.empty()) throw SchemaError(r.path() + ".name", "empty type name");
  if (t.qualified_name.find('.') == std::string::npos && !t.package_name.empty()) {
    t.qualified_name = t.package_name + "." + t.qualified_name;
  }
  if (r.has("kind")) {
    const auto c = r.child("kind");
    auto k = parse_type_kind(c.as_string());
    if (!k) throw SchemaError(c.path(), "unknown kind '" + c.as_string() + "'");
    t.kind = *k;
  }
  t.visibility = read_visibility(r);
  t.super_types = r.strings("extends");
  t.implemented_interfaces = r.strings("implements");
  for (const auto& f : r.array("fields")) {
    f.require_object();
    t.fields.push_back({f.string("name"), f.string("type", ""), read_visibility(f), f.boolean("static")});
  }
  for (const auto& m : r.array("methods")) t.methods.push_back(read_method(m));
  if (r.has("lines")) {
    const auto l = r.child("lines");
    l.require_object();
    t.total_lines = l.count("total");
    t.comment_lines = l.count("comment");
  }
  t.initializer_statements = r.count("initStatements");
  t.source_file = r.string("file", "");
  return t;
}

json write_refs(const std::vector<MemberRef>& refs) {
  json out = json::array();
  for (const auto& r : refs) out.push_back(json::array({r.owner, r.member}));
  return out;
}

}  // namespace

ClassModel load_interchange(std::string_view json_text) {
  const json doc = detail::parse_json_document(json_text);
  Reader root(doc, "");
  root.require_object();
  std::vector<TypeDecl> types;
  for (const auto& t : root.array("types", true)) types.push_back(read_type(t));
  std::vector<FileLineCount> files;
  for (const auto& f : root.array("files")) {
    f.require_object();
    files.push_back({f.string("path"), f.string("language", "unknown"),
                     {f.count("code"), f.count("comment"), f.count("blank")}});
  }
  std::set<std::string> externals;
  for (const auto& e : root.strings("externalTypes")) externals.insert(e);
  return ClassModel(std::move(types), std::move(externals), std::move(files));
}

ClassModel load_interchange_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw SchemaError(file.generic_string(), "cannot read file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_interchange(ss.str());
}

std::string save_interchange(const ClassModel& model) {
  json types = json::array();
  for (const auto& t : model.types()) {
    json fields = json::array();
    for (const auto& f : t.fields) {
      fields.push_back({{"name", f.name}, {"type", f.declared_type}, {"visibility", std::string(to_string(f.visibility))},
                        {"static", f.is_static}});
    }
    json methods = json::array();
    for (const auto& m : t.methods) {
      methods.push_back({{"name", m.name},
                         {"params", m.param_types},
                         {"returns", m.return_type},
                         {"visibility", std::string(to_string(m.visibility))},
                         {"static", m.is_static},
                         {"abstract", m.is_abstract},
                         {"constructor", m.is_constructor},
                         {"overrides", m.overrides_super},
                         {"decisions", m.decision_count},
                         {"statements", m.statement_count},
                         {"halstead",
                          {{"n1", m.halstead.distinct_operators},
                           {"n2", m.halstead.distinct_operands},
                           {"N1", m.halstead.total_operators},
                           {"N2", m.halstead.total_operands}}},
                         {"lines", {{"code", m.lines.code}, {"comment", m.lines.comment}, {"blank", m.lines.blank}}},
                         {"accesses", write_refs(m.accessed_fields)},
                         {"calls", write_refs(m.called_methods)}});
    }
    json entry = {{"name", t.qualified_name},
                  {"kind", std::string(to_string(t.kind))},
                  {"visibility", std::string(to_string(t.visibility))},
                  {"package", t.package_name},
                  {"extends", t.super_types},
                  {"implements", t.implemented_interfaces},
                  {"fields", fields},
                  {"methods", methods},
                  {"lines", {{"total", t.total_lines}, {"comment", t.comment_lines}}}};
    if (t.initializer_statements) entry["initStatements"] = t.initializer_statements;
    if (!t.source_file.empty()) entry["file"] = t.source_file;
    types.push_back(std::move(entry));
  }
  json files = json::array();
  for (const auto& f : model.files()) {
    files.push_back({{"path", f.path},
                     {"language", f.language},
                     {"code", f.lines.code},
                     {"comment", f.lines.comment},
                     {"blank", f.lines.blank}});
  }
  json doc = {{"types", types}, {"files", files}};
  if (!model.external_types().empty()) {
    doc["externalTypes"] = std::vector<std::string>(model.external_types().begin(), model.external_types().end());
  }
  return doc.dump(2) + "\n";
}

void save_interchange_file(const ClassModel& model, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.generic_string());
  out << save_interchange(model);
  if (!out) throw std::runtime_error("write failed for " + file.generic_string());
}

}  // namespace qualimeter
