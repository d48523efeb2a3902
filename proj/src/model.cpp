#include "qualimeter/model.hpp"

#include <algorithm>
#include <array>
#include <tuple>

namespace qualimeter {

namespace {

constexpr std::array<std::pair<Visibility, std::string_view>, 4> kVisibilityNames{{
    {Visibility::kPublic, "public"},
    {Visibility::kProtected, "protected"},
    {Visibility::kPackage, "package"},
    {Visibility::kPrivate, "private"},
}};

std::string_view simple_of(std::string_view qualified) {
  const auto dot = qualified.rfind('.');
  return dot == std::string_view::npos ? qualified : qualified.substr(dot + 1);
}

}  // namespace

std::string_view to_string(Visibility v) {
  for (const auto& [value, name] : kVisibilityNames) {
    if (value == v) return name;
  }
  return "package";
}

std::optional<Visibility> parse_visibility(std::string_view token) {
  for (const auto& [value, name] : kVisibilityNames) {
    if (name == token) return value;
  }
  return std::nullopt;
}

std::string_view to_string(TypeKind k) { return k == TypeKind::kInterface ? "interface" : "class"; }

std::optional<TypeKind> parse_type_kind(std::string_view token) {
  if (token == "class") return TypeKind::kClass;
  if (token == "interface") return TypeKind::kInterface;
  return std::nullopt;
}

std::string MethodDecl::signature() const {
  std::string out = name + "(";
  for (std::size_t i = 0; i < param_types.size(); ++i) {
    if (i) out += ',';
    out += param_types[i];
  }
  out += ')';
  return out;
}

std::string TypeDecl::simple_name() const { return std::string(simple_of(qualified_name)); }

const FieldDecl* TypeDecl::find_field(std::string_view name) const {
  for (const auto& f : fields) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

std::string erase_type_arguments(std::string_view type_text) {
  std::string out;
  int depth = 0;
  for (char c : type_text) {
    if (c == '<') {
      ++depth;
    } else if (c == '>') {
      if (depth > 0) --depth;
    } else if (depth == 0 && c != '[' && c != ']' && c != ' ' && c != '\t') {
      out += c;
    }
  }
  while (out.size() >= 3 && out.compare(out.size() - 3, 3, "...") == 0) out.resize(out.size() - 3);
  return out;
}

bool is_primitive_type(std::string_view type_name) {
  static constexpr std::array<std::string_view, 9> kPrimitives{
      "boolean", "byte", "char", "short", "int", "long", "float", "double", "void"};
  return std::find(kPrimitives.begin(), kPrimitives.end(), type_name) != kPrimitives.end();
}

ClassModel::ClassModel(std::vector<TypeDecl> types, std::set<std::string> external_types,
                       std::vector<FileLineCount> files)
    : types_(std::move(types)), external_types_(std::move(external_types)), files_(std::move(files)) {
  std::stable_sort(types_.begin(), types_.end(),
                   [](const TypeDecl& a, const TypeDecl& b) { return a.qualified_name < b.qualified_name; });
  std::sort(files_.begin(), files_.end(),
            [](const FileLineCount& a, const FileLineCount& b) { return a.path < b.path; });
  build_index();
}

void ClassModel::build_index() {
  for (std::size_t i = 0; i < types_.size(); ++i) {
    by_name_.try_emplace(types_[i].qualified_name, i);
    by_simple_name_[std::string(simple_of(types_[i].qualified_name))].push_back(i);
  }
  for (std::size_t i = 0; i < types_.size(); ++i) {
    const auto& t = types_[i];
    if (t.is_interface()) {
      for (const auto& s : t.super_types) {
        if (auto r = resolve(t, s)) implementors_[*r].push_back(i);
      }
      continue;
    }
    if (!t.super_types.empty()) {
      if (auto r = resolve(t, t.super_types.front())) {
        const auto* parent = find(*r);
        if (parent && !parent->is_interface() && *r != t.qualified_name) {
          superclass_[t.qualified_name] = *r;
          subclasses_[*r].push_back(i);
        }
      }
    }
    for (const auto& iface : t.implemented_interfaces) {
      if (auto r = resolve(t, iface)) implementors_[*r].push_back(i);
    }
  }
}

const TypeDecl* ClassModel::find(std::string_view qualified_name) const {
  auto it = by_name_.find(qualified_name);
  return it == by_name_.end() ? nullptr : &types_[it->second];
}

const TypeDecl& ClassModel::get(std::string_view qualified_name) const {
  if (const auto* t = find(qualified_name)) return *t;
  throw AnalysisError("unknown type '" + std::string(qualified_name) + "'");
}

std::optional<std::string> ClassModel::resolve(const TypeDecl& context, std::string_view type_text) const {
  const std::string name = erase_type_arguments(type_text);
  if (name.empty() || is_primitive_type(name)) return std::nullopt;
  if (find(name)) return name;
  if (!context.package_name.empty()) {
    std::string candidate = context.package_name + "." + name;
    if (find(candidate)) return candidate;
  }
  {
    std::string nested = context.qualified_name + "." + name;
    if (find(nested)) return nested;
  }
  if (name.find('.') == std::string::npos) {
    auto it = by_simple_name_.find(name);
    if (it != by_simple_name_.end() && it->second.size() == 1) return types_[it->second.front()].qualified_name;
  }
  return std::nullopt;
}

const TypeDecl* ClassModel::superclass(const TypeDecl& type) const {
  auto it = superclass_.find(type.qualified_name);
  return it == superclass_.end() ? nullptr : find(it->second);
}

std::vector<const TypeDecl*> ClassModel::direct_subclasses(const TypeDecl& type) const {
  std::vector<const TypeDecl*> out;
  auto it = subclasses_.find(type.qualified_name);
  if (it != subclasses_.end()) {
    for (auto idx : it->second) out.push_back(&types_[idx]);
  }
  return out;
}

std::vector<const TypeDecl*> ClassModel::direct_implementors(const TypeDecl& type) const {
  std::vector<const TypeDecl*> out;
  auto it = implementors_.find(type.qualified_name);
  if (it != implementors_.end()) {
    for (auto idx : it->second) out.push_back(&types_[idx]);
  }
  return out;
}

bool ClassModel::operator==(const ClassModel& other) const {
  return types_ == other.types_ && external_types_ == other.external_types_ && files_ == other.files_;
}

std::vector<Violation> validate(const ClassModel& model) {
  std::vector<Violation> out;
  const auto& types = model.types();

  for (std::size_t i = 1; i < types.size(); ++i) {
    if (types[i].qualified_name == types[i - 1].qualified_name &&
        (i < 2 || types[i - 2].qualified_name != types[i].qualified_name)) {
      out.push_back({types[i].qualified_name, "duplicate type"});
    }
  }

  for (const auto& t : types) {
    if (t.qualified_name.empty()) out.push_back({"<anonymous>", "empty type name"});
    if (!t.is_interface() && t.super_types.size() > 1) {
      out.push_back({t.qualified_name, "class has more than one superclass"});
    }

    std::set<std::string_view> field_names;
    for (const auto& f : t.fields) {
      if (f.name.empty()) {
        out.push_back({t.qualified_name, "field with empty name"});
      } else if (!field_names.insert(f.name).second) {
        out.push_back({t.qualified_name + "." + f.name, "duplicate field"});
      }
    }

    std::set<std::string> signatures;
    for (const auto& m : t.methods) {
      const auto sig = m.signature();
      if (!signatures.insert(sig).second) out.push_back({t.qualified_name + "." + sig, "duplicate method signature"});
      const auto& h = m.halstead;
      if ((h.distinct_operators > 0 && h.total_operators < h.distinct_operators) ||
          (h.distinct_operands > 0 && h.total_operands < h.distinct_operands)) {
        out.push_back({t.qualified_name + "." + sig, "halstead totals below distinct counts"});
      }
      auto check_owner = [&](const MemberRef& ref, std::string_view what) {
        if (ref.owner == kUnresolved || model.find(ref.owner) || model.external_types().count(ref.owner)) return;
        out.push_back({t.qualified_name + "." + sig, std::string(what) + " owner '" + ref.owner + "' is not declared"});
      };
      for (const auto& a : m.accessed_fields) check_owner(a, "field access");
      for (const auto& c : m.called_methods) check_owner(c, "call");
    }
  }

  // Cycle detection over every declared extends edge (classes and interfaces).
  std::map<std::string, std::vector<std::string>> edges;
  for (const auto& t : types) {
    for (const auto& s : t.super_types) {
      if (auto r = model.resolve(t, s)) edges[t.qualified_name].push_back(*r);
    }
  }
  enum class Mark { kNone, kActive, kDone };
  std::map<std::string, Mark> mark;
  std::set<std::string> reported;
  std::vector<std::string> stack;
  auto visit = [&](auto&& self, const std::string& node) -> void {
    mark[node] = Mark::kActive;
    stack.push_back(node);
    for (const auto& next : edges[node]) {
      auto m = mark[next];
      if (m == Mark::kActive) {
        auto begin = std::find(stack.begin(), stack.end(), next);
        std::string smallest = *std::min_element(begin, stack.end());
        if (reported.insert(smallest).second) out.push_back({smallest, "inheritance cycle"});
      } else if (m == Mark::kNone) {
        self(self, next);
      }
    }
    stack.pop_back();
    mark[node] = Mark::kDone;
  };
  for (const auto& t : types) {
    if (mark[t.qualified_name] == Mark::kNone) visit(visit, t.qualified_name);
  }

  std::sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    return std::tie(a.entity, a.rule) < std::tie(b.entity, b.rule);
  });
  return out;
}

InheritanceClosure inheritance_closure(const ClassModel& model, std::string_view type_name) {
  const auto& type = model.get(type_name);
  InheritanceClosure out;
  std::set<std::string> seen{type.qualified_name};
  for (const auto* p = model.superclass(type); p && seen.insert(p->qualified_name).second; p = model.superclass(*p)) {
    out.ancestors.push_back(p->qualified_name);
  }
  std::vector<const TypeDecl*> frontier{&type};
  while (!frontier.empty()) {
    const auto* cur = frontier.back();
    frontier.pop_back();
    for (const auto* child : model.direct_subclasses(*cur)) {
      if (child->qualified_name != type.qualified_name && out.descendants.insert(child->qualified_name).second) {
        frontier.push_back(child);
      }
    }
  }
  return out;
}

}  // namespace qualimeter
