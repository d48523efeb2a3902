#include "qualimeter/relations.hpp"

#include <algorithm>

namespace qualimeter {

namespace {

const std::set<std::string> kEmpty;

bool is_overridable(const MethodDecl& m) {
  return !m.is_constructor && !m.is_static && m.visibility != Visibility::kPrivate;
}

}  // namespace

std::set<std::string> outgoing_references(const ClassModel& model, const TypeDecl& type,
                                          const CouplingOptions& options) {
  std::set<std::string> out;
  auto add_type_text = [&](const std::string& text) {
    if (auto r = model.resolve(type, text)) {
      out.insert(*r);
    } else if (options.include_external) {
      auto name = erase_type_arguments(text);
      if (!name.empty() && !is_primitive_type(name)) out.insert(name);
    }
  };
  auto add_owner = [&](const std::string& owner) {
    if (owner == kUnresolved) return;
    if (model.find(owner)) {
      out.insert(owner);
    } else if (options.include_external) {
      out.insert(owner);
    }
  };

  for (const auto& f : type.fields) add_type_text(f.declared_type);
  for (const auto& m : type.methods) {
    for (const auto& p : m.param_types) add_type_text(p);
    if (!m.is_constructor) add_type_text(m.return_type);
    for (const auto& a : m.accessed_fields) add_owner(a.owner);
    for (const auto& c : m.called_methods) add_owner(c.owner);
  }
  if (options.include_inheritance) {
    for (const auto& s : type.super_types) add_type_text(s);
    for (const auto& i : type.implemented_interfaces) add_type_text(i);
  }
  out.erase(type.qualified_name);
  return out;
}

ReferenceGraph::ReferenceGraph(const ClassModel& model, const CouplingOptions& options) {
  for (const auto& t : model.types()) {
    auto refs = outgoing_references(model, t, options);
    for (const auto& r : refs) {
      incoming_[r].insert(t.qualified_name);
      if (model.find(r)) ++declared_edges_;
    }
    outgoing_[t.qualified_name].insert(refs.begin(), refs.end());
  }
}

const std::set<std::string>& ReferenceGraph::outgoing(const std::string& type) const {
  auto it = outgoing_.find(type);
  return it == outgoing_.end() ? kEmpty : it->second;
}

const std::set<std::string>& ReferenceGraph::incoming(const std::string& type) const {
  auto it = incoming_.find(type);
  return it == incoming_.end() ? kEmpty : it->second;
}

std::size_t ReferenceGraph::declared_edge_count() const { return declared_edges_; }

std::vector<const TypeDecl*> superclass_chain(const ClassModel& model, const TypeDecl& type) {
  std::vector<const TypeDecl*> chain;
  std::set<std::string_view> seen{type.qualified_name};
  for (const auto* p = model.superclass(type); p && seen.insert(p->qualified_name).second; p = model.superclass(*p)) {
    chain.push_back(p);
  }
  return chain;
}

std::vector<const TypeDecl*> all_descendants(const ClassModel& model, const TypeDecl& type) {
  std::vector<const TypeDecl*> out;
  std::set<std::string_view> seen{type.qualified_name};
  std::vector<const TypeDecl*> frontier{&type};
  while (!frontier.empty()) {
    const auto* cur = frontier.back();
    frontier.pop_back();
    for (const auto* child : model.direct_subclasses(*cur)) {
      if (seen.insert(child->qualified_name).second) {
        out.push_back(child);
        frontier.push_back(child);
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const TypeDecl* a, const TypeDecl* b) { return a->qualified_name < b->qualified_name; });
  return out;
}

bool overrides(const ClassModel& model, const TypeDecl& type, const MethodDecl& method) {
  if (method.is_constructor || method.is_static) return false;
  const auto sig = method.signature();
  for (const auto* ancestor : superclass_chain(model, type)) {
    for (const auto& m : ancestor->methods) {
      if (is_overridable(m) && m.signature() == sig) return true;
    }
  }
  return false;
}

bool is_overridden(const ClassModel& model, const TypeDecl& type, const MethodDecl& method) {
  if (!is_overridable(method)) return false;
  const auto sig = method.signature();
  for (const auto* d : all_descendants(model, type)) {
    for (const auto& m : d->methods) {
      if (!m.is_constructor && !m.is_static && m.signature() == sig) return true;
    }
  }
  return false;
}

std::vector<InheritedMethod> inherited_methods(const ClassModel& model, const TypeDecl& type) {
  std::set<std::string> taken;
  for (const auto& m : type.methods) taken.insert(m.signature());
  std::vector<InheritedMethod> out;
  for (const auto* ancestor : superclass_chain(model, type)) {
    for (const auto& m : ancestor->methods) {
      if (m.is_constructor || m.visibility == Visibility::kPrivate) continue;
      if (taken.insert(m.signature()).second) out.push_back({ancestor, &m});
    }
  }
  return out;
}

std::vector<InheritedField> inherited_fields(const ClassModel& model, const TypeDecl& type) {
  std::set<std::string> taken;
  for (const auto& f : type.fields) taken.insert(f.name);
  std::vector<InheritedField> out;
  for (const auto* ancestor : superclass_chain(model, type)) {
    for (const auto& f : ancestor->fields) {
      if (f.visibility == Visibility::kPrivate) {
        taken.insert(f.name);
        continue;
      }
      if (taken.insert(f.name).second) out.push_back({ancestor, &f});
    }
  }
  return out;
}

}  // namespace qualimeter
