#include "qualimeter/ck.hpp"

#include <algorithm>
#include <set>

#include "qualimeter/complexity.hpp"

namespace qualimeter {

std::vector<const MethodDecl*> counted_methods(const TypeDecl& type, const CkOptions& options) {
  std::vector<const MethodDecl*> out;
  for (const auto& m : type.methods) {
    if (!m.is_constructor || options.nom_constructors) out.push_back(&m);
  }
  return out;
}

std::vector<const MethodDecl*> cohesion_methods(const TypeDecl& type) {
  std::vector<const MethodDecl*> out;
  for (const auto& m : type.methods) {
    if (!m.is_constructor && !m.is_static) out.push_back(&m);
  }
  return out;
}

std::vector<std::string> own_instance_fields_accessed(const TypeDecl& type, const MethodDecl& method) {
  std::set<std::string> names;
  for (const auto& a : method.accessed_fields) {
    if (a.owner != type.qualified_name) continue;
    const auto* f = type.find_field(a.member);
    if (f && !f->is_static) names.insert(a.member);
  }
  return {names.begin(), names.end()};
}

std::size_t wmc(const TypeDecl& type, const CkOptions& options) {
  std::size_t sum = 0;
  for (const auto* m : counted_methods(type, options)) sum += cyclomatic(*m);
  return sum;
}

std::size_t dit(const ClassModel& model, const TypeDecl& type) { return superclass_chain(model, type).size(); }

std::size_t noc(const ClassModel& model, const TypeDecl& type, const CkOptions& options) {
  if (type.is_interface()) return options.noc_interfaces ? model.direct_implementors(type).size() : 0;
  return model.direct_subclasses(type).size();
}

std::size_t cbo(const ClassModel& model, const TypeDecl& type, const CkOptions& options) {
  auto coupled = outgoing_references(model, type, options.coupling());
  if (options.cbo_bidirectional) {
    for (const auto& other : model.types()) {
      if (other.qualified_name == type.qualified_name) continue;
      if (outgoing_references(model, other, options.coupling()).count(type.qualified_name)) {
        coupled.insert(other.qualified_name);
      }
    }
  }
  return coupled.size();
}

std::size_t rfc(const TypeDecl& type, const CkOptions& options) {
  const auto methods = counted_methods(type, options);
  std::set<std::string> own_names;
  for (const auto& m : type.methods) own_names.insert(m.name);
  std::set<MemberRef> called;
  for (const auto& m : type.methods) {
    for (const auto& c : m.called_methods) {
      if (c.owner == type.qualified_name && own_names.count(c.member)) continue;
      called.insert(c);
    }
  }
  return methods.size() + called.size();
}

LcomResult lcom(const TypeDecl& type) {
  const auto methods = cohesion_methods(type);
  std::vector<std::set<std::string>> used;
  used.reserve(methods.size());
  for (const auto* m : methods) {
    auto names = own_instance_fields_accessed(type, *m);
    used.emplace_back(names.begin(), names.end());
  }
  LcomResult r;
  for (std::size_t i = 0; i < used.size(); ++i) {
    for (std::size_t j = i + 1; j < used.size(); ++j) {
      const bool share = std::any_of(used[i].begin(), used[i].end(),
                                     [&](const std::string& f) { return used[j].count(f) > 0; });
      share ? ++r.pairs.q : ++r.pairs.p;
    }
  }
  r.value = r.pairs.p > r.pairs.q ? r.pairs.p - r.pairs.q : 0;
  return r;
}

std::size_t nom(const TypeDecl& type, const CkOptions& options) { return counted_methods(type, options).size(); }

std::vector<CkMetrics> ck_suite(const ClassModel& model, const CkOptions& options) {
  ReferenceGraph graph(model, options.coupling());
  std::vector<CkMetrics> rows;
  rows.reserve(model.type_count());
  for (const auto& t : model.types()) {
    CkMetrics row;
    row.type_name = t.qualified_name;
    row.wmc = wmc(t, options);
    row.dit = dit(model, t);
    row.noc = noc(model, t, options);
    auto coupled = graph.outgoing(t.qualified_name);
    if (options.cbo_bidirectional) {
      const auto& in = graph.incoming(t.qualified_name);
      coupled.insert(in.begin(), in.end());
    }
    row.cbo = coupled.size();
    row.rfc = rfc(t, options);
    row.lcom = lcom(t);
    row.nom = nom(t, options);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qualimeter
