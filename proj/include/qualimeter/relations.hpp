#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "qualimeter/model.hpp"

namespace qualimeter {

// Which reference kinds count as a use of another class.
struct CouplingOptions {
  bool include_external = false;     // count undeclared (library) types by name
  bool include_inheritance = false;  // count extends/implements edges
};

// Types referenced by field types, parameter and return types, call
// receivers and field-access owners. Self references are dropped.
std::set<std::string> outgoing_references(const ClassModel& model, const TypeDecl& type,
                                          const CouplingOptions& options = {});

// Outgoing and incoming reference sets for every declared type.
class ReferenceGraph {
 public:
  ReferenceGraph(const ClassModel& model, const CouplingOptions& options = {});

  const std::set<std::string>& outgoing(const std::string& type) const;
  const std::set<std::string>& incoming(const std::string& type) const;
  // Number of (client, supplier) pairs between declared types.
  std::size_t declared_edge_count() const;

 private:
  std::map<std::string, std::set<std::string>> outgoing_;
  std::map<std::string, std::set<std::string>> incoming_;
  std::size_t declared_edges_ = 0;
};

struct InheritedMethod {
  const TypeDecl* owner;
  const MethodDecl* method;
};

struct InheritedField {
  const TypeDecl* owner;
  const FieldDecl* field;
};

// A method overrides when a declared superclass ancestor has a non-private,
// non-static, non-constructor method with the same signature.
bool overrides(const ClassModel& model, const TypeDecl& type, const MethodDecl& method);
// Some declared descendant overrides `method`.
bool is_overridden(const ClassModel& model, const TypeDecl& type, const MethodDecl& method);

// Non-private, non-constructor methods reachable through the superclass
// chain that `type` does not redeclare. Nearest declaration wins.
std::vector<InheritedMethod> inherited_methods(const ClassModel& model, const TypeDecl& type);
// Non-private ancestor fields not hidden by a nearer declaration of the same name.
std::vector<InheritedField> inherited_fields(const ClassModel& model, const TypeDecl& type);

// Superclass chain, nearest first, stopping at the first undeclared or
// repeated type.
std::vector<const TypeDecl*> superclass_chain(const ClassModel& model, const TypeDecl& type);
// All declared subclasses, transitively.
std::vector<const TypeDecl*> all_descendants(const ClassModel& model, const TypeDecl& type);

}  // namespace qualimeter
