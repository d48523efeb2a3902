#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qualimeter/model.hpp"
#include "qualimeter/relations.hpp"

namespace qualimeter {

struct CkOptions {
  bool cbo_bidirectional = false;  // add classes that reference this one
  bool cbo_inheritance = false;    // count extends/implements edges
  bool cbo_external = false;       // count undeclared library types
  bool noc_interfaces = false;     // interfaces count their implementors as children
  bool nom_constructors = false;   // constructors count as methods (NOM, WMC, RFC)

  CouplingOptions coupling() const { return {cbo_external, cbo_inheritance}; }
};

// Method pairs with (q) and without (p) a shared instance field.
struct CohesionPairs {
  std::size_t p = 0;
  std::size_t q = 0;
};

struct LcomResult {
  std::size_t value = 0;
  CohesionPairs pairs;
};

struct CkMetrics {
  std::string type_name;
  std::size_t wmc = 0;
  std::size_t dit = 0;
  std::size_t noc = 0;
  std::size_t cbo = 0;
  std::size_t rfc = 0;
  LcomResult lcom;
  std::size_t nom = 0;
};

// Methods that count as "the class's methods" under the constructor flag.
std::vector<const MethodDecl*> counted_methods(const TypeDecl& type, const CkOptions& options = {});
// Non-static, non-constructor methods: the population LCOM and TCC look at.
std::vector<const MethodDecl*> cohesion_methods(const TypeDecl& type);
// Own instance fields touched by `method`.
std::vector<std::string> own_instance_fields_accessed(const TypeDecl& type, const MethodDecl& method);

std::size_t wmc(const TypeDecl& type, const CkOptions& options = {});
std::size_t dit(const ClassModel& model, const TypeDecl& type);
std::size_t noc(const ClassModel& model, const TypeDecl& type, const CkOptions& options = {});
std::size_t cbo(const ClassModel& model, const TypeDecl& type, const CkOptions& options = {});
std::size_t rfc(const TypeDecl& type, const CkOptions& options = {});
LcomResult lcom(const TypeDecl& type);
std::size_t nom(const TypeDecl& type, const CkOptions& options = {});

// Whole-suite evaluation, one row per declared type in model order.
std::vector<CkMetrics> ck_suite(const ClassModel& model, const CkOptions& options = {});

}  // namespace qualimeter
