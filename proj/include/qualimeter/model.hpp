#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qualimeter {

// Raised for caller mistakes against the analysis API (unknown entity names,
// malformed inputs). The CLI maps it to exit status 1.
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Visibility { kPublic, kProtected, kPackage, kPrivate };

std::string_view to_string(Visibility v);
std::optional<Visibility> parse_visibility(std::string_view token);

enum class TypeKind { kClass, kInterface };

std::string_view to_string(TypeKind k);
std::optional<TypeKind> parse_type_kind(std::string_view token);

// Owner name used for accesses and calls whose receiver type could not be
// determined.
inline constexpr std::string_view kUnresolved = "?";

struct LineCounts {
  std::size_t code = 0;
  std::size_t comment = 0;
  std::size_t blank = 0;

  std::size_t total() const { return code + comment + blank; }
  bool operator==(const LineCounts&) const = default;
};

struct HalsteadCounts {
  std::size_t distinct_operators = 0;  // n1
  std::size_t distinct_operands = 0;   // n2
  std::size_t total_operators = 0;     // N1
  std::size_t total_operands = 0;      // N2

  bool operator==(const HalsteadCounts&) const = default;
};

// (owner type, member name). Owner is a declared qualified name, an external
// type name, or kUnresolved.
struct MemberRef {
  std::string owner;
  std::string member;

  auto operator<=>(const MemberRef&) const = default;
};

struct FieldDecl {
  std::string name;
  std::string declared_type;
  Visibility visibility = Visibility::kPackage;
  bool is_static = false;

  bool operator==(const FieldDecl&) const = default;
};

struct MethodDecl {
  std::string name;
  std::vector<std::string> param_types;
  std::string return_type;
  Visibility visibility = Visibility::kPackage;
  bool is_static = false;
  bool is_abstract = false;
  bool is_constructor = false;
  bool overrides_super = false;  // explicit marker (@Override), may name an external base
  std::vector<MemberRef> accessed_fields;
  std::vector<MemberRef> called_methods;
  std::size_t decision_count = 0;
  std::size_t statement_count = 0;
  HalsteadCounts halstead;
  LineCounts lines;

  // name(T1,T2)
  std::string signature() const;
  bool operator==(const MethodDecl&) const = default;
};

struct TypeDecl {
  std::string qualified_name;
  TypeKind kind = TypeKind::kClass;
  Visibility visibility = Visibility::kPackage;
  std::string package_name;
  std::vector<std::string> super_types;  // extends
  std::vector<std::string> implemented_interfaces;
  std::vector<FieldDecl> fields;
  std::vector<MethodDecl> methods;
  std::string source_file;
  std::size_t total_lines = 0;
  std::size_t comment_lines = 0;
  std::size_t initializer_statements = 0;

  std::string simple_name() const;
  bool is_interface() const { return kind == TypeKind::kInterface; }
  const FieldDecl* find_field(std::string_view name) const;
  bool operator==(const TypeDecl&) const = default;
};

struct FileLineCount {
  std::string path;
  std::string language;
  LineCounts lines;

  bool operator==(const FileLineCount&) const = default;
};

struct Violation {
  std::string entity;
  std::string rule;

  std::string describe() const { return entity + ": " + rule; }
};

// Immutable census of declared types. Types are kept sorted by qualified
// name; duplicates are retained so validate() can report them.
class ClassModel {
 public:
  ClassModel() = default;
  ClassModel(std::vector<TypeDecl> types, std::set<std::string> external_types,
             std::vector<FileLineCount> files);

  const std::vector<TypeDecl>& types() const { return types_; }
  const std::set<std::string>& external_types() const { return external_types_; }
  const std::vector<FileLineCount>& files() const { return files_; }
  std::size_t type_count() const { return types_.size(); }

  const TypeDecl* find(std::string_view qualified_name) const;
  const TypeDecl& get(std::string_view qualified_name) const;  // throws AnalysisError

  // Resolves a type reference written inside `context` to a declared
  // qualified name: exact match, then same package, then nested in the
  // context, then a unique simple-name match. Generic arguments and array
  // suffixes are ignored.
  std::optional<std::string> resolve(const TypeDecl& context, std::string_view type_text) const;

  // Declared superclass along the class extends edge (never an interface).
  const TypeDecl* superclass(const TypeDecl& type) const;
  // Declared classes whose superclass is `type`, sorted by name.
  std::vector<const TypeDecl*> direct_subclasses(const TypeDecl& type) const;
  // Declared types listing `type` in implements (classes) or extends (interfaces).
  std::vector<const TypeDecl*> direct_implementors(const TypeDecl& type) const;

  bool operator==(const ClassModel& other) const;

 private:
  void build_index();

  std::vector<TypeDecl> types_;
  std::set<std::string> external_types_;
  std::vector<FileLineCount> files_;
  std::map<std::string, std::size_t, std::less<>> by_name_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_simple_name_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> subclasses_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> implementors_;
  std::map<std::string, std::string, std::less<>> superclass_;
};

struct InheritanceClosure {
  std::vector<std::string> ancestors;  // nearest first
  std::set<std::string> descendants;
};

std::vector<Violation> validate(const ClassModel& model);
InheritanceClosure inheritance_closure(const ClassModel& model, std::string_view type_name);

// Strips generic arguments, array suffixes and varargs from a type reference.
std::string erase_type_arguments(std::string_view type_text);
bool is_primitive_type(std::string_view type_name);

}  // namespace qualimeter
