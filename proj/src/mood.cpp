#include "qualimeter/mood.hpp"

#include <set>

namespace qualimeter {

namespace {

std::size_t same_package_others(const ClassModel& model, const TypeDecl& owner) {
  std::size_t n = 0;
  for (const auto& t : model.types()) {
    if (&t != &owner && t.package_name == owner.package_name) ++n;
  }
  return n;
}

std::optional<double> ratio(double num, double den) {
  if (den <= 0.0) return std::nullopt;
  return num / den;
}

bool is_new_overridable(const ClassModel& model, const TypeDecl& type, const MethodDecl& m) {
  return !m.is_constructor && !m.is_static && m.visibility != Visibility::kPrivate && !overrides(model, type, m);
}

}  // namespace

double visibility_fraction(const ClassModel& model, const TypeDecl& owner, Visibility v) {
  const auto tc = model.type_count();
  if (tc < 2) return 0.0;
  const double others = static_cast<double>(tc - 1);
  switch (v) {
    case Visibility::kPrivate:
      return 0.0;
    case Visibility::kPublic:
      return 1.0;
    case Visibility::kPackage:
      return static_cast<double>(same_package_others(model, owner)) / others;
    case Visibility::kProtected: {
      std::set<const TypeDecl*> visible;
      for (const auto& t : model.types()) {
        if (&t != &owner && t.package_name == owner.package_name) visible.insert(&t);
      }
      for (const auto* d : all_descendants(model, owner)) visible.insert(d);
      visible.erase(&owner);
      return static_cast<double>(visible.size()) / others;
    }
  }
  return 0.0;
}

std::optional<double> ahf(const ClassModel& model) {
  double hidden = 0.0, defined = 0.0;
  for (const auto& t : model.types()) {
    for (const auto& f : t.fields) {
      hidden += 1.0 - visibility_fraction(model, t, f.visibility);
      defined += 1.0;
    }
  }
  return ratio(hidden, defined);
}

std::optional<double> mhf(const ClassModel& model) {
  double hidden = 0.0, defined = 0.0;
  for (const auto& t : model.types()) {
    for (const auto& m : t.methods) {
      if (m.is_constructor) continue;
      hidden += 1.0 - visibility_fraction(model, t, m.visibility);
      defined += 1.0;
    }
  }
  return ratio(hidden, defined);
}

std::optional<double> aif(const ClassModel& model) {
  double inherited = 0.0, available = 0.0;
  for (const auto& t : model.types()) {
    const auto n = static_cast<double>(inherited_fields(model, t).size());
    inherited += n;
    available += n + static_cast<double>(t.fields.size());
  }
  return ratio(inherited, available);
}

std::optional<double> mif(const ClassModel& model) {
  double inherited = 0.0, available = 0.0;
  for (const auto& t : model.types()) {
    const auto n = static_cast<double>(inherited_methods(model, t).size());
    std::size_t defined = 0;
    for (const auto& m : t.methods) defined += m.is_constructor ? 0 : 1;
    inherited += n;
    available += n + static_cast<double>(defined);
  }
  return ratio(inherited, available);
}

std::optional<double> cf(const ClassModel& model, const CouplingOptions& options) {
  const auto tc = model.type_count();
  if (tc < 2) return std::nullopt;
  CouplingOptions declared_only = options;
  declared_only.include_external = false;
  ReferenceGraph graph(model, declared_only);
  const double pairs = static_cast<double>(tc) * static_cast<double>(tc) - static_cast<double>(tc);
  return static_cast<double>(graph.declared_edge_count()) / pairs;
}

std::optional<double> pf(const ClassModel& model) {
  double overriding = 0.0, potential = 0.0;
  for (const auto& t : model.types()) {
    std::size_t fresh = 0;
    for (const auto& m : t.methods) {
      if (overrides(model, t, m)) {
        overriding += 1.0;
      } else if (is_new_overridable(model, t, m)) {
        ++fresh;
      }
    }
    potential += static_cast<double>(fresh) * static_cast<double>(all_descendants(model, t).size());
  }
  return ratio(overriding, potential);
}

MoodMetrics mood_suite(const ClassModel& model, const CouplingOptions& options) {
  return {mhf(model), ahf(model), mif(model), aif(model), cf(model, options), pf(model)};
}

}  // namespace qualimeter
