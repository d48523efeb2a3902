#include "qualimeter/qmood.hpp"

#include <algorithm>
#include <set>

#include "qualimeter/ck.hpp"
#include "qualimeter/relations.hpp"

namespace qualimeter {

namespace {

struct PropertyNames {
  DesignProperty property;
  std::string_view name;
  std::string_view acronym;
};

constexpr std::array<PropertyNames, kDesignPropertyCount> kProperties{{
    {DesignProperty::kDesignSize, "designSize", "DSC"},
    {DesignProperty::kHierarchies, "hierarchies", "NOH"},
    {DesignProperty::kAbstraction, "abstraction", "ANA"},
    {DesignProperty::kEncapsulation, "encapsulation", "DAM"},
    {DesignProperty::kCoupling, "coupling", "DCC"},
    {DesignProperty::kCohesion, "cohesion", "CAMC"},
    {DesignProperty::kComposition, "composition", "MOA"},
    {DesignProperty::kInheritance, "inheritance", "MFA"},
    {DesignProperty::kPolymorphism, "polymorphism", "NOP"},
    {DesignProperty::kMessaging, "messaging", "CIS"},
    {DesignProperty::kComplexity, "complexity", "NOM"},
}};

constexpr std::array<std::string_view, kQualityAttributeCount> kAttributes{
    "reusability", "flexibility", "understandability", "functionality", "extendibility", "effectiveness"};

double mean(double sum, std::size_t n) { return n == 0 ? 0.0 : sum / static_cast<double>(n); }

}  // namespace

std::string_view property_name(DesignProperty p) { return kProperties[static_cast<std::size_t>(p)].name; }
std::string_view property_acronym(DesignProperty p) { return kProperties[static_cast<std::size_t>(p)].acronym; }
std::string_view attribute_name(QualityAttribute a) { return kAttributes[static_cast<std::size_t>(a)]; }

std::optional<DesignProperty> parse_property(std::string_view token) {
  for (const auto& p : kProperties) {
    if (p.name == token || p.acronym == token) return p.property;
  }
  if (token == "MOA" || token == "FMOA") return DesignProperty::kComposition;
  if (token == "CAM") return DesignProperty::kCohesion;
  return std::nullopt;
}

std::optional<QualityAttribute> parse_attribute(std::string_view token) {
  for (std::size_t i = 0; i < kAttributes.size(); ++i) {
    if (kAttributes[i] == token) return static_cast<QualityAttribute>(i);
  }
  return std::nullopt;
}

QmoodWeights QmoodWeights::published() {
  using A = QualityAttribute;
  using P = DesignProperty;
  QmoodWeights w;
  w.at(A::kReusability, P::kCoupling) = 0.25;
  w.at(A::kReusability, P::kCohesion) = 0.25;
  w.at(A::kReusability, P::kMessaging) = 0.5;
  w.at(A::kReusability, P::kDesignSize) = 0.5;

  w.at(A::kFlexibility, P::kEncapsulation) = 0.25;
  w.at(A::kFlexibility, P::kCoupling) = -0.25;
  w.at(A::kFlexibility, P::kComposition) = 0.5;
  w.at(A::kFlexibility, P::kPolymorphism) = 0.5;

  w.at(A::kUnderstandability, P::kAbstraction) = 0.33;
  w.at(A::kUnderstandability, P::kEncapsulation) = 0.33;
  w.at(A::kUnderstandability, P::kCoupling) = -0.33;
  w.at(A::kUnderstandability, P::kCohesion) = 0.33;
  w.at(A::kUnderstandability, P::kPolymorphism) = -0.33;
  w.at(A::kUnderstandability, P::kComplexity) = -0.33;
  w.at(A::kUnderstandability, P::kDesignSize) = -0.33;

  w.at(A::kFunctionality, P::kCohesion) = 0.12;
  w.at(A::kFunctionality, P::kPolymorphism) = 0.22;
  w.at(A::kFunctionality, P::kMessaging) = 0.22;
  w.at(A::kFunctionality, P::kDesignSize) = 0.22;
  w.at(A::kFunctionality, P::kHierarchies) = 0.22;

  w.at(A::kExtendibility, P::kAbstraction) = 0.5;
  w.at(A::kExtendibility, P::kCoupling) = -0.5;
  w.at(A::kExtendibility, P::kInheritance) = 0.5;
  w.at(A::kExtendibility, P::kPolymorphism) = 0.5;

  w.at(A::kEffectiveness, P::kAbstraction) = 0.2;
  w.at(A::kEffectiveness, P::kEncapsulation) = 0.2;
  w.at(A::kEffectiveness, P::kComposition) = 0.2;
  w.at(A::kEffectiveness, P::kInheritance) = 0.2;
  w.at(A::kEffectiveness, P::kPolymorphism) = 0.2;
  return w;
}

QmoodProperties design_properties(const ClassModel& model) {
  if (model.type_count() == 0) throw AnalysisError("QMOOD: design has no classes");
  using P = DesignProperty;
  const auto n = model.type_count();
  const auto ck = ck_suite(model);

  QmoodProperties props;
  props[P::kDesignSize] = static_cast<double>(n);

  double dit_sum = 0, cbo_sum = 0, moa_sum = 0, mfa_sum = 0, nop_sum = 0, cis_sum = 0, nom_sum = 0;
  double dam_sum = 0, cam_sum = 0;
  std::size_t dam_n = 0, cam_n = 0, roots_with_children = 0;

  for (std::size_t i = 0; i < n; ++i) {
    const auto& t = model.types()[i];
    dit_sum += static_cast<double>(ck[i].dit);
    cbo_sum += static_cast<double>(ck[i].cbo);
    nom_sum += static_cast<double>(ck[i].nom);

    const bool is_root = model.superclass(t) == nullptr;
    if (!t.is_interface() && is_root && !model.direct_subclasses(t).empty()) ++roots_with_children;

    if (!t.fields.empty()) {
      std::size_t hidden = 0;
      for (const auto& f : t.fields) hidden += f.visibility != Visibility::kPublic ? 1 : 0;
      dam_sum += static_cast<double>(hidden) / static_cast<double>(t.fields.size());
      ++dam_n;
    }

    std::size_t composed = 0;
    for (const auto& f : t.fields) {
      if (auto r = model.resolve(t, f.declared_type); r && *r != t.qualified_name) ++composed;
    }
    moa_sum += static_cast<double>(composed);

    const auto methods = counted_methods(t);
    if (!is_root) {
      const auto inherited = inherited_methods(model, t).size();
      const auto total = inherited + methods.size();
      if (total > 0) mfa_sum += static_cast<double>(inherited) / static_cast<double>(total);
    }

    std::size_t polymorphic = 0, public_methods = 0;
    for (const auto* m : methods) {
      if (overrides(model, t, *m) || is_overridden(model, t, *m)) ++polymorphic;
      if (m->visibility == Visibility::kPublic) ++public_methods;
    }
    nop_sum += static_cast<double>(polymorphic);
    cis_sum += static_cast<double>(public_methods);

    std::set<std::string> param_union;
    std::vector<std::set<std::string>> per_method;
    for (const auto* m : methods) {
      std::set<std::string> types;
      for (const auto& p : m->param_types) {
        auto erased = erase_type_arguments(p);
        auto resolved = model.resolve(t, p);
        if (resolved && *resolved == t.qualified_name) continue;
        if (!erased.empty()) types.insert(erased);
      }
      param_union.insert(types.begin(), types.end());
      per_method.push_back(std::move(types));
    }
    if (!methods.empty() && !param_union.empty()) {
      double hits = 0;
      for (const auto& s : per_method) hits += static_cast<double>(s.size());
      cam_sum += hits / (static_cast<double>(methods.size()) * static_cast<double>(param_union.size()));
      ++cam_n;
    }
  }

  props[P::kHierarchies] = static_cast<double>(roots_with_children);
  props[P::kAbstraction] = mean(dit_sum, n);
  props[P::kEncapsulation] = mean(dam_sum, dam_n);
  props[P::kCoupling] = mean(cbo_sum, n);
  props[P::kCohesion] = mean(cam_sum, cam_n);
  props[P::kComposition] = mean(moa_sum, n);
  props[P::kInheritance] = mean(mfa_sum, n);
  props[P::kPolymorphism] = mean(nop_sum, n);
  props[P::kMessaging] = mean(cis_sum, n);
  props[P::kComplexity] = mean(nom_sum, n);
  return props;
}

QualityIndexes quality_indexes(const QmoodProperties& props, const QmoodWeights& weights) {
  QualityIndexes out;
  for (std::size_t a = 0; a < kQualityAttributeCount; ++a) {
    double v = 0.0;
    for (std::size_t p = 0; p < kDesignPropertyCount; ++p) v += weights.rows[a][p] * props.values[p];
    out.values[a] = v;
    out.tqi += v;
  }
  return out;
}

std::vector<RankedDesign> rank_designs(std::vector<RankedDesign> designs) {
  std::stable_sort(designs.begin(), designs.end(), [](const RankedDesign& a, const RankedDesign& b) {
    if (a.indexes.tqi != b.indexes.tqi) return a.indexes.tqi > b.indexes.tqi;
    return a.name < b.name;
  });
  return designs;
}

void normalize_min_max(std::vector<QmoodProperties>& designs) {
  if (designs.empty()) return;
  for (std::size_t p = 0; p < kDesignPropertyCount; ++p) {
    double lo = designs.front().values[p], hi = lo;
    for (const auto& d : designs) {
      lo = std::min(lo, d.values[p]);
      hi = std::max(hi, d.values[p]);
    }
    for (auto& d : designs) d.values[p] = hi > lo ? (d.values[p] - lo) / (hi - lo) : 0.0;
  }
}

}  // namespace qualimeter
