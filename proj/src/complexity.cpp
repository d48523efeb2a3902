#include "qualimeter/complexity.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qualimeter {

std::size_t cyclomatic(const MethodDecl& method) { return method.decision_count + 1; }

double halstead_volume(const HalsteadCounts& h) {
  const auto vocabulary = h.distinct_operators + h.distinct_operands;
  const auto length = h.total_operators + h.total_operands;
  if (length == 0) return 0.0;
  if (vocabulary == 0) throw std::invalid_argument("halstead: tokens counted with an empty vocabulary");
  return static_cast<double>(length) * std::log2(static_cast<double>(vocabulary));
}

double maintainability_index(const MiInputs& in) {
  const double clpm = in.clpm_unit == ClpmUnit::kPercent ? in.clpm / 100.0 : in.clpm;
  if (!(in.halstead_volume > 0.0)) throw std::invalid_argument("MI: Halstead volume must be positive");
  if (!(in.cyclomatic >= 1.0)) throw std::invalid_argument("MI: cyclomatic complexity must be >= 1");
  if (!(in.loc_per_module > 0.0)) throw std::invalid_argument("MI: lines per module must be positive");
  if (!(clpm >= 0.0 && clpm <= 1.0)) throw std::invalid_argument("MI: comment share must lie in [0,1]");
  return 171.0 - 5.2 * std::log(in.halstead_volume) - 0.23 * in.cyclomatic - 16.2 * std::log(in.loc_per_module) +
         50.0 * std::sin(std::sqrt(2.46 * clpm));
}

ComplexitySummary system_complexity_summary(const ClassModel& model) {
  ComplexitySummary s;
  for (const auto& t : model.types()) {
    for (const auto& m : t.methods) {
      s.sum_vg += cyclomatic(m);
      ++s.function_count;
    }
  }
  if (s.function_count > 0) s.avg_vg = static_cast<double>(s.sum_vg) / static_cast<double>(s.function_count);
  return s;
}

namespace {

std::optional<MiInputs> average_inputs(const std::vector<const MethodDecl*>& methods) {
  if (methods.empty()) return std::nullopt;
  double hv = 0, cc = 0, loc = 0, clpm = 0;
  for (const auto* m : methods) {
    hv += halstead_volume(m->halstead);
    cc += static_cast<double>(cyclomatic(*m));
    loc += static_cast<double>(m->lines.code);
    const auto commented = m->lines.code + m->lines.comment;
    if (commented > 0) clpm += static_cast<double>(m->lines.comment) / static_cast<double>(commented);
  }
  const double n = static_cast<double>(methods.size());
  MiInputs in{hv / n, cc / n, loc / n, clpm / n, ClpmUnit::kFraction};
  if (!(in.halstead_volume > 0.0) || !(in.loc_per_module > 0.0)) return std::nullopt;
  return in;
}

}  // namespace

std::optional<MiInputs> mi_inputs(const TypeDecl& type) {
  std::vector<const MethodDecl*> methods;
  for (const auto& m : type.methods) methods.push_back(&m);
  return average_inputs(methods);
}

std::optional<MiInputs> mi_inputs(const ClassModel& model) {
  std::vector<const MethodDecl*> methods;
  for (const auto& t : model.types()) {
    for (const auto& m : t.methods) methods.push_back(&m);
  }
  return average_inputs(methods);
}

}  // namespace qualimeter
