#pragma once

#include <cstddef>
#include <optional>

#include "qualimeter/model.hpp"

namespace qualimeter {

enum class ClpmUnit { kFraction, kPercent };

// Inputs of the Maintainability Index. `clpm` is the mean comment-line
// share per module, either as a fraction in [0,1] or as a percentage.
struct MiInputs {
  double halstead_volume = 0.0;
  double cyclomatic = 1.0;
  double loc_per_module = 0.0;
  double clpm = 0.0;
  ClpmUnit clpm_unit = ClpmUnit::kFraction;
};

std::size_t cyclomatic(const MethodDecl& method);

// (N1 + N2) * log2(n1 + n2). Throws std::invalid_argument when tokens were
// counted but the vocabulary is empty.
double halstead_volume(const HalsteadCounts& h);

// 171 - 5.2 ln(HV) - 0.23 CC - 16.2 ln(LOCPM) + 50 sin(sqrt(2.46 CLPM)).
// Throws std::invalid_argument on inputs outside the model's domain.
double maintainability_index(const MiInputs& in);

struct ComplexitySummary {
  std::size_t sum_vg = 0;
  std::optional<double> avg_vg;  // absent when there are no methods
  std::size_t function_count = 0;
};

ComplexitySummary system_complexity_summary(const ClassModel& model);

// Per-method averages over `type` (or the whole model) fed into the MI
// formula: mean method volume, mean v(G), mean code lines and mean share of
// comment lines. Absent when there is no method with a positive volume and
// positive code size.
std::optional<MiInputs> mi_inputs(const TypeDecl& type);
std::optional<MiInputs> mi_inputs(const ClassModel& model);

}  // namespace qualimeter
