#pragma once

#include <optional>
#include <string>

#include "qualimeter/model.hpp"
#include "qualimeter/relations.hpp"

namespace qualimeter {

// System-level MOOD factors. An absent value means the defining ratio has an
// empty denominator; it is never reported as 0.
struct MoodMetrics {
  std::optional<double> mhf;
  std::optional<double> ahf;
  std::optional<double> mif;
  std::optional<double> aif;
  std::optional<double> cf;
  std::optional<double> pf;
};

// Share of the other TC - 1 types that may access a member declared in
// `owner` with visibility `v`. Defined as 0 when TC < 2.
double visibility_fraction(const ClassModel& model, const TypeDecl& owner, Visibility v);

std::optional<double> ahf(const ClassModel& model);
std::optional<double> mhf(const ClassModel& model);
std::optional<double> aif(const ClassModel& model);
std::optional<double> mif(const ClassModel& model);
std::optional<double> cf(const ClassModel& model, const CouplingOptions& options = {});
std::optional<double> pf(const ClassModel& model);

MoodMetrics mood_suite(const ClassModel& model, const CouplingOptions& options = {});

}  // namespace qualimeter
