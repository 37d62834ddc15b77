#pragma once

#include <functional>
#include <string>
#include <vector>

#include "burgers/config.hpp"

namespace burgers {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string measured;  // "key=value" pairs, space separated
  double seconds = 0.0;
};

inline constexpr int kCriteriaCount = 14;

/// Runs acceptance criterion `id` (1..14) on top of the grid `base`.
/// Criteria that need a finer grid derive it from `base`.
CriterionResult run_criterion(int id, const SpectralConfig& base = {});

/// All criteria in order; `on_result` is called as each one finishes.
/// Intermediate solutions are shared between criteria.
std::vector<CriterionResult> run_acceptance(
    const SpectralConfig& base = {},
    const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_result(const CriterionResult& r);

}  // namespace burgers
