#pragma once

#include <optional>
#include <string>

#include "roster/evaluation.hpp"

namespace roster {

/// Outcome of one GA run. Totals are under the original objective: for a
/// feasible schedule the total is its preference cost.
struct RunReport {
  std::string instance;
  std::uint64_t seed = 0;
  std::string features;
  bool feasible = false;
  std::optional<int> best_feasible_total;
  double best_total = 0.0;
  std::optional<int> generations_to_feasible;
  int generations = 0;
  double final_weight = 0.0;
  double wall_ms = 0.0;
  /// Best feasible schedule when one was found, else the final top member.
  Schedule best_schedule;
};

}  // namespace roster
