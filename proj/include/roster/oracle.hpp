#pragma once

#include <cstdint>

#include "roster/evaluation.hpp"

namespace roster {

enum class OracleStatus { Optimal, Infeasible, TooLarge };

struct OracleResult {
  OracleStatus status = OracleStatus::TooLarge;
  /// Minimum-total feasible schedule; ties go to the lexicographically
  /// smallest assignment. Empty unless Optimal.
  Schedule best;
  Evaluation eval;
  std::uint64_t enumerated = 0;
  /// Product of the feasible-set sizes (saturated at UINT64_MAX).
  std::uint64_t space = 0;
};

inline constexpr std::uint64_t kDefaultOracleLimit = 10'000'000;

/// Exhaustive search over every schedule when the search space is within `limit`.
OracleResult oracle_solve(const Instance& inst, std::uint64_t limit = kDefaultOracleLimit);

}  // namespace roster
