#include "roster/oracle.hpp"

#include <algorithm>
#include <limits>

namespace roster {

OracleResult oracle_solve(const Instance& inst, std::uint64_t limit) {
  OracleResult result;
  const int n = inst.nurse_count();

  std::uint64_t space = 1;
  for (const Nurse& nurse : inst.nurses) {
    const auto size = static_cast<std::uint64_t>(nurse.feasible.size());
    if (size != 0 && space > std::numeric_limits<std::uint64_t>::max() / size) {
      space = std::numeric_limits<std::uint64_t>::max();
      break;
    }
    space *= size;
  }
  result.space = space;
  if (space > limit) {
    result.status = OracleStatus::TooLarge;
    return result;
  }

  // Odometer over ascending candidate ids, last nurse fastest, so schedules
  // are visited in lexicographic order and the first strict minimum wins ties.
  std::vector<std::vector<int>> candidates(n);
  for (int i = 0; i < n; ++i) {
    candidates[i] = inst.nurses[i].feasible;
    std::sort(candidates[i].begin(), candidates[i].end());
  }
  std::vector<std::size_t> digit(n, 0);
  Schedule s;
  s.assign.resize(n);
  for (int i = 0; i < n; ++i) s[i] = candidates[i][0];

  bool found = false;
  while (true) {
    ++result.enumerated;
    Evaluation ev = evaluate(inst, s, 1.0, PenaltyShape::Linear);
    if (ev.feasible && (!found || ev.total < result.eval.total)) {
      found = true;
      result.best = s;
      result.eval = std::move(ev);
    }
    int pos = n - 1;
    while (pos >= 0) {
      if (++digit[pos] < candidates[pos].size()) {
        s[pos] = candidates[pos][digit[pos]];
        break;
      }
      digit[pos] = 0;
      s[pos] = candidates[pos][0];
      --pos;
    }
    if (pos < 0) break;
  }
  result.status = found ? OracleStatus::Optimal : OracleStatus::Infeasible;
  return result;
}

}  // namespace roster
