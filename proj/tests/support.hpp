#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "roster/evaluation.hpp"
#include "roster/instance.hpp"

namespace testing {

inline const std::string kTiny1 = R"(PROBLEM tiny1
NURSES 3
GRADES 2
PATTERNS 4
PATTERN 1 1 1 1 0 0 0 0 0 0 0 0 0 0 0
PATTERN 2 0 1 1 1 0 0 0 0 0 0 0 0 0 0
PATTERN 3 0 0 0 0 0 0 0 1 1 1 0 0 0 0
PATTERN 4 0 0 0 0 0 0 0 0 1 1 1 0 0 0
NURSE 1 GRADE 1 DAYS 3 NIGHTS 3 FEASIBLE 1 2 3 4
NURSE 2 GRADE 2 DAYS 3 NIGHTS 3 FEASIBLE 1 2 3 4
NURSE 3 GRADE 2 DAYS 3 NIGHTS 3 FEASIBLE 1 2 3 4
PREF 1 1 0
PREF 1 2 1
PREF 1 3 2
PREF 1 4 3
PREF 2 1 2
PREF 2 2 0
PREF 2 3 1
PREF 2 4 3
PREF 3 1 3
PREF 3 2 2
PREF 3 3 0
PREF 3 4 1
DEMAND 8 1 1
DEMAND 1 2 1
DEMAND 8 2 1
END
)";

inline roster::Instance tiny1() { return roster::parse_instance(kTiny1); }

// 1-based pattern ids, as written in the examples.
inline roster::Schedule sched(std::initializer_list<int> ids) {
  roster::Schedule s;
  for (int id : ids) s.assign.push_back(id - 1);
  return s;
}

struct Naive {
  int pref = 0;
  int violated = 0;
  long shortfall_sum = 0;
  long shortfall_sq = 0;
  std::vector<std::vector<int>> cover;  // [slot][grade row]
};

// Straight loops over the model definition; shares no code with the library
// evaluator beyond the instance data.
inline Naive naive_eval(const roster::Instance& inst, const roster::Schedule& s) {
  Naive r;
  r.cover.assign(roster::kSlots, std::vector<int>(inst.grades, 0));
  for (int i = 0; i < inst.nurse_count(); ++i) {
    r.pref += inst.pref(i, s[i]);
    const auto& pat = inst.patterns[s[i]];
    for (int k = 0; k < roster::kSlots; ++k) {
      for (int row = 0; row < inst.grades; ++row) {
        if (inst.nurses[i].grade <= row) r.cover[k][row] += pat.cover(k);
      }
    }
  }
  for (int k = 0; k < roster::kSlots; ++k) {
    for (int row = 0; row < inst.grades; ++row) {
      const int gap = std::max(inst.demand(k, row) - r.cover[k][row], 0);
      if (gap > 0) ++r.violated;
      r.shortfall_sum += gap;
      r.shortfall_sq += static_cast<long>(gap) * gap;
    }
  }
  return r;
}

inline double naive_total(const roster::Instance& inst, const roster::Schedule& s, double weight,
                          roster::PenaltyShape shape) {
  const Naive n = naive_eval(inst, s);
  const long term = shape == roster::PenaltyShape::Linear ? n.shortfall_sum : n.shortfall_sq;
  return n.pref + weight * static_cast<double>(term);
}

}  // namespace testing
