#include "roster/evaluation.hpp"

namespace roster {

const char* to_string(Balance b) {
  switch (b) {
    case Balance::Balanced: return "balanced";
    case Balance::Unbalanced: return "unbalanced";
    case Balance::Neither: return "neither";
  }
  return "?";
}

SlotGradeTable coverage_of(const Instance& inst, const Schedule& s) {
  const int p = inst.grades;
  SlotGradeTable cover = SlotGradeTable::Zero(kSlots, p);
  for (int i = 0; i < s.size(); ++i) {
    const int g = inst.nurses[i].grade;
    cover.rightCols(p - g).colwise() += inst.patterns[s[i]].cover;
  }
  return cover;
}

SlotVector surplus_of(const Instance& inst, const SlotGradeTable& coverage) {
  return coverage.col(inst.grades - 1) - inst.demand.col(inst.grades - 1);
}

Balance classify_surplus(const SlotVector& surplus) {
  const auto days = surplus.head<kDaySlots>().array();
  const auto nights = surplus.tail<kDaySlots>().array();
  const bool day_over = (days > 0).any();
  const bool day_under = (days < 0).any();
  const bool night_over = (nights > 0).any();
  const bool night_under = (nights < 0).any();

  const bool balanced = (day_over && day_under) || (night_over && night_under);
  const bool unbalanced = (day_over && night_under) || (day_under && night_over);
  if (balanced && !unbalanced) return Balance::Balanced;
  if (unbalanced && !balanced) return Balance::Unbalanced;
  return Balance::Neither;
}

Balance classify_balance(const Instance& inst, const Schedule& s) {
  return classify_surplus(surplus_of(inst, coverage_of(inst, s)));
}

Evaluation evaluate_restricted(const Instance& inst, const Schedule& s, double weight,
                               PenaltyShape shape, GradeSet grades) {
  Evaluation ev;
  for (int i = 0; i < s.size(); ++i) {
    if (grades.contains(inst.nurses[i].grade)) ev.pref_cost += inst.pref_cost(i, s[i]);
  }
  const SlotGradeTable cover = coverage_of(inst, s);
  ev.shortfalls = (inst.demand - cover).cwiseMax(0);
  for (int g = 0; g < inst.grades; ++g) {
    if (!grades.contains(g)) ev.shortfalls.col(g).setZero();
  }
  ev.violated = static_cast<int>((ev.shortfalls.array() > 0).count());
  ev.feasible = ev.violated == 0;
  ev.balance = classify_surplus(surplus_of(inst, cover));
  reweigh(ev, weight, shape);
  return ev;
}

Evaluation evaluate(const Instance& inst, const Schedule& s, double weight, PenaltyShape shape) {
  return evaluate_restricted(inst, s, weight, shape, GradeSet::all(inst.grades));
}

void reweigh(Evaluation& ev, double weight, PenaltyShape shape) {
  ev.penalty = shortfall_penalty(ev.shortfalls, weight, shape);
  ev.total = ev.pref_cost + ev.penalty;
}

Schedule random_schedule(const Instance& inst, Rng& rng) {
  Schedule s;
  s.assign.reserve(inst.nurses.size());
  for (const Nurse& nurse : inst.nurses) {
    std::uniform_int_distribution<std::size_t> pick(0, nurse.feasible.size() - 1);
    s.assign.push_back(nurse.feasible[pick(rng)]);
  }
  return s;
}

bool is_valid(const Instance& inst, const Schedule& s) {
  if (s.size() != inst.nurse_count()) return false;
  for (int i = 0; i < s.size(); ++i) {
    if (!inst.is_feasible_for(i, s[i])) return false;
  }
  return true;
}

}  // namespace roster
