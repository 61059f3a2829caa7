#include "roster/improvement.hpp"

#include <algorithm>
#include <numeric>

namespace roster {

double ranking_score(const Evaluation& ev, double pop_spread, const IncentiveConfig& cfg) {
  const double bonus = pop_spread + 1.0;
  double score = ev.total;
  if (cfg.incentive && ev.balance == Balance::Balanced) score -= bonus;
  if (cfg.disincentive && ev.balance == Balance::Unbalanced) score += bonus;
  return score;
}

namespace {

// Tracks coverage of a schedule so single-gene moves can be priced in
// O(slots x grades).
class MoveEvaluator {
 public:
  MoveEvaluator(const Instance& inst, Schedule s, double weight, PenaltyShape shape)
      : inst_(inst), s_(std::move(s)), weight_(weight), shape_(shape),
        cover_(coverage_of(inst, s_)) {}

  const Schedule& schedule() const { return s_; }

  /// Change in the unweighted shortfall sum (or sum of squares).
  long shortfall_delta(int nurse, int pattern) const {
    const int from = s_[nurse];
    if (from == pattern) return 0;
    const SlotVector diff = inst_.patterns[pattern].cover - inst_.patterns[from].cover;
    long delta = 0;
    for (int k = 0; k < kSlots; ++k) {
      if (diff(k) == 0) continue;
      for (int g = inst_.nurses[nurse].grade; g < inst_.grades; ++g) {
        const int demand = inst_.demand(k, g);
        const int before = std::max(demand - cover_(k, g), 0);
        const int after = std::max(demand - cover_(k, g) - diff(k), 0);
        delta += cell_cost(after) - cell_cost(before);
      }
    }
    return delta;
  }

  /// Change in the weighted total.
  double total_delta(int nurse, int pattern) const {
    const int pref_delta = inst_.pref_cost(nurse, pattern) - inst_.pref_cost(nurse, s_[nurse]);
    return pref_delta + weight_ * static_cast<double>(shortfall_delta(nurse, pattern));
  }

  void apply(int nurse, int pattern) {
    const int g = inst_.nurses[nurse].grade;
    const SlotVector diff = inst_.patterns[pattern].cover - inst_.patterns[s_[nurse]].cover;
    cover_.rightCols(inst_.grades - g).colwise() += diff;
    s_[nurse] = pattern;
  }

 private:
  long cell_cost(int shortfall) const {
    return shape_ == PenaltyShape::Linear ? shortfall : static_cast<long>(shortfall) * shortfall;
  }

  const Instance& inst_;
  Schedule s_;
  double weight_;
  PenaltyShape shape_;
  SlotGradeTable cover_;
};

}  // namespace

Schedule local_search_firstfit(const Instance& inst, const Schedule& s, double weight,
                               PenaltyShape shape) {
  MoveEvaluator state(inst, s, weight, shape);
  const int n = inst.nurse_count();

  // Candidate order per nurse: ascending preference, feasible-set order on ties.
  std::vector<std::vector<int>> candidates(n);
  for (int i = 0; i < n; ++i) {
    candidates[i] = inst.nurses[i].feasible;
    std::stable_sort(candidates[i].begin(), candidates[i].end(), [&](int a, int b) {
      return inst.pref_cost(i, a) < inst.pref_cost(i, b);
    });
  }

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<double> key(n);
    for (int i = 0; i < n; ++i) {
      double best_reduction = 0.0;
      for (int j : candidates[i]) {
        best_reduction =
            std::max(best_reduction, -weight * static_cast<double>(state.shortfall_delta(i, j)));
      }
      key[i] = inst.pref_cost(i, state.schedule()[i]) + best_reduction;
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key[a] > key[b]; });

    for (int i : order) {
      for (int j : candidates[i]) {
        if (j == state.schedule()[i]) continue;
        if (state.total_delta(i, j) < -1e-9) {
          state.apply(i, j);
          changed = true;
          break;
        }
      }
    }
  }
  return state.schedule();
}

Schedule shift_swap_best(const Instance& inst, const Schedule& s) {
  Schedule out = s;
  const int n = inst.nurse_count();
  bool changed = true;
  while (changed) {
    changed = false;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        const Nurse& na = inst.nurses[a];
        const Nurse& nb = inst.nurses[b];
        if (na.grade != nb.grade || !na.same_contract(nb)) continue;
        const int pa = out[a];
        const int pb = out[b];
        if (pa == pb || !inst.is_feasible_for(a, pb) || !inst.is_feasible_for(b, pa)) continue;
        const int before = inst.pref_cost(a, pa) + inst.pref_cost(b, pb);
        const int after = inst.pref_cost(a, pb) + inst.pref_cost(b, pa);
        if (after < before) {
          out[a] = pb;
          out[b] = pa;
          changed = true;
        }
      }
    }
  }
  return out;
}

Schedule special_swap(const Instance& inst, const Schedule& s, double weight, PenaltyShape shape) {
  Schedule out = s;
  double current = evaluate(inst, out, weight, shape).total;
  const int n = inst.nurse_count();
  for (int a = 0; a < n; ++a) {
    const Nurse& na = inst.nurses[a];
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const Nurse& nb = inst.nurses[b];
      if (na.grade != nb.grade || na.nights_required != nb.nights_required ||
          na.days_required <= nb.days_required) {
        continue;
      }
      const int night = out[a];
      if (inst.patterns[night].kind() != PatternKind::Night) break;
      if (inst.patterns[out[b]].kind() != PatternKind::Day) continue;
      if (!inst.is_feasible_for(b, night)) continue;

      int best_day = -1;
      for (int j : na.feasible) {
        if (inst.patterns[j].kind() != PatternKind::Day) continue;
        if (best_day < 0 || inst.pref_cost(a, j) < inst.pref_cost(a, best_day)) best_day = j;
      }
      if (best_day < 0) break;

      Schedule trial = out;
      trial[b] = night;
      trial[a] = best_day;
      const double total = evaluate(inst, trial, weight, shape).total;
      if (total <= current) {
        out = std::move(trial);
        current = total;
        break;  // A is now on days
      }
    }
  }
  return out;
}

Schedule improve_top(const Instance& inst, const Schedule& s, double weight, PenaltyShape shape,
                     const IncentiveConfig& cfg) {
  Schedule out = s;
  if (cfg.local_search && classify_balance(inst, out) == Balance::Balanced) {
    out = local_search_firstfit(inst, out, weight, shape);
  }
  if (cfg.swaps) out = shift_swap_best(inst, out);
  if (cfg.special_swaps) out = special_swap(inst, out, weight, shape);
  return out;
}

}  // namespace roster
