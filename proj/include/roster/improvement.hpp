#pragma once

#include "roster/evaluation.hpp"

namespace roster {

enum class SwapScope { TopOnly };

/// Fitness shaping and local improvement switches.
struct IncentiveConfig {
  bool incentive = false;
  bool disincentive = false;
  bool local_search = false;
  bool swaps = false;
  bool special_swaps = false;
  SwapScope swap_scope = SwapScope::TopOnly;

  bool any_hook() const { return local_search || swaps || special_swaps; }
};

/// Score used only for ranking. With b = pop_spread + 1, Balanced members
/// get -b and Unbalanced +b, so every Balanced member outranks every
/// Unbalanced one regardless of raw totals.
double ranking_score(const Evaluation& ev, double pop_spread, const IncentiveConfig& cfg);

/// First-fit descending hill climb. Nurses are visited in descending order
/// of (current preference cost + best shortfall reduction one move of theirs
/// could achieve); each nurse's feasible patterns are tried in ascending
/// preference order and the first strictly improving one is taken. Passes
/// repeat until a pass changes nothing.
Schedule local_search_firstfit(const Instance& inst, const Schedule& s, double weight,
                               PenaltyShape shape);

/// Exchanges patterns between nurses of equal grade and contract while the
/// pair's preference sum strictly drops. Coverage is unchanged by every swap.
Schedule shift_swap_best(const Instance& inst, const Schedule& s);

/// Repairs the "long-day nurse on nights, short-day nurse on days" trap:
/// for nurses A (more days required, same nights) on a night pattern and B
/// of the same grade on a day pattern, B takes A's night pattern and A takes
/// its cheapest day pattern, when the total does not increase.
Schedule special_swap(const Instance& inst, const Schedule& s, double weight, PenaltyShape shape);

/// Runs the enabled hooks on one (top) schedule: local search when the
/// schedule is Balanced, then shift swaps, then special swaps.
Schedule improve_top(const Instance& inst, const Schedule& s, double weight, PenaltyShape shape,
                     const IncentiveConfig& cfg);

}  // namespace roster
