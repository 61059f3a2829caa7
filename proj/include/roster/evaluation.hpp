#pragma once

#include <compare>
#include <cstdint>
#include <random>
#include <vector>

#include "roster/instance.hpp"

namespace roster {

using Rng = std::mt19937_64;

/// One genotype: entry i is the (0-based) pattern worked by nurse i. Each
/// nurse works exactly one pattern by construction.
struct Schedule {
  std::vector<int> assign;

  int size() const { return static_cast<int>(assign.size()); }
  int operator[](int i) const { return assign[i]; }
  int& operator[](int i) { return assign[i]; }

  friend auto operator<=>(const Schedule&, const Schedule&) = default;
};

enum class PenaltyShape { Linear, Quadratic };

enum class Balance { Balanced, Unbalanced, Neither };

const char* to_string(Balance b);

/// Set of 0-based grade rows, as a bitmask.
class GradeSet {
 public:
  constexpr GradeSet() = default;
  constexpr explicit GradeSet(std::uint32_t bits) : bits_(bits) {}

  static constexpr GradeSet all(int grades) { return GradeSet((1u << grades) - 1u); }
  static constexpr GradeSet single(int grade) { return GradeSet(1u << grade); }

  constexpr bool contains(int grade) const { return (bits_ >> grade) & 1u; }
  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return __builtin_popcount(bits_); }
  constexpr bool is_strict_subset_of(GradeSet other) const {
    return bits_ != other.bits_ && (bits_ & other.bits_) == bits_;
  }
  constexpr GradeSet operator|(GradeSet o) const { return GradeSet(bits_ | o.bits_); }
  constexpr GradeSet operator&(GradeSet o) const { return GradeSet(bits_ & o.bits_); }

  friend constexpr bool operator==(GradeSet, GradeSet) = default;

 private:
  std::uint32_t bits_ = 0;
};

struct Evaluation {
  int pref_cost = 0;
  /// max(R_ks - cover(k, s), 0) on every counted row; zero elsewhere.
  SlotGradeTable shortfalls;
  /// Number of (slot, grade row) pairs with a positive shortfall.
  int violated = 0;
  double penalty = 0.0;
  double total = 0.0;
  bool feasible = true;
  Balance balance = Balance::Neither;
};

/// cover(k, s) = sum over nurses of q_is * a_{assign[i], k}.
SlotGradeTable coverage_of(const Instance& inst, const Schedule& s);

/// Weighted one-sided shortfall term. Quadratic squares each cell before
/// summing.
template <typename Derived, typename Scalar>
Scalar shortfall_penalty(const Eigen::MatrixBase<Derived>& shortfalls, Scalar weight,
                         PenaltyShape shape) {
  const auto cells = shortfalls.template cast<Scalar>().array();
  const Scalar sum = shape == PenaltyShape::Linear ? cells.sum() : cells.square().sum();
  return weight * sum;
}

Evaluation evaluate(const Instance& inst, const Schedule& s, double weight, PenaltyShape shape);

/// Evaluation restricted to one niche: preference costs only of nurses whose
/// grade is in `grades`, shortfalls only on demand rows in `grades`. Balance
/// is always classified on the full all-nurses row.
Evaluation evaluate_restricted(const Instance& inst, const Schedule& s, double weight,
                               PenaltyShape shape, GradeSet grades);

/// Recomputes penalty and total for a new weight without re-deriving coverage.
void reweigh(Evaluation& ev, double weight, PenaltyShape shape);

/// Surplus on the all-nurses (lowest grade) row: cover(k, p) - R_{k,p}.
SlotVector surplus_of(const Instance& inst, const SlotGradeTable& coverage);

/// Balanced when day or night shifts hold both a surplus and a shortage
/// and no day/night cross imbalance exists; Unbalanced for the reverse;
/// Neither otherwise (including when both conditions hold).
Balance classify_surplus(const SlotVector& surplus);

Balance classify_balance(const Instance& inst, const Schedule& s);

Schedule random_schedule(const Instance& inst, Rng& rng);

/// Length matches and every gene lies in its nurse's feasible set.
bool is_valid(const Instance& inst, const Schedule& s);

}  // namespace roster
