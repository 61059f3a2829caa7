#pragma once

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "roster/evaluation.hpp"
#include "roster/improvement.hpp"
#include "roster/report.hpp"

namespace roster {

struct KPoint {
  int k = 1;
};
struct Uniform {};
/// Whole grade segments copied from one parent each.
struct GradeBased {};
/// GradeBased with probability grade_fraction, Uniform otherwise.
struct Mix {
  double grade_fraction = 0.5;
};
using CrossoverMode = std::variant<KPoint, Uniform, GradeBased, Mix>;

struct StaticWeight {
  double weight = 10.0;
};
/// g = alpha * q while the top member violates q > 0 constraints, v once it is feasible.
struct DynamicWeight {
  double alpha = 5.0;
  double v = 5.0;
};
using WeightMode = std::variant<StaticWeight, DynamicWeight>;

struct EngineConfig {
  int pop_size = 1000;
  int generations = 100;
  CrossoverMode crossover = Uniform{};
  double mutation_rate = 0.05;
  double elite_fraction = 0.1;
  PenaltyShape penalty_shape = PenaltyShape::Linear;
  WeightMode weight_mode = StaticWeight{};
  double selection_pressure = 1.5;
  IncentiveConfig improvement;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

struct Member {
  Schedule schedule;
  Evaluation eval;
  double score = 0.0;
  std::uint64_t serial = 0;
};

/// Members are kept sorted best-first by ranking score; ties fall back to
/// feasibility, preference cost and insertion serial.
struct Population {
  std::vector<Member> members;
  int generation = 0;
  double current_weight = 0.0;
  /// Demand rows and nurses this population's fitness counts.
  GradeSet fitness;
  std::uint64_t next_serial = 0;

  int size() const { return static_cast<int>(members.size()); }
  const Member& best() const { return members.front(); }
};

/// Nurse indices sorted by grade, cut into one segment per grade present.
struct GradeBoundaries {
  std::vector<int> order;
  /// Segment s spans order[cuts[s] .. cuts[s + 1]).
  std::vector<int> cuts;
  /// Grade of each segment.
  std::vector<int> grades;

  static GradeBoundaries of(const Instance& inst);
  int segment_count() const { return static_cast<int>(grades.size()); }
};

/// Linear ranking: probability of 0-based rank r among n.
double rank_probability(int rank, int n, double pressure);

class RankSelector {
 public:
  RankSelector(int n, double pressure);
  int operator()(Rng& rng) const;

 private:
  std::vector<double> cumulative_;
};

const Member& rank_select(const Population& pop, double pressure, Rng& rng);

/// Alternating segments; `cuts` are positions c meaning "cut after gene c"
/// (1 <= c < n), strictly increasing.
Schedule crossover_at_cuts(const Schedule& p1, const Schedule& p2, const std::vector<int>& cuts);

/// picks[s] == 0 copies segment s from p1, otherwise from p2.
Schedule grade_crossover(const Schedule& p1, const Schedule& p2, const GradeBoundaries& bounds,
                         const std::vector<int>& picks);

Schedule crossover(const Schedule& p1, const Schedule& p2, const CrossoverMode& mode,
                   const GradeBoundaries& bounds, Rng& rng);

Schedule mutate(const Schedule& s, const Instance& inst, double rate, Rng& rng);

double dynamic_weight(int q_best, double alpha, double v);

int elite_count(int pop_size, double elite_fraction);

/// Keeps the top ceil(elite_fraction * N) of `old` and fills the rest with
/// the best offspring. Result is re-ranked.
Population replace_elitist(const Population& old, std::vector<Member> offspring,
                           double elite_fraction, const IncentiveConfig& incentives);

/// Recomputes ranking scores from the current totals and sorts.
void rank_population(Population& pop, const IncentiveConfig& incentives);

Member make_member(const Instance& inst, Schedule s, const Population& pop, PenaltyShape shape);

double initial_weight(const WeightMode& mode);

Population make_population(const Instance& inst, std::vector<Schedule> schedules,
                           const EngineConfig& cfg, GradeSet fitness);

Population random_population(const Instance& inst, int size, const EngineConfig& cfg,
                             GradeSet fitness, Rng& rng);

/// Builds one child from the (already re-ranked) population being stepped.
using ChildFactory = std::function<Schedule(const Population& self, Rng& rng)>;

/// One generation with a caller-supplied breeding rule. Hooks from
/// cfg.improvement run on the top member only when `apply_hooks` is set.
Population advance_generation(Population pop, const Instance& inst, const EngineConfig& cfg,
                              Rng& rng, const ChildFactory& make_child, bool apply_hooks);

Population step_generation(Population pop, const Instance& inst, const EngineConfig& cfg, Rng& rng);

/// Follows the best feasible schedule seen over a run.
class FeasibleArchive {
 public:
  void observe(const Population& pop);
  bool found() const { return best_.has_value(); }
  int best_total() const { return *best_; }
  const Schedule& best_schedule() const { return schedule_; }
  std::optional<int> first_generation() const { return first_gen_; }

 private:
  std::optional<int> best_;
  Schedule schedule_;
  std::optional<int> first_gen_;
};

RunReport run_basic(const Instance& inst, const EngineConfig& cfg);

/// Schedules drawn from the index window of +-radius around best's gene in
/// each ordered feasible set.
std::vector<Schedule> delta_restart(const Instance& inst, const Schedule& best, int radius,
                                    int pop_size, Rng& rng);

}  // namespace roster
