#pragma once

#include <vector>

#include "roster/ga_engine.hpp"

namespace roster {

/// Who receives a niche's best member at migration time. SupersetPush sends
/// it to niches whose grade set strictly contains the sender's and to main;
/// Broadcast sends it to every other population.
enum class MigrationPolicy { SupersetPush, Broadcast };

struct CoopConfig {
  int niche_size = 100;
  int main_size = 300;
  /// Generations between migrations; 0 disables migration.
  int migration_period = 10;
  /// Share of offspring bred by cross-niche grade-based assembly in the
  /// non-singleton niches and the main population.
  double grade_fraction = 0.5;
  MigrationPolicy migration_policy = MigrationPolicy::SupersetPush;

  void validate() const;
};

/// One niche. For p = 3 the layout is 1={1}, 2={2}, 3={3}, 4={1,2},
/// 5={1,3}, 6={2,3}, 7={1,2,3}, 8=main (ids are 1-based, grades 0-based).
struct SubPopSpec {
  int id = 1;
  GradeSet grades;
  int size = 0;
  bool is_main = false;

  bool uniform_only() const { return !is_main && grades.size() == 1; }
};

/// Every non-empty grade subset ordered by (size, bitmask), then the main population.
std::vector<SubPopSpec> niche_layout(int grades, const CoopConfig& cfg);

struct PopulationSet {
  std::vector<SubPopSpec> specs;
  std::vector<Population> pops;
  int migration_period = 0;
  MigrationPolicy migration_policy = MigrationPolicy::SupersetPush;

  const Population& main() const { return pops.back(); }
};

/// Niche objective: preference of in-niche nurses plus weighted shortfall on
/// in-niche demand rows. The main population uses the full objective.
double sub_fitness(const SubPopSpec& spec, const Instance& inst, const Schedule& s, double weight,
                   PenaltyShape shape);

/// Ways to split spec.grades into blocks, each block the grade set of a
/// lower-id niche. Entries are 0-based niche indices.
std::vector<std::vector<int>> grade_partitions(const std::vector<SubPopSpec>& specs, int niche);

/// Donor schedules and the grades each one contributes. `base` supplies
/// nurses outside every block.
struct ParentMaterial {
  Schedule base;
  std::vector<Schedule> donors;
  std::vector<GradeSet> blocks;
  /// Niche index each donor came from; for inspection.
  std::vector<int> donor_niches;
};

enum class ParentMode { Uniform, GradeBased };

ParentMaterial pick_parents(const PopulationSet& set, int niche, const Population& self,
                            ParentMode mode, double pressure, Rng& rng);

/// Child built from parent material: grade blocks copied from their donors,
/// or uniform crossover of the two parents when there are no blocks.
Schedule assemble_child(const Instance& inst, const ParentMaterial& parents, Rng& rng);

/// Each niche sends a copy of its best to the receivers chosen by the
/// migration policy; the main population receives from all niches. The
/// migrant replaces the receiver's worst member when its total under the
/// receiver's fitness is strictly lower.
void migrate(PopulationSet& set, const Instance& inst, const EngineConfig& cfg);

PopulationSet init_population_set(const Instance& inst, const EngineConfig& cfg,
                                  const CoopConfig& coop, Rng& rng);

/// Steps every niche once in id order, then migrates when due.
void step_population_set(PopulationSet& set, const Instance& inst, const EngineConfig& cfg,
                         const CoopConfig& coop, Rng& rng);

RunReport run_coop(const Instance& inst, const EngineConfig& cfg, const CoopConfig& coop);

}  // namespace roster
