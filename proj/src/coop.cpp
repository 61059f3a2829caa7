#include "roster/coop.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace roster {

void CoopConfig::validate() const {
  if (niche_size < 2 || main_size < 2) {
    throw std::invalid_argument("niche and main population sizes must be at least 2");
  }
  if (migration_period < 0) throw std::invalid_argument("migration period must be >= 0");
  if (!(grade_fraction >= 0.0 && grade_fraction <= 1.0)) {
    throw std::invalid_argument("grade fraction outside [0, 1]");
  }
}

std::vector<SubPopSpec> niche_layout(int grades, const CoopConfig& cfg) {
  std::vector<std::uint32_t> masks;
  for (std::uint32_t mask = 1; mask < (1u << grades); ++mask) masks.push_back(mask);
  std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
    return __builtin_popcount(a) < __builtin_popcount(b);
  });
  std::vector<SubPopSpec> specs;
  for (std::uint32_t mask : masks) {
    specs.push_back({static_cast<int>(specs.size()) + 1, GradeSet(mask), cfg.niche_size, false});
  }
  specs.push_back({static_cast<int>(specs.size()) + 1, GradeSet::all(grades), cfg.main_size, true});
  return specs;
}

double sub_fitness(const SubPopSpec& spec, const Instance& inst, const Schedule& s, double weight,
                   PenaltyShape shape) {
  return evaluate_restricted(inst, s, weight, shape, spec.grades).total;
}

namespace {

void cover_from(const std::vector<SubPopSpec>& specs, int niche, GradeSet covered,
                std::vector<int>& blocks, std::vector<std::vector<int>>& out) {
  const GradeSet target = specs[niche].grades;
  if (covered == target) {
    out.push_back(blocks);
    return;
  }
  int lowest = 0;
  while (covered.contains(lowest) || !target.contains(lowest)) ++lowest;
  for (int c = 0; c < niche; ++c) {
    const GradeSet block = specs[c].grades;
    if (specs[c].is_main || !block.contains(lowest)) continue;
    if ((block & target) != block || !(block & covered).empty()) continue;
    blocks.push_back(c);
    cover_from(specs, niche, covered | block, blocks, out);
    blocks.pop_back();
  }
}

}  // namespace

std::vector<std::vector<int>> grade_partitions(const std::vector<SubPopSpec>& specs, int niche) {
  std::vector<std::vector<int>> out;
  std::vector<int> blocks;
  cover_from(specs, niche, GradeSet{}, blocks, out);
  return out;
}

namespace {

struct SetCaches {
  std::vector<std::vector<std::vector<int>>> partitions;
  std::vector<RankSelector> selectors;
};

SetCaches build_caches(const PopulationSet& set, double pressure) {
  SetCaches c;
  for (int idx = 0; idx < static_cast<int>(set.specs.size()); ++idx) {
    c.partitions.push_back(grade_partitions(set.specs, idx));
    c.selectors.emplace_back(set.pops[idx].size(), pressure);
  }
  return c;
}

ParentMaterial pick_with(const PopulationSet& set, const SetCaches& caches, int niche,
                         const Population& self, ParentMode mode, Rng& rng) {
  ParentMaterial pm;
  const RankSelector& own = caches.selectors[niche];
  pm.base = self.members[own(rng)].schedule;
  const auto& partitions = caches.partitions[niche];
  if (mode == ParentMode::Uniform || partitions.empty() || set.specs[niche].uniform_only()) {
    pm.donors.push_back(self.members[own(rng)].schedule);
    pm.donor_niches.push_back(niche);
    return pm;
  }
  std::uniform_int_distribution<std::size_t> pick(0, partitions.size() - 1);
  for (int donor : partitions[pick(rng)]) {
    const Population& from = set.pops[donor];
    pm.donors.push_back(from.members[caches.selectors[donor](rng)].schedule);
    pm.blocks.push_back(set.specs[donor].grades);
    pm.donor_niches.push_back(donor);
  }
  return pm;
}

}  // namespace

ParentMaterial pick_parents(const PopulationSet& set, int niche, const Population& self,
                            ParentMode mode, double pressure, Rng& rng) {
  return pick_with(set, build_caches(set, pressure), niche, self, mode, rng);
}

Schedule assemble_child(const Instance& inst, const ParentMaterial& parents, Rng& rng) {
  if (parents.blocks.empty()) {
    Schedule child = parents.base;
    std::bernoulli_distribution coin(0.5);
    for (int i = 0; i < child.size(); ++i) {
      if (coin(rng)) child[i] = parents.donors.front()[i];
    }
    return child;
  }
  std::vector<int> donor_of_grade(kMaxGrades, -1);
  for (int b = 0; b < static_cast<int>(parents.blocks.size()); ++b) {
    for (int g = 0; g < kMaxGrades; ++g) {
      if (parents.blocks[b].contains(g)) donor_of_grade[g] = b;
    }
  }
  Schedule child = parents.base;
  for (int i = 0; i < child.size(); ++i) {
    const int donor = donor_of_grade[inst.nurses[i].grade];
    if (donor >= 0) child[i] = parents.donors[donor][i];
  }
  return child;
}

void migrate(PopulationSet& set, const Instance& inst, const EngineConfig& cfg) {
  const int count = static_cast<int>(set.specs.size());
  std::vector<Schedule> bests;
  for (const Population& pop : set.pops) bests.push_back(pop.best().schedule);

  for (int from = 0; from < count; ++from) {
    if (set.specs[from].is_main) continue;
    for (int to = 0; to < count; ++to) {
      const bool superset = set.specs[from].grades.is_strict_subset_of(set.specs[to].grades);
      const bool broadcast = set.migration_policy == MigrationPolicy::Broadcast;
      if (to == from || !(superset || set.specs[to].is_main || broadcast)) continue;
      Population& receiver = set.pops[to];
      Member migrant = make_member(inst, bests[from], receiver, cfg.penalty_shape);
      if (migrant.eval.total < receiver.members.back().eval.total) {
        migrant.serial = receiver.next_serial++;
        receiver.members.back() = std::move(migrant);
        rank_population(receiver, cfg.improvement);
      }
    }
  }
}

PopulationSet init_population_set(const Instance& inst, const EngineConfig& cfg,
                                  const CoopConfig& coop, Rng& rng) {
  PopulationSet set;
  set.specs = niche_layout(inst.grades, coop);
  set.migration_period = coop.migration_period;
  set.migration_policy = coop.migration_policy;
  for (const SubPopSpec& spec : set.specs) {
    set.pops.push_back(random_population(inst, spec.size, cfg, spec.grades, rng));
  }
  return set;
}

namespace {

void step_with(PopulationSet& set, const SetCaches& caches, const Instance& inst,
               const EngineConfig& cfg, const CoopConfig& coop, Rng& rng) {
  std::bernoulli_distribution use_grades(coop.grade_fraction);
  for (int idx = 0; idx < static_cast<int>(set.specs.size()); ++idx) {
    const SubPopSpec& spec = set.specs[idx];
    ChildFactory breed = [&](const Population& self, Rng& r) {
      const ParentMode mode = !spec.uniform_only() && use_grades(r) ? ParentMode::GradeBased
                                                                    : ParentMode::Uniform;
      const ParentMaterial parents = pick_with(set, caches, idx, self, mode, r);
      return mutate(assemble_child(inst, parents, r), inst, cfg.mutation_rate, r);
    };
    set.pops[idx] = advance_generation(std::move(set.pops[idx]), inst, cfg, rng, breed,
                                       spec.is_main);
  }
  if (set.migration_period > 0 && set.main().generation % set.migration_period == 0) {
    migrate(set, inst, cfg);
  }
}

}  // namespace

void step_population_set(PopulationSet& set, const Instance& inst, const EngineConfig& cfg,
                         const CoopConfig& coop, Rng& rng) {
  step_with(set, build_caches(set, cfg.selection_pressure), inst, cfg, coop, rng);
}

RunReport run_coop(const Instance& inst, const EngineConfig& cfg, const CoopConfig& coop) {
  cfg.validate();
  coop.validate();
  const auto start = std::chrono::steady_clock::now();
  Rng rng(cfg.seed);

  PopulationSet set = init_population_set(inst, cfg, coop, rng);
  const SetCaches caches = build_caches(set, cfg.selection_pressure);
  FeasibleArchive archive;
  archive.observe(set.main());
  for (int g = 0; g < cfg.generations; ++g) {
    step_with(set, caches, inst, cfg, coop, rng);
    archive.observe(set.main());
  }

  const Population& main = set.main();
  RunReport report;
  report.instance = inst.name;
  report.seed = cfg.seed;
  report.feasible = archive.found();
  if (archive.found()) report.best_feasible_total = archive.best_total();
  report.generations_to_feasible = archive.first_generation();
  report.best_total = main.best().eval.total;
  for (const Member& m : main.members) report.best_total = std::min(report.best_total, m.eval.total);
  report.generations = main.generation;
  report.final_weight = main.current_weight;
  report.best_schedule = archive.found() ? archive.best_schedule() : main.best().schedule;
  report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace roster
