#include "roster/ga_engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace roster {

void EngineConfig::validate() const {
  if (pop_size < 2) throw std::invalid_argument("population size must be at least 2");
  if (generations < 0) throw std::invalid_argument("generations must be non-negative");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
    throw std::invalid_argument("mutation rate outside [0, 1]");
  }
  if (!(elite_fraction >= 0.0 && elite_fraction < 1.0)) {
    throw std::invalid_argument("elite fraction outside [0, 1)");
  }
  if (!(selection_pressure >= 1.0 && selection_pressure <= 2.0)) {
    throw std::invalid_argument("selection pressure outside [1, 2]");
  }
  if (const auto* k = std::get_if<KPoint>(&crossover); k && k->k < 1) {
    throw std::invalid_argument("k-point crossover needs k >= 1");
  }
  if (const auto* mix = std::get_if<Mix>(&crossover);
      mix && !(mix->grade_fraction >= 0.0 && mix->grade_fraction <= 1.0)) {
    throw std::invalid_argument("grade fraction outside [0, 1]");
  }
  if (const auto* w = std::get_if<StaticWeight>(&weight_mode); w && !(w->weight >= 0.0)) {
    throw std::invalid_argument("static penalty weight must be non-negative");
  }
  if (const auto* d = std::get_if<DynamicWeight>(&weight_mode);
      d && !(d->alpha > 0.0 && d->v > 0.0)) {
    throw std::invalid_argument("dynamic weight needs alpha > 0 and v > 0");
  }
}

GradeBoundaries GradeBoundaries::of(const Instance& inst) {
  GradeBoundaries b;
  b.order.resize(inst.nurses.size());
  std::iota(b.order.begin(), b.order.end(), 0);
  std::stable_sort(b.order.begin(), b.order.end(), [&](int x, int y) {
    return inst.nurses[x].grade < inst.nurses[y].grade;
  });
  for (int pos = 0; pos < static_cast<int>(b.order.size()); ++pos) {
    const int g = inst.nurses[b.order[pos]].grade;
    if (b.grades.empty() || b.grades.back() != g) {
      b.cuts.push_back(pos);
      b.grades.push_back(g);
    }
  }
  b.cuts.push_back(static_cast<int>(b.order.size()));
  return b;
}

double rank_probability(int rank, int n, double pressure) {
  if (n == 1) return 1.0;
  return (pressure - (2.0 * pressure - 2.0) * rank / (n - 1.0)) / n;
}

RankSelector::RankSelector(int n, double pressure) {
  if (n < 1) throw std::invalid_argument("rank selection from an empty population");
  cumulative_.resize(n);
  double acc = 0.0;
  for (int r = 0; r < n; ++r) {
    acc += rank_probability(r, n, pressure);
    cumulative_[r] = acc;
  }
}

int RankSelector::operator()(Rng& rng) const {
  std::uniform_real_distribution<double> u(0.0, cumulative_.back());
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u(rng));
  return static_cast<int>(std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                                   static_cast<std::ptrdiff_t>(cumulative_.size()) - 1));
}

const Member& rank_select(const Population& pop, double pressure, Rng& rng) {
  if (pop.members.empty()) throw std::invalid_argument("rank selection from an empty population");
  return pop.members[RankSelector(pop.size(), pressure)(rng)];
}

Schedule crossover_at_cuts(const Schedule& p1, const Schedule& p2, const std::vector<int>& cuts) {
  Schedule child = p1;
  bool from_second = false;
  std::size_t next_cut = 0;
  for (int i = 0; i < child.size(); ++i) {
    while (next_cut < cuts.size() && cuts[next_cut] == i) {
      from_second = !from_second;
      ++next_cut;
    }
    if (from_second) child[i] = p2[i];
  }
  return child;
}

Schedule grade_crossover(const Schedule& p1, const Schedule& p2, const GradeBoundaries& bounds,
                         const std::vector<int>& picks) {
  Schedule child = p1;
  for (int seg = 0; seg < bounds.segment_count(); ++seg) {
    if (picks[seg] == 0) continue;
    for (int pos = bounds.cuts[seg]; pos < bounds.cuts[seg + 1]; ++pos) {
      const int nurse = bounds.order[pos];
      child[nurse] = p2[nurse];
    }
  }
  return child;
}

namespace {

Schedule uniform_crossover(const Schedule& p1, const Schedule& p2, Rng& rng) {
  Schedule child = p1;
  std::bernoulli_distribution coin(0.5);
  for (int i = 0; i < child.size(); ++i) {
    if (coin(rng)) child[i] = p2[i];
  }
  return child;
}

Schedule random_grade_crossover(const Schedule& p1, const Schedule& p2,
                                const GradeBoundaries& bounds, Rng& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<int> picks(bounds.segment_count());
  for (int& pick : picks) pick = coin(rng) ? 1 : 0;
  return grade_crossover(p1, p2, bounds, picks);
}

}  // namespace

Schedule crossover(const Schedule& p1, const Schedule& p2, const CrossoverMode& mode,
                   const GradeBoundaries& bounds, Rng& rng) {
  if (const auto* kp = std::get_if<KPoint>(&mode)) {
    const int n = p1.size();
    if (kp->k >= n) {
      throw std::invalid_argument("k-point crossover needs k < string length");
    }
    std::vector<int> positions(n - 1);
    std::iota(positions.begin(), positions.end(), 1);
    std::shuffle(positions.begin(), positions.end(), rng);
    positions.resize(kp->k);
    std::sort(positions.begin(), positions.end());
    return crossover_at_cuts(p1, p2, positions);
  }
  if (std::holds_alternative<Uniform>(mode)) return uniform_crossover(p1, p2, rng);
  if (std::holds_alternative<GradeBased>(mode)) {
    return random_grade_crossover(p1, p2, bounds, rng);
  }
  const auto& mix = std::get<Mix>(mode);
  std::bernoulli_distribution use_grades(mix.grade_fraction);
  if (use_grades(rng)) return random_grade_crossover(p1, p2, bounds, rng);
  return uniform_crossover(p1, p2, rng);
}

Schedule mutate(const Schedule& s, const Instance& inst, double rate, Rng& rng) {
  std::bernoulli_distribution fire(rate);
  if (!fire(rng)) return s;
  Schedule out = s;
  std::uniform_int_distribution<int> pick_nurse(0, s.size() - 1);
  const int i = pick_nurse(rng);
  const auto& feas = inst.nurses[i].feasible;
  std::uniform_int_distribution<std::size_t> pick_pattern(0, feas.size() - 1);
  out[i] = feas[pick_pattern(rng)];
  return out;
}

double dynamic_weight(int q_best, double alpha, double v) {
  return q_best > 0 ? alpha * q_best : v;
}

int elite_count(int pop_size, double elite_fraction) {
  // Guard against 0.25 * 4 landing a hair above 1.
  return static_cast<int>(std::ceil(elite_fraction * pop_size - 1e-9));
}

namespace {

bool ranks_before(const Member& a, const Member& b) {
  if (a.score != b.score) return a.score < b.score;
  if (a.eval.feasible != b.eval.feasible) return a.eval.feasible;
  if (a.eval.pref_cost != b.eval.pref_cost) return a.eval.pref_cost < b.eval.pref_cost;
  return a.serial < b.serial;
}

double spread_of(const std::vector<Member>& a, const std::vector<Member>& b = {}) {
  double lo = 0.0;
  double hi = 0.0;
  bool any = false;
  for (const auto* group : {&a, &b}) {
    for (const Member& m : *group) {
      if (!any) {
        lo = hi = m.eval.total;
        any = true;
      }
      lo = std::min(lo, m.eval.total);
      hi = std::max(hi, m.eval.total);
    }
  }
  return hi - lo;
}

}  // namespace

void rank_population(Population& pop, const IncentiveConfig& incentives) {
  const double spread = spread_of(pop.members);
  for (Member& m : pop.members) m.score = ranking_score(m.eval, spread, incentives);
  std::sort(pop.members.begin(), pop.members.end(), ranks_before);
}

Population replace_elitist(const Population& old, std::vector<Member> offspring,
                           double elite_fraction, const IncentiveConfig& incentives) {
  const int n = old.size();
  const int elites = std::min(elite_count(n, elite_fraction), n);
  if (static_cast<int>(offspring.size()) < n - elites) {
    throw std::invalid_argument("not enough offspring to refill the population");
  }
  const double spread = spread_of(old.members, offspring);
  for (Member& m : offspring) m.score = ranking_score(m.eval, spread, incentives);
  std::sort(offspring.begin(), offspring.end(), ranks_before);

  Population next;
  next.generation = old.generation;
  next.current_weight = old.current_weight;
  next.fitness = old.fitness;
  next.next_serial = old.next_serial;
  next.members.reserve(n);
  next.members.insert(next.members.end(), old.members.begin(), old.members.begin() + elites);
  for (int i = 0; i < n - elites; ++i) next.members.push_back(std::move(offspring[i]));
  rank_population(next, incentives);
  return next;
}

Member make_member(const Instance& inst, Schedule s, const Population& pop, PenaltyShape shape) {
  Member m;
  m.eval = evaluate_restricted(inst, s, pop.current_weight, shape, pop.fitness);
  m.score = m.eval.total;
  m.schedule = std::move(s);
  return m;
}

double initial_weight(const WeightMode& mode) {
  if (const auto* w = std::get_if<StaticWeight>(&mode)) return w->weight;
  return std::get<DynamicWeight>(mode).v;
}

Population make_population(const Instance& inst, std::vector<Schedule> schedules,
                           const EngineConfig& cfg, GradeSet fitness) {
  Population pop;
  pop.fitness = fitness;
  pop.current_weight = initial_weight(cfg.weight_mode);
  pop.members.reserve(schedules.size());
  for (Schedule& s : schedules) {
    Member m = make_member(inst, std::move(s), pop, cfg.penalty_shape);
    m.serial = pop.next_serial++;
    pop.members.push_back(std::move(m));
  }
  rank_population(pop, cfg.improvement);
  return pop;
}

Population random_population(const Instance& inst, int size, const EngineConfig& cfg,
                             GradeSet fitness, Rng& rng) {
  std::vector<Schedule> schedules;
  schedules.reserve(size);
  for (int i = 0; i < size; ++i) schedules.push_back(random_schedule(inst, rng));
  return make_population(inst, std::move(schedules), cfg, fitness);
}

Population advance_generation(Population pop, const Instance& inst, const EngineConfig& cfg,
                              Rng& rng, const ChildFactory& make_child, bool apply_hooks) {
  if (const auto* d = std::get_if<DynamicWeight>(&cfg.weight_mode)) {
    pop.current_weight = dynamic_weight(pop.best().eval.violated, d->alpha, d->v);
  }
  for (Member& m : pop.members) reweigh(m.eval, pop.current_weight, cfg.penalty_shape);
  rank_population(pop, cfg.improvement);

  if (apply_hooks && cfg.improvement.any_hook()) {
    Schedule improved = improve_top(inst, pop.best().schedule, pop.current_weight,
                                    cfg.penalty_shape, cfg.improvement);
    if (improved != pop.best().schedule) {
      Member m = make_member(inst, std::move(improved), pop, cfg.penalty_shape);
      m.serial = pop.next_serial++;
      pop.members.front() = std::move(m);
      rank_population(pop, cfg.improvement);
    }
  }

  const int n = pop.size();
  const int children = n - std::min(elite_count(n, cfg.elite_fraction), n);
  std::vector<Member> offspring;
  offspring.reserve(children);
  for (int c = 0; c < children; ++c) {
    Member m = make_member(inst, make_child(pop, rng), pop, cfg.penalty_shape);
    m.serial = pop.next_serial++;
    offspring.push_back(std::move(m));
  }
  Population next = replace_elitist(pop, std::move(offspring), cfg.elite_fraction,
                                    cfg.improvement);
  next.generation = pop.generation + 1;
  return next;
}

Population step_generation(Population pop, const Instance& inst, const EngineConfig& cfg,
                           Rng& rng) {
  const GradeBoundaries bounds = GradeBoundaries::of(inst);
  std::optional<RankSelector> select;
  ChildFactory breed = [&](const Population& self, Rng& r) {
    if (!select) select.emplace(self.size(), cfg.selection_pressure);
    const Schedule& a = self.members[(*select)(r)].schedule;
    const Schedule& b = self.members[(*select)(r)].schedule;
    return mutate(crossover(a, b, cfg.crossover, bounds, r), inst, cfg.mutation_rate, r);
  };
  return advance_generation(std::move(pop), inst, cfg, rng, breed, true);
}

void FeasibleArchive::observe(const Population& pop) {
  for (const Member& m : pop.members) {
    if (!m.eval.feasible) continue;
    if (!first_gen_) first_gen_ = pop.generation;
    if (!best_ || m.eval.pref_cost < *best_ ||
        (m.eval.pref_cost == *best_ && m.schedule < schedule_)) {
      best_ = m.eval.pref_cost;
      schedule_ = m.schedule;
    }
  }
}

RunReport run_basic(const Instance& inst, const EngineConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  Rng rng(cfg.seed);
  const GradeSet full = GradeSet::all(inst.grades);

  Population pop = random_population(inst, cfg.pop_size, cfg, full, rng);
  FeasibleArchive archive;
  archive.observe(pop);
  for (int g = 0; g < cfg.generations; ++g) {
    pop = step_generation(std::move(pop), inst, cfg, rng);
    archive.observe(pop);
  }

  RunReport report;
  report.instance = inst.name;
  report.seed = cfg.seed;
  report.feasible = archive.found();
  if (archive.found()) report.best_feasible_total = archive.best_total();
  report.generations_to_feasible = archive.first_generation();
  report.best_total = pop.best().eval.total;
  for (const Member& m : pop.members) report.best_total = std::min(report.best_total, m.eval.total);
  report.generations = pop.generation;
  report.final_weight = pop.current_weight;
  report.best_schedule = archive.found() ? archive.best_schedule() : pop.best().schedule;
  report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<Schedule> delta_restart(const Instance& inst, const Schedule& best, int radius,
                                    int pop_size, Rng& rng) {
  if (radius < 0) throw std::invalid_argument("hypercube radius must be non-negative");
  std::vector<Schedule> out;
  out.reserve(pop_size);
  for (int c = 0; c < pop_size; ++c) {
    Schedule s = best;
    for (int i = 0; i < s.size(); ++i) {
      const auto& feas = inst.nurses[i].feasible;
      const int size = static_cast<int>(feas.size());
      const int pos = static_cast<int>(std::find(feas.begin(), feas.end(), best[i]) - feas.begin());
      const int lo = std::max(0, pos - radius);
      const int hi = std::min(size - 1, pos + radius);
      std::uniform_int_distribution<int> pick(lo, hi);
      s[i] = feas[pick(rng)];
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace roster
