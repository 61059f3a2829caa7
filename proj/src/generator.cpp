#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "roster/instance.hpp"

namespace roster {

namespace {

// All ways to pick `count` of the 7 weekdays, lexicographic by slot list.
std::vector<SlotVector> week_combinations(int count, int offset) {
  std::vector<SlotVector> out;
  std::vector<bool> pick(kDaySlots, false);
  std::fill(pick.begin(), pick.begin() + count, true);
  do {
    SlotVector cover = SlotVector::Zero();
    for (int d = 0; d < kDaySlots; ++d) {
      if (pick[d]) cover(offset + d) = 1;
    }
    out.push_back(cover);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

void check_spec(const GenSpec& spec) {
  if (spec.nurses < 1) throw std::invalid_argument("generator: need at least one nurse");
  if (spec.grades < 1 || spec.grades > kMaxGrades) {
    throw std::invalid_argument("generator: grade count outside 1.." +
                                std::to_string(kMaxGrades));
  }
  if (spec.hour_types.empty()) throw std::invalid_argument("generator: no hour types");
  double total = 0.0;
  for (const HourType& h : spec.hour_types) {
    if (h.days < 1 || h.days > kDaySlots || h.nights < 1 || h.nights > kDaySlots) {
      throw std::invalid_argument("generator: hour type outside 1..7 shifts");
    }
    if (h.weight < 0.0) throw std::invalid_argument("generator: negative hour-type weight");
    total += h.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("generator: hour-type weights must sum to 1");
  }
  if (!(spec.tightness >= 0.0 && spec.tightness <= 1.0)) {
    throw std::invalid_argument("generator: tightness outside [0, 1]");
  }
  if (spec.pref_spread < 0) throw std::invalid_argument("generator: negative preference spread");
  if (spec.max_feasible < 0) throw std::invalid_argument("generator: negative max_feasible");
}

}  // namespace

GeneratedInstance generate_instance_with_reference(const GenSpec& spec) {
  check_spec(spec);
  std::mt19937_64 rng(spec.seed);

  std::set<int> day_sizes;
  std::set<int> night_sizes;
  for (const HourType& h : spec.hour_types) {
    day_sizes.insert(h.days);
    night_sizes.insert(h.nights);
  }

  Instance inst;
  inst.name = "gen_n" + std::to_string(spec.nurses) + "_p" + std::to_string(spec.grades) + "_s" +
              std::to_string(spec.seed);
  inst.grades = spec.grades;

  // Pattern universe: day blocks by ascending size, then night blocks.
  std::vector<std::pair<int, int>> day_range(kDaySlots + 1, {0, 0});
  std::vector<std::pair<int, int>> night_range(kDaySlots + 1, {0, 0});
  for (int d : day_sizes) {
    const int first = inst.pattern_count();
    for (const SlotVector& c : week_combinations(d, 0)) inst.patterns.push_back({c});
    day_range[d] = {first, inst.pattern_count()};
  }
  for (int t : night_sizes) {
    const int first = inst.pattern_count();
    for (const SlotVector& c : week_combinations(t, kDaySlots)) inst.patterns.push_back({c});
    night_range[t] = {first, inst.pattern_count()};
  }

  std::vector<double> weights;
  for (const HourType& h : spec.hour_types) weights.push_back(h.weight);
  std::discrete_distribution<int> pick_type(weights.begin(), weights.end());
  std::uniform_int_distribution<int> pick_grade(0, spec.grades - 1);

  inst.nurses.resize(spec.nurses);
  for (Nurse& nurse : inst.nurses) {
    nurse.grade = pick_grade(rng);
    const HourType& h = spec.hour_types[pick_type(rng)];
    nurse.days_required = h.days;
    nurse.nights_required = h.nights;
    for (int j = day_range[h.days].first; j < day_range[h.days].second; ++j) {
      nurse.feasible.push_back(j);
    }
    for (int j = night_range[h.nights].first; j < night_range[h.nights].second; ++j) {
      nurse.feasible.push_back(j);
    }
  }

  std::vector<int> reference(spec.nurses);
  for (int i = 0; i < spec.nurses; ++i) {
    const auto& feas = inst.nurses[i].feasible;
    std::uniform_int_distribution<std::size_t> pick(0, feas.size() - 1);
    reference[i] = feas[pick(rng)];
  }

  if (spec.max_feasible > 0) {
    for (int i = 0; i < spec.nurses; ++i) {
      auto& feas = inst.nurses[i].feasible;
      if (static_cast<int>(feas.size()) <= spec.max_feasible) continue;
      std::vector<int> others;
      for (int j : feas) {
        if (j != reference[i]) others.push_back(j);
      }
      std::shuffle(others.begin(), others.end(), rng);
      others.resize(spec.max_feasible - 1);
      others.push_back(reference[i]);
      std::sort(others.begin(), others.end());
      feas = std::move(others);
    }
  }

  inst.pref = Eigen::MatrixXi::Constant(spec.nurses, inst.pattern_count(), kNoPref);
  std::uniform_int_distribution<int> pick_cost(0, spec.pref_spread);
  for (int i = 0; i < spec.nurses; ++i) {
    for (int j : inst.nurses[i].feasible) inst.pref(i, j) = pick_cost(rng);
  }

  SlotGradeTable cover = SlotGradeTable::Zero(kSlots, spec.grades);
  for (int i = 0; i < spec.nurses; ++i) {
    const int g = inst.nurses[i].grade;
    cover.rightCols(spec.grades - g).colwise() += inst.patterns[reference[i]].cover;
  }
  inst.demand = SlotGradeTable::Zero(kSlots, spec.grades);
  for (int s = 0; s < spec.grades; ++s) {
    for (int k = 0; k < kSlots; ++k) {
      inst.demand(k, s) = static_cast<int>(std::lround(spec.tightness * cover(k, s)));
    }
  }
  return {std::move(inst), std::move(reference)};
}

Instance generate_instance(const GenSpec& spec) {
  return generate_instance_with_reference(spec).instance;
}

}  // namespace roster
