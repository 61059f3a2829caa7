#include "roster/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace roster {

namespace {

struct FeatureName {
  const char* name;
  bool FeatureSet::*flag;
};

constexpr FeatureName kFeatureNames[] = {
    {"dynamic", &FeatureSet::dynamic_weights},
    {"subpops", &FeatureSet::subpops},
    {"migration", &FeatureSet::migration},
    {"incentive", &FeatureSet::incentive},
    {"disincentive", &FeatureSet::disincentive},
    {"localsearch", &FeatureSet::local_search},
    {"swaps", &FeatureSet::swaps},
    {"specialswaps", &FeatureSet::special_swaps},
    {"delta", &FeatureSet::delta},
};

}  // namespace

FeatureSet FeatureSet::parse(std::string_view text) {
  FeatureSet f;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string_view tok = text.substr(pos, comma - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    if (!tok.empty() && tok != "basic") {
      bool known = false;
      for (const FeatureName& fn : kFeatureNames) {
        if (tok == fn.name) {
          f.*(fn.flag) = true;
          known = true;
        }
      }
      if (!known) throw std::invalid_argument("unknown feature '" + std::string(tok) + "'");
    }
    pos = comma + 1;
  }
  return f;
}

std::string FeatureSet::label() const {
  std::string out;
  for (const FeatureName& fn : kFeatureNames) {
    if (this->*(fn.flag)) {
      if (!out.empty()) out += '+';
      out += fn.name;
    }
  }
  return out.empty() ? "basic" : out;
}

const std::vector<Rung>& ladder() {
  static const std::vector<Rung> rungs{Rung::Basic,      Rung::Dynamic, Rung::Subpops,
                                       Rung::Incentives, Rung::Swaps,   Rung::Delta};
  return rungs;
}

const char* rung_name(Rung r) {
  switch (r) {
    case Rung::Basic: return "basic";
    case Rung::Dynamic: return "dynamic";
    case Rung::Subpops: return "subpops";
    case Rung::Incentives: return "incentives";
    case Rung::Swaps: return "swaps";
    case Rung::Delta: return "delta";
  }
  return "?";
}

FeatureSet features_of(Rung r) {
  FeatureSet f;
  const int level = static_cast<int>(r);
  if (level >= static_cast<int>(Rung::Dynamic)) f.dynamic_weights = true;
  if (level >= static_cast<int>(Rung::Subpops)) f.subpops = f.migration = true;
  if (level >= static_cast<int>(Rung::Incentives)) {
    f.incentive = f.disincentive = f.local_search = true;
  }
  if (level >= static_cast<int>(Rung::Swaps)) f.swaps = f.special_swaps = true;
  if (level >= static_cast<int>(Rung::Delta)) f.delta = true;
  return f;
}

namespace {

// Continues a finished run from hypercubes around its best schedule and
// folds the restarted rounds into the report.
void apply_delta(const Instance& inst, const EngineConfig& cfg, const CoopConfig& coop,
                 const DeltaConfig& delta, bool subpops, RunReport& report) {
  Rng rng(cfg.seed ^ 0x9E3779B97F4A7C15ULL);
  const int gens = delta.generations > 0 ? delta.generations : std::max(1, cfg.generations / 2);
  Schedule center = report.best_schedule;
  const GradeSet full = GradeSet::all(inst.grades);
  auto scaled = [&](int size, int round) {
    return std::max(2, static_cast<int>(std::lround(size * std::pow(delta.shrink, round))));
  };

  for (int round = 1; round <= delta.rounds; ++round) {
    FeasibleArchive archive;
    const Population* last = nullptr;
    Population pop;
    PopulationSet set;
    const int offset = report.generations;
    auto fold = [&](const Population& p) {
      archive.observe(p);
      if (archive.found() && !report.generations_to_feasible) {
        report.generations_to_feasible = offset + *archive.first_generation();
      }
    };

    if (!subpops) {
      pop = make_population(inst, delta_restart(inst, center, delta.radius,
                                                scaled(cfg.pop_size, round), rng),
                            cfg, full);
      fold(pop);
      for (int g = 0; g < gens; ++g) {
        pop = step_generation(std::move(pop), inst, cfg, rng);
        fold(pop);
      }
      last = &pop;
    } else {
      set.specs = niche_layout(inst.grades, coop);
      set.migration_period = coop.migration_period;
      set.migration_policy = coop.migration_policy;
      for (SubPopSpec& spec : set.specs) {
        spec.size = scaled(spec.size, round);
        set.pops.push_back(make_population(
            inst, delta_restart(inst, center, delta.radius, spec.size, rng), cfg, spec.grades));
      }
      fold(set.main());
      for (int g = 0; g < gens; ++g) {
        step_population_set(set, inst, cfg, coop, rng);
        fold(set.main());
      }
      last = &set.main();
    }

    report.generations += gens;
    report.final_weight = last->current_weight;
    report.best_total = last->best().eval.total;
    for (const Member& m : last->members) {
      report.best_total = std::min(report.best_total, m.eval.total);
    }
    if (archive.found() &&
        (!report.feasible || archive.best_total() < *report.best_feasible_total)) {
      report.feasible = true;
      report.best_feasible_total = archive.best_total();
      report.best_schedule = archive.best_schedule();
    }
    center = report.feasible ? report.best_schedule : last->best().schedule;
  }
}

}  // namespace

SolverSettings desk_settings() {
  SolverSettings s;
  s.engine.pop_size = 200;
  s.engine.generations = 300;
  s.engine.mutation_rate = 1.0;
  s.engine.elite_fraction = 0.1;
  s.engine.selection_pressure = 1.8;
  s.static_weight = {10.0};
  s.dynamic_weight = {15.0, 10.0};
  s.coop.niche_size = 66;
  s.coop.main_size = 200;
  s.coop.migration_period = 2;
  s.coop.migration_policy = MigrationPolicy::Broadcast;
  s.coop.grade_fraction = 0.25;
  return s;
}

RunReport run_with_features(const Instance& inst, const SolverSettings& settings,
                            const FeatureSet& features, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  EngineConfig cfg = settings.engine;
  cfg.seed = seed;
  if (features.dynamic_weights) {
    cfg.weight_mode = settings.dynamic_weight;
  } else {
    cfg.weight_mode = settings.static_weight;
  }
  cfg.improvement.incentive = features.incentive;
  cfg.improvement.disincentive = features.disincentive;
  cfg.improvement.local_search = features.local_search;
  cfg.improvement.swaps = features.swaps;
  cfg.improvement.special_swaps = features.special_swaps;

  CoopConfig coop = settings.coop;
  if (!features.migration) coop.migration_period = 0;

  RunReport report = features.subpops ? run_coop(inst, cfg, coop) : run_basic(inst, cfg);
  if (features.delta) apply_delta(inst, cfg, coop, settings.delta, features.subpops, report);
  report.features = features.label();
  report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<AggregateRow> aggregate(const std::vector<RunReport>& rows,
                                    const std::vector<std::string>& feature_labels) {
  std::vector<AggregateRow> out;
  for (const std::string& label : feature_labels) {
    AggregateRow agg;
    agg.features = label;
    double feasible_sum = 0.0;
    double gen_sum = 0.0;
    double total_sum = 0.0;
    for (const RunReport& r : rows) {
      if (r.features != label) continue;
      ++agg.runs;
      total_sum += r.best_total;
      agg.generations = std::max(agg.generations, r.generations);
      agg.wall_ms += r.wall_ms;
      if (r.feasible) {
        ++agg.feasible_runs;
        feasible_sum += *r.best_feasible_total;
        gen_sum += *r.generations_to_feasible;
      }
    }
    if (agg.runs > 0) {
      agg.feasibility_rate = static_cast<double>(agg.feasible_runs) / agg.runs;
      agg.mean_best_total = total_sum / agg.runs;
    }
    if (agg.feasible_runs > 0) {
      agg.mean_best_feasible = feasible_sum / agg.feasible_runs;
      agg.mean_generations_to_feasible = gen_sum / agg.feasible_runs;
    }
    out.push_back(agg);
  }
  return out;
}

AblationResult run_experiment(const AblationSpec& spec) {
  if (spec.instances.empty()) throw std::invalid_argument("ablation needs at least one instance");
  if (spec.seeds < 1) throw std::invalid_argument("ablation needs at least one seed");
  if (spec.rungs.empty()) throw std::invalid_argument("ablation needs at least one rung");

  std::vector<FeatureSet> features = spec.rung_features;
  if (features.empty()) {
    for (Rung r : spec.rungs) features.push_back(features_of(r));
  }
  if (features.size() != spec.rungs.size()) {
    throw std::invalid_argument("one feature set per rung required");
  }

  const std::size_t per_instance = static_cast<std::size_t>(spec.seeds) * features.size();
  const std::size_t cells = spec.instances.size() * per_instance;
  std::vector<RunReport> rows(cells);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < cells; c = next++) {
      const std::size_t inst_idx = c / per_instance;
      const std::size_t seed_idx = (c % per_instance) / features.size();
      const std::size_t rung_idx = c % features.size();
      const std::uint64_t seed = spec.base_seed + seed_idx;
      rows[c] = run_with_features(spec.instances[inst_idx], spec.settings, features[rung_idx],
                                  seed);
      if (!spec.record_timing) rows[c].wall_ms = 0.0;
    }
  };
  int threads = spec.threads > 0 ? spec.threads
                                 : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = static_cast<int>(std::min<std::size_t>(threads, cells));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  AblationResult result;
  result.rows = std::move(rows);
  std::vector<std::string> labels;
  for (const FeatureSet& f : features) labels.push_back(f.label());
  result.aggregates = aggregate(result.rows, labels);
  return result;
}

std::vector<Instance> load_instance_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw std::runtime_error("instance directory not found: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".inst" || ext == ".txt")) files.push_back(entry.path());
  }
  if (files.empty()) throw std::runtime_error("no instance files (*.inst, *.txt) in " + dir);
  std::sort(files.begin(), files.end());
  std::vector<Instance> out;
  for (const fs::path& f : files) out.push_back(load_instance(f.string()));
  return out;
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string csv_header() {
  return "instance,seed,features,feasible,best_feasible_total,best_total,gen_to_feasible,"
         "generations,final_weight,wall_ms";
}

std::string csv_row(const RunReport& r) {
  std::ostringstream out;
  out << r.instance << ',' << r.seed << ',' << r.features << ',' << (r.feasible ? 1 : 0) << ','
      << (r.best_feasible_total ? std::to_string(*r.best_feasible_total) : "") << ','
      << num(r.best_total) << ','
      << (r.generations_to_feasible ? std::to_string(*r.generations_to_feasible) : "") << ','
      << r.generations << ',' << num(r.final_weight) << ',' << fixed(r.wall_ms, 3);
  return out.str();
}

std::string to_csv(const AblationResult& result) {
  std::ostringstream out;
  out << csv_header() << '\n';
  for (const RunReport& r : result.rows) out << csv_row(r) << '\n';
  for (const AggregateRow& a : result.aggregates) {
    out << "__aggregate__," << a.runs << ',' << a.features << ',' << fixed(a.feasibility_rate, 4)
        << ',' << (a.mean_best_feasible ? fixed(*a.mean_best_feasible, 4) : "") << ','
        << fixed(a.mean_best_total, 4) << ','
        << (a.mean_generations_to_feasible ? fixed(*a.mean_generations_to_feasible, 2) : "")
        << ',' << a.generations << ",," << fixed(a.wall_ms, 3) << '\n';
  }
  return out.str();
}

}  // namespace roster
