#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roster/coop.hpp"
#include "roster/ga_engine.hpp"
#include "roster/instance.hpp"
#include "roster/report.hpp"

namespace roster {

/// Switches that turn the basic GA into each enhanced variant.
struct FeatureSet {
  bool dynamic_weights = false;
  bool subpops = false;
  bool migration = false;
  bool incentive = false;
  bool disincentive = false;
  bool local_search = false;
  bool swaps = false;
  bool special_swaps = false;
  bool delta = false;

  /// Comma-separated names: dynamic, subpops, migration, incentive,
  /// disincentive, localsearch, swaps, specialswaps, delta. "basic" or an
  /// empty string means none. Throws std::invalid_argument on unknown names.
  static FeatureSet parse(std::string_view text);
  /// Canonical "+"-joined names, or "basic".
  std::string label() const;

  friend bool operator==(const FeatureSet&, const FeatureSet&) = default;
};

/// The cumulative enhancement ladder.
enum class Rung { Basic, Dynamic, Subpops, Incentives, Swaps, Delta };

const std::vector<Rung>& ladder();
const char* rung_name(Rung r);
FeatureSet features_of(Rung r);

/// Restart rounds seeded from a hypercube around the previous best.
struct DeltaConfig {
  int rounds = 2;
  int radius = 3;
  /// Population size factor for restarted rounds.
  double shrink = 0.5;
  /// Generations per restart round; 0 means half the base run.
  int generations = 0;
};

struct SolverSettings {
  /// weight_mode and improvement are overwritten from the feature set.
  EngineConfig engine;
  CoopConfig coop;
  DeltaConfig delta;
  StaticWeight static_weight;
  DynamicWeight dynamic_weight;
};

/// Settings tuned for 30-nurse, 3-grade generated instances on a single
/// core: population 200 over 300 generations. Used as the CLI defaults and by
/// the acceptance suite.
SolverSettings desk_settings();

/// One run of the variant selected by `features`.
RunReport run_with_features(const Instance& inst, const SolverSettings& settings,
                            const FeatureSet& features, std::uint64_t seed);

struct AblationSpec {
  std::vector<Instance> instances;
  int seeds = 10;
  std::uint64_t base_seed = 1;
  std::vector<Rung> rungs = ladder();
  /// Feature set per rung; defaults to features_of(rung).
  std::vector<FeatureSet> rung_features;
  SolverSettings settings;
  /// When false wall_ms is written as 0 so repeated runs are byte-identical.
  bool record_timing = false;
  /// 0 uses the hardware concurrency.
  int threads = 0;
};

struct AggregateRow {
  std::string features;
  int runs = 0;
  int feasible_runs = 0;
  double feasibility_rate = 0.0;
  /// Mean best feasible total over feasible runs only.
  std::optional<double> mean_best_feasible;
  double mean_best_total = 0.0;
  std::optional<double> mean_generations_to_feasible;
  int generations = 0;
  double wall_ms = 0.0;
};

struct AblationResult {
  /// Ordered by (instance, seed, rung).
  std::vector<RunReport> rows;
  std::vector<AggregateRow> aggregates;
};

AblationResult run_experiment(const AblationSpec& spec);

std::vector<AggregateRow> aggregate(const std::vector<RunReport>& rows,
                                    const std::vector<std::string>& feature_labels);

/// Loads every *.inst / *.txt file in `dir` sorted by filename. Throws when
/// the directory is missing or holds no instances; parse errors name the file.
std::vector<Instance> load_instance_dir(const std::string& dir);

std::string csv_header();
std::string csv_row(const RunReport& r);
/// Header, one row per run, then one "__aggregate__" row per rung.
std::string to_csv(const AblationResult& result);

}  // namespace roster
