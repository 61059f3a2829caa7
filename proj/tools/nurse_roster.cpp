// Command-line front end: solve, generate, oracle, ablate.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "roster/experiment.hpp"
#include "roster/oracle.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverOptions {
  roster::SolverSettings base = roster::desk_settings();
  int pop = base.engine.pop_size;
  int gens = base.engine.generations;
  std::string crossover = "uniform";
  double mutation = base.engine.mutation_rate;
  double elite = base.engine.elite_fraction;
  std::string penalty = "linear";
  double weight = base.static_weight.weight;
  double alpha = base.dynamic_weight.alpha;
  double vweight = base.dynamic_weight.v;
  double pressure = base.engine.selection_pressure;
  int niche_size = 0;
  int main_size = 0;
  int migration = base.coop.migration_period;
  std::string migration_policy = "broadcast";
  double grade_fraction = base.coop.grade_fraction;
};

void add_solver_options(CLI::App* cmd, SolverOptions& o) {
  cmd->add_option("--pop", o.pop, "Population size (main population for sub-populations)")
      ->capture_default_str();
  cmd->add_option("--gens", o.gens, "Generations")->capture_default_str();
  cmd->add_option("--crossover", o.crossover, "1point|2point|kpoint:K|uniform|grade|mix:F")
      ->capture_default_str();
  cmd->add_option("--mutation", o.mutation, "Mutation probability per offspring")
      ->capture_default_str();
  cmd->add_option("--elite", o.elite, "Elite fraction kept each generation")->capture_default_str();
  cmd->add_option("--penalty", o.penalty, "linear|quadratic")->capture_default_str();
  cmd->add_option("--weight", o.weight, "Static penalty weight")->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "Dynamic weight severity")->capture_default_str();
  cmd->add_option("--vweight", o.vweight, "Dynamic weight once feasible")->capture_default_str();
  cmd->add_option("--pressure", o.pressure, "Linear ranking pressure in [1, 2]")
      ->capture_default_str();
  cmd->add_option("--niche-size", o.niche_size, "Sub-population size (default pop/3)");
  cmd->add_option("--main-size", o.main_size, "Main population size (default pop)");
  cmd->add_option("--migration", o.migration, "Generations between migrations, 0 = never")
      ->capture_default_str();
  cmd->add_option("--migration-policy", o.migration_policy, "superset|broadcast")
      ->capture_default_str();
  cmd->add_option("--grade-fraction", o.grade_fraction,
                  "Share of offspring from cross-niche grade-based assembly")
      ->capture_default_str();
}

roster::CrossoverMode parse_crossover(const std::string& text) {
  if (text == "1point") return roster::KPoint{1};
  if (text == "2point") return roster::KPoint{2};
  if (text == "uniform") return roster::Uniform{};
  if (text == "grade") return roster::GradeBased{};
  try {
    if (text.rfind("kpoint:", 0) == 0) return roster::KPoint{std::stoi(text.substr(7))};
    if (text.rfind("mix:", 0) == 0) return roster::Mix{std::stod(text.substr(4))};
  } catch (const std::exception&) {
  }
  throw UsageError("unknown crossover '" + text + "'");
}

roster::SolverSettings to_settings(const SolverOptions& o) {
  roster::SolverSettings s = o.base;
  s.engine.pop_size = o.pop;
  s.engine.generations = o.gens;
  s.engine.crossover = parse_crossover(o.crossover);
  s.engine.mutation_rate = o.mutation;
  s.engine.elite_fraction = o.elite;
  if (o.penalty == "linear") {
    s.engine.penalty_shape = roster::PenaltyShape::Linear;
  } else if (o.penalty == "quadratic") {
    s.engine.penalty_shape = roster::PenaltyShape::Quadratic;
  } else {
    throw UsageError("unknown penalty shape '" + o.penalty + "'");
  }
  s.engine.selection_pressure = o.pressure;
  s.static_weight = {o.weight};
  s.dynamic_weight = {o.alpha, o.vweight};
  s.coop.main_size = o.main_size > 0 ? o.main_size : o.pop;
  s.coop.niche_size = o.niche_size > 0 ? o.niche_size : std::max(2, o.pop / 3);
  s.coop.migration_period = o.migration;
  s.coop.grade_fraction = o.grade_fraction;
  if (o.migration_policy == "superset") {
    s.coop.migration_policy = roster::MigrationPolicy::SupersetPush;
  } else if (o.migration_policy == "broadcast") {
    s.coop.migration_policy = roster::MigrationPolicy::Broadcast;
  } else {
    throw UsageError("unknown migration policy '" + o.migration_policy + "'");
  }
  s.engine.validate();
  s.coop.validate();
  return s;
}

std::vector<roster::HourType> parse_hours(const std::string& text) {
  std::vector<roster::HourType> out;
  std::stringstream in(text);
  bool weighted = false;
  for (std::string item; std::getline(in, item, ',');) {
    roster::HourType h;
    double w = -1.0;
    char colon = 0;
    char at = 0;
    std::istringstream one(item);
    if (!(one >> h.days >> colon >> h.nights) || colon != ':') {
      throw UsageError("bad hour type '" + item + "', expected DAYS:NIGHTS[@WEIGHT]");
    }
    if (one >> at) {
      if (at != '@' || !(one >> w)) throw UsageError("bad hour weight in '" + item + "'");
      weighted = true;
    }
    h.weight = w;
    out.push_back(h);
  }
  if (out.empty()) throw UsageError("no hour types given");
  for (auto& h : out) {
    if (!weighted) {
      h.weight = 1.0 / static_cast<double>(out.size());
    } else if (h.weight < 0.0) {
      throw UsageError("give a weight for every hour type or for none");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Genetic algorithms for weekly nurse rostering"};
  app.require_subcommand(1);

  std::string instance_path;
  std::uint64_t seed = 1;
  std::string features = "basic";
  SolverOptions solve_opts;
  auto* solve = app.add_subcommand("solve", "Run one GA variant and print a CSV report row");
  solve->add_option("--instance", instance_path, "Instance file")->required();
  solve->add_option("--seed", seed, "RNG seed");
  solve->add_option("--features", features,
                    "Comma list: dynamic,subpops,migration,incentive,disincentive,"
                    "localsearch,swaps,specialswaps,delta");
  add_solver_options(solve, solve_opts);

  std::string out_path;
  roster::GenSpec gen;
  std::string hours = "4:3,3:3";
  auto* generate = app.add_subcommand("generate", "Write a synthetic instance");
  generate->add_option("--out", out_path, "Output instance file")->required();
  generate->add_option("--nurses", gen.nurses, "Nurse count");
  generate->add_option("--grades", gen.grades, "Grade count");
  generate->add_option("--hours", hours, "Hour types DAYS:NIGHTS[@WEIGHT], comma separated");
  generate->add_option("--tightness", gen.tightness, "Demand as a fraction of reference cover");
  generate->add_option("--prefspread", gen.pref_spread, "Maximum preference cost");
  generate->add_option("--seed", gen.seed, "RNG seed");
  generate->add_option("--max-feasible", gen.max_feasible,
                       "Cap on feasible patterns per nurse (0 = all)");

  std::uint64_t limit = roster::kDefaultOracleLimit;
  auto* oracle = app.add_subcommand("oracle", "Exhaustively solve a small instance");
  oracle->add_option("--instance", instance_path, "Instance file")->required();
  oracle->add_option("--limit", limit, "Maximum schedules to enumerate");

  std::string instances_dir;
  int seeds = 10;
  bool timing = false;
  int threads = 0;
  SolverOptions ablate_opts;
  auto* ablate = app.add_subcommand("ablate", "Run the enhancement ladder over a directory");
  ablate->add_option("--instances", instances_dir, "Directory of instance files")->required();
  ablate->add_option("--seeds", seeds, "Seeds per instance");
  ablate->add_option("--out", out_path, "Output CSV file")->required();
  ablate->add_flag("--timing", timing, "Record wall-clock times (output no longer reproducible)");
  ablate->add_option("--threads", threads, "Worker threads (0 = all cores)");
  add_solver_options(ablate, ablate_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*solve) {
      const roster::SolverSettings settings = to_settings(solve_opts);
      const roster::FeatureSet fs = roster::FeatureSet::parse(features);
      const roster::Instance inst = roster::load_instance(instance_path);
      const roster::RunReport report = roster::run_with_features(inst, settings, fs, seed);
      std::cout << roster::csv_header() << '\n' << roster::csv_row(report) << '\n';
    } else if (*generate) {
      gen.hour_types = parse_hours(hours);
      roster::save_instance(roster::generate_instance(gen), out_path);
    } else if (*oracle) {
      const roster::Instance inst = roster::load_instance(instance_path);
      const roster::OracleResult res = roster::oracle_solve(inst, limit);
      switch (res.status) {
        case roster::OracleStatus::Optimal:
          std::cout << "OPTIMAL " << res.eval.pref_cost << "\nASSIGN";
          for (int j : res.best.assign) std::cout << ' ' << j + 1;
          std::cout << "\nENUMERATED " << res.enumerated << '\n';
          break;
        case roster::OracleStatus::Infeasible:
          std::cout << "INFEASIBLE\nENUMERATED " << res.enumerated << '\n';
          break;
        case roster::OracleStatus::TooLarge:
          std::cout << "TOO_LARGE\nSPACE " << res.space << '\n';
          break;
      }
    } else if (*ablate) {
      roster::AblationSpec spec;
      spec.settings = to_settings(ablate_opts);
      spec.instances = roster::load_instance_dir(instances_dir);
      spec.seeds = seeds;
      spec.record_timing = timing;
      spec.threads = threads;
      if (seeds < 1) throw UsageError("--seeds must be at least 1");
      const std::string csv = roster::to_csv(roster::run_experiment(spec));
      std::ofstream out(out_path);
      if (!out) throw std::runtime_error("cannot write " + out_path);
      out << csv;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return 0;
}
