#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "roster/experiment.hpp"
#include "roster/oracle.hpp"
#include "support.hpp"

using namespace roster;
using testing::sched;

namespace {

std::string tiny1_with(const std::string& extra_demand) {
  std::string text = testing::kTiny1;
  text.insert(text.find("END"), extra_demand + "\n");
  return text;
}

Instance tiny_generated(std::uint64_t seed) {
  GenSpec g;
  g.nurses = 5;
  g.grades = 2;
  g.max_feasible = 4;
  g.seed = seed;
  return generate_instance(g);
}

SolverSettings quick_settings() {
  SolverSettings s = desk_settings();
  s.engine.pop_size = 12;
  s.engine.generations = 8;
  s.coop.niche_size = 6;
  s.coop.main_size = 12;
  return s;
}

int count_lines(const std::string& text) {
  return static_cast<int>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("oracle on tiny1") {
  const OracleResult r = oracle_solve(testing::tiny1());
  CHECK(r.status == OracleStatus::Optimal);
  CHECK(r.best == sched({3, 1, 3}));
  CHECK(r.eval.total == 4.0);
  CHECK(r.eval.pref_cost == 4);
  CHECK(r.enumerated == 64);
  CHECK(r.space == 64);
}

TEST_CASE("oracle infeasible and too large") {
  const OracleResult inf = oracle_solve(parse_instance(tiny1_with("DEMAND 14 1 1")));
  CHECK(inf.status == OracleStatus::Infeasible);
  CHECK(inf.enumerated == 64);

  const OracleResult big = oracle_solve(generate_instance(GenSpec{}));
  CHECK(big.status == OracleStatus::TooLarge);
  CHECK(big.enumerated == 0);

  CHECK(oracle_solve(testing::tiny1(), 63).status == OracleStatus::TooLarge);
  CHECK(oracle_solve(testing::tiny1(), 64).status == OracleStatus::Optimal);
}

TEST_CASE("oracle agrees with a naive scan") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance inst = tiny_generated(seed);
    const OracleResult r = oracle_solve(inst);
    REQUIRE(r.status == OracleStatus::Optimal);
    // Independent enumeration in plain loops.
    int best = -1;
    std::vector<int> digit(inst.nurse_count(), 0);
    for (;;) {
      Schedule s;
      for (int i = 0; i < inst.nurse_count(); ++i) {
        std::vector<int> f = inst.nurses[i].feasible;
        std::sort(f.begin(), f.end());
        s.assign.push_back(f[digit[i]]);
      }
      const testing::Naive n = testing::naive_eval(inst, s);
      if (n.violated == 0 && (best < 0 || n.pref < best)) best = n.pref;
      int pos = inst.nurse_count() - 1;
      while (pos >= 0 && ++digit[pos] == static_cast<int>(inst.nurses[pos].feasible.size())) {
        digit[pos--] = 0;
      }
      if (pos < 0) break;
    }
    CHECK(r.eval.total == best);
  }
}

TEST_CASE("feature sets and the ladder") {
  CHECK(FeatureSet::parse("basic") == FeatureSet{});
  CHECK(FeatureSet::parse("") == FeatureSet{});
  const FeatureSet f = FeatureSet::parse("swaps, dynamic");
  CHECK(f.swaps);
  CHECK(f.dynamic_weights);
  CHECK(f.label() == "dynamic+swaps");
  CHECK_THROWS_AS(FeatureSet::parse("dynamic,teleport"), std::invalid_argument);

  REQUIRE(ladder().size() == 6);
  FeatureSet prev;
  int prev_count = 0;
  for (Rung r : ladder()) {
    const FeatureSet cur = features_of(r);
    int count = 0;
    for (bool b : {cur.dynamic_weights, cur.subpops, cur.migration, cur.incentive, cur.disincentive,
                   cur.local_search, cur.swaps, cur.special_swaps, cur.delta}) {
      count += b;
    }
    // Cumulative: everything on the previous rung stays on.
    CHECK((!prev.dynamic_weights || cur.dynamic_weights));
    CHECK((!prev.subpops || cur.subpops));
    CHECK((!prev.incentive || cur.incentive));
    CHECK((!prev.swaps || cur.swaps));
    if (r != Rung::Basic) CHECK(count > prev_count);
    prev = cur;
    prev_count = count;
  }
  CHECK(features_of(Rung::Basic).label() == "basic");
  CHECK(features_of(Rung::Delta).label() ==
        "dynamic+subpops+migration+incentive+disincentive+localsearch+swaps+specialswaps+delta");
}

TEST_CASE("experiment rows, aggregates and CSV") {
  AblationSpec spec;
  for (std::uint64_t s = 1; s <= 2; ++s) spec.instances.push_back(tiny_generated(s));
  spec.seeds = 2;
  spec.settings = quick_settings();
  spec.threads = 2;
  const AblationResult res = run_experiment(spec);
  CHECK(res.rows.size() == 2 * 2 * 6);
  CHECK(res.aggregates.size() == 6);
  CHECK(res.rows[0].instance == spec.instances[0].name);
  CHECK(res.rows[0].seed == 1);
  CHECK(res.rows[0].features == "basic");
  CHECK(res.rows[6].seed == 2);
  CHECK(res.rows[1].features == "dynamic");

  const std::string csv = to_csv(res);
  CHECK(count_lines(csv) == 1 + 24 + 6);
  CHECK(csv.rfind(csv_header() + "\n", 0) == 0);
  CHECK(csv.find("__aggregate__,4,basic,") != std::string::npos);

  spec.threads = 1;
  CHECK(to_csv(run_experiment(spec)) == csv);

  for (const RunReport& r : res.rows) {
    CHECK(r.wall_ms == 0.0);
    CHECK(r.feasible == r.best_feasible_total.has_value());
    if (r.feasible) {
      const OracleResult o = oracle_solve(spec.instances[r.instance == spec.instances[0].name ? 0 : 1]);
      CHECK(*r.best_feasible_total >= o.eval.total);
    }
  }
}

TEST_CASE("aggregates") {
  RunReport a, b, c;
  a.features = b.features = c.features = "basic";
  a.feasible = true;
  a.best_feasible_total = 10;
  a.best_total = 10;
  a.generations_to_feasible = 4;
  b.feasible = true;
  b.best_feasible_total = 20;
  b.best_total = 20;
  b.generations_to_feasible = 6;
  c.best_total = 50;
  const auto agg = aggregate({a, b, c}, {"basic"});
  REQUIRE(agg.size() == 1);
  CHECK(agg[0].runs == 3);
  CHECK(agg[0].feasible_runs == 2);
  CHECK(agg[0].feasibility_rate == doctest::Approx(2.0 / 3));
  CHECK(*agg[0].mean_best_feasible == 15.0);
  CHECK(agg[0].mean_best_total == doctest::Approx(80.0 / 3));
  CHECK(*agg[0].mean_generations_to_feasible == 5.0);
}

TEST_CASE("CSV row format") {
  RunReport r;
  r.instance = "x";
  r.seed = 3;
  r.features = "dynamic";
  r.best_total = 12.5;
  r.generations = 9;
  r.final_weight = 15;
  r.wall_ms = 1.23456;
  CHECK(csv_row(r) == "x,3,dynamic,0,,12.5,,9,15,1.235");
  r.feasible = true;
  r.best_feasible_total = 12;
  r.generations_to_feasible = 2;
  CHECK(csv_row(r) == "x,3,dynamic,1,12,12.5,2,9,15,1.235");
  CHECK(csv_header() ==
        "instance,seed,features,feasible,best_feasible_total,best_total,gen_to_feasible,"
        "generations,final_weight,wall_ms");
}

TEST_CASE("instance directories") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "roster_test_dir";
  fs::remove_all(dir);
  fs::create_directories(dir);
  CHECK_THROWS(load_instance_dir(dir.string()));
  CHECK_THROWS(load_instance_dir((dir / "missing").string()));

  save_instance(tiny_generated(2), (dir / "b.inst").string());
  save_instance(testing::tiny1(), (dir / "a.inst").string());
  std::ofstream(dir / "notes.md") << "ignored\n";
  const auto loaded = load_instance_dir(dir.string());
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].name == "tiny1");

  std::ofstream(dir / "c.txt") << "PROBLEM broken\nNURSES x\n";
  try {
    load_instance_dir(dir.string());
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("c.txt") != std::string::npos);
  }
  fs::remove_all(dir);
}

TEST_CASE("run_with_features dispatch") {
  const Instance inst = testing::tiny1();
  SolverSettings s = quick_settings();
  s.engine.generations = 20;
  const RunReport basic = run_with_features(inst, s, FeatureSet{}, 5);
  CHECK(basic.features == "basic");
  CHECK(basic.final_weight == s.static_weight.weight);
  const RunReport dyn = run_with_features(inst, s, FeatureSet::parse("dynamic"), 5);
  CHECK(dyn.feasible);
  CHECK(dyn.final_weight == s.dynamic_weight.v);
  const RunReport delta = run_with_features(inst, s, features_of(Rung::Delta), 5);
  CHECK(delta.generations == 20 + s.delta.rounds * 10);
  CHECK(delta.best_feasible_total == 4);
}
