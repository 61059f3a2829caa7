#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "roster/evaluation.hpp"
#include "support.hpp"

using namespace roster;

namespace {

SlotVector surplus(std::initializer_list<int> days, std::initializer_list<int> nights) {
  SlotVector v;
  int k = 0;
  for (int x : days) v(k++) = x;
  for (int x : nights) v(k++) = x;
  REQUIRE(k == kSlots);
  return v;
}

}  // namespace

TEST_CASE("coverage on tiny1") {
  const Instance inst = testing::tiny1();
  SUBCASE("(1,2,3)") {
    const SlotGradeTable c = coverage_of(inst, testing::sched({1, 2, 3}));
    CHECK(c(0, 1) == 1);
    CHECK(c(1, 1) == 2);
    CHECK(c(7, 1) == 1);
    CHECK(c(7, 0) == 0);
    CHECK(c(0, 0) == 1);
  }
  SUBCASE("(3,3,3)") {
    const SlotGradeTable c = coverage_of(inst, testing::sched({3, 3, 3}));
    for (int k = 0; k < kSlots; ++k) {
      const bool night = k >= 7 && k <= 9;
      CHECK(c(k, 1) == (night ? 3 : 0));
      CHECK(c(k, 0) == (night ? 1 : 0));
    }
  }
}

TEST_CASE("evaluate on tiny1") {
  const Instance inst = testing::tiny1();
  SUBCASE("(1,2,3) linear") {
    const Evaluation ev = evaluate(inst, testing::sched({1, 2, 3}), 10.0, PenaltyShape::Linear);
    CHECK(ev.pref_cost == 0);
    CHECK(ev.shortfalls(7, 0) == 1);
    CHECK(ev.shortfalls.sum() == 1);
    CHECK(ev.violated == 1);
    CHECK(ev.penalty == 10.0);
    CHECK(ev.total == 10.0);
    CHECK_FALSE(ev.feasible);
  }
  SUBCASE("(3,1,3) is feasible with total 4") {
    const Evaluation ev = evaluate(inst, testing::sched({3, 1, 3}), 10.0, PenaltyShape::Linear);
    CHECK(ev.pref_cost == 4);
    CHECK(ev.violated == 0);
    CHECK(ev.penalty == 0.0);
    CHECK(ev.total == 4.0);
    CHECK(ev.feasible);
  }
  SUBCASE("(1,2,3) quadratic") {
    const Evaluation ev =
        evaluate(inst, testing::sched({1, 2, 3}), 10.0, PenaltyShape::Quadratic);
    CHECK(ev.penalty == 10.0);
  }
  SUBCASE("quadratic squares each cell") {
    Instance deep = inst;
    deep.demand(7, 1) = 3;
    const Schedule s = testing::sched({1, 2, 1});
    // Shortfalls: (8,1)=1 and (8,2)=3, plus (1,2) covered.
    const Evaluation lin = evaluate(deep, s, 2.0, PenaltyShape::Linear);
    const Evaluation quad = evaluate(deep, s, 2.0, PenaltyShape::Quadratic);
    CHECK(lin.penalty == 2.0 * (1 + 3));
    CHECK(quad.penalty == 2.0 * (1 + 9));
    CHECK(quad.violated == 2);
  }
}

TEST_CASE("every tiny1 schedule matches the naive recomputation") {
  const Instance inst = testing::tiny1();
  int count = 0;
  for (int a = 1; a <= 4; ++a) {
    for (int b = 1; b <= 4; ++b) {
      for (int c = 1; c <= 4; ++c) {
        const Schedule s = testing::sched({a, b, c});
        for (double w : {0.0, 1.0, 7.0, 10.0}) {
          for (PenaltyShape shape : {PenaltyShape::Linear, PenaltyShape::Quadratic}) {
            const Evaluation ev = evaluate(inst, s, w, shape);
            CHECK(ev.total == testing::naive_total(inst, s, w, shape));
            CHECK(ev.violated == testing::naive_eval(inst, s).violated);
            CHECK(ev.feasible == (ev.violated == 0));
          }
        }
        ++count;
      }
    }
  }
  CHECK(count == 64);
}

TEST_CASE("weight monotonicity and zero weight") {
  const Instance inst = generate_instance(GenSpec{});
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const Schedule s = random_schedule(inst, rng);
    const Evaluation zero = evaluate(inst, s, 0.0, PenaltyShape::Linear);
    CHECK(zero.total == zero.pref_cost);
    double last = zero.total;
    for (double w : {0.5, 1.0, 5.0, 20.0}) {
      const double total = evaluate(inst, s, w, PenaltyShape::Linear).total;
      CHECK(total >= last);
      last = total;
    }
  }
}

TEST_CASE("reweigh matches a fresh evaluation") {
  const Instance inst = generate_instance(GenSpec{});
  Rng rng(6);
  for (int t = 0; t < 50; ++t) {
    const Schedule s = random_schedule(inst, rng);
    Evaluation ev = evaluate(inst, s, 3.0, PenaltyShape::Quadratic);
    reweigh(ev, 11.0, PenaltyShape::Quadratic);
    const Evaluation fresh = evaluate(inst, s, 11.0, PenaltyShape::Quadratic);
    CHECK(ev.total == fresh.total);
    CHECK(ev.penalty == fresh.penalty);
  }
}

TEST_CASE("restricted evaluation") {
  const Instance inst = testing::tiny1();
  const Schedule s = testing::sched({1, 2, 3});
  const Evaluation g1 = evaluate_restricted(inst, s, 10.0, PenaltyShape::Linear, GradeSet::single(0));
  CHECK(g1.total == 10.0);
  const Evaluation g2 = evaluate_restricted(inst, s, 10.0, PenaltyShape::Linear, GradeSet::single(1));
  CHECK(g2.total == 0.0);
  const Evaluation all = evaluate_restricted(inst, s, 10.0, PenaltyShape::Linear, GradeSet::all(2));
  CHECK(all.total == evaluate(inst, s, 10.0, PenaltyShape::Linear).total);
}

TEST_CASE("balance examples") {
  CHECK(classify_surplus(surplus({2, 0, -1, 0, -1, 0, 0}, {0, 0, 0, 0, 0, 0, 0})) ==
        Balance::Balanced);
  CHECK(classify_surplus(surplus({0, 0, 1, 0, 0, 0, 0}, {0, -1, 0, 0, 0, 0, 0})) ==
        Balance::Unbalanced);
  CHECK(classify_surplus(surplus({0, -1, -1, 1, 0, 0, -2}, {0, 0, 2, 0, 2, 0, -1})) ==
        Balance::Neither);
  CHECK(classify_surplus(SlotVector::Zero()) == Balance::Neither);
  CHECK(std::string(to_string(Balance::Balanced)) == "balanced");
}

TEST_CASE("balance reads only the all-nurse row") {
  const Instance inst = testing::tiny1();
  // (1,2,3): all-nurse surplus days [1,2,1,0..] - demand day 1 -> [0,2,1,...],
  // nights [1,1,1,...] - demand night 1 -> [0,1,1,...]: no shortage.
  CHECK(classify_balance(inst, testing::sched({1, 2, 3})) == Balance::Neither);
  // (3,3,3): day 1 short, nights 8-10 over -> Unbalanced.
  CHECK(classify_balance(inst, testing::sched({3, 3, 3})) == Balance::Unbalanced);
  // (4,4,4): night 8 short beside nights 9-11 over, and day 1 short -> Neither.
  CHECK(classify_balance(inst, testing::sched({4, 4, 4})) == Balance::Neither);
  Instance shifted = inst;
  shifted.demand.col(1).setZero();
  shifted.demand(3, 1) = 1;
  // (1,1,1): day 4 short, days 1-3 over, nights untouched -> Balanced.
  CHECK(classify_balance(shifted, testing::sched({1, 1, 1})) == Balance::Balanced);
  const Evaluation ev = evaluate(shifted, testing::sched({1, 1, 1}), 1.0, PenaltyShape::Linear);
  CHECK(ev.balance == Balance::Balanced);
}

TEST_CASE("random schedules") {
  const Instance inst = testing::tiny1();
  Rng a(42), b(42);
  std::set<int> seen;
  for (int t = 0; t < 200; ++t) {
    const Schedule s = random_schedule(inst, a);
    CHECK(s == random_schedule(inst, b));
    CHECK(is_valid(inst, s));
    for (int g : s.assign) seen.insert(g);
  }
  CHECK(seen == std::set<int>{0, 1, 2, 3});

  Instance forced = inst;
  for (int i = 0; i < 3; ++i) forced.nurses[i].feasible = {i};
  Rng c(1);
  CHECK(random_schedule(forced, c) == testing::sched({1, 2, 3}));
}

TEST_CASE("validity check") {
  const Instance inst = testing::tiny1();
  CHECK(is_valid(inst, testing::sched({1, 2, 3})));
  CHECK_FALSE(is_valid(inst, testing::sched({1, 2})));
  CHECK_FALSE(is_valid(inst, testing::sched({1, 2, 5})));
  Instance narrow = inst;
  narrow.nurses[0].feasible = {0, 1};
  narrow.pref(0, 2) = kNoPref;
  narrow.pref(0, 3) = kNoPref;
  CHECK_FALSE(is_valid(narrow, testing::sched({3, 2, 3})));
}
