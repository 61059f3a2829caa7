#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "properties.hpp"

namespace {

constexpr int kCases = 10000;

void expect(const props::Outcome& o) {
  INFO(o.name);
  CHECK(o.cases >= kCases);
  CHECK(o.failures == 0);
}

}  // namespace

TEST_CASE("crossover and mutation stay inside F(i)") { expect(props::crossover_mutation_closure(kCases, 101)); }
TEST_CASE("grade segments copied verbatim") { expect(props::grade_segments_verbatim(kCases, 102)); }
TEST_CASE("shift swap invariants") { expect(props::shift_swap_invariants(kCases, 103)); }
TEST_CASE("balanced above unbalanced") { expect(props::ranking_balanced_above_unbalanced(kCases, 104)); }
TEST_CASE("elitism monotonicity") { expect(props::elitism_monotone(kCases, 105)); }
TEST_CASE("run determinism") { expect(props::run_determinism(kCases, 106)); }
TEST_CASE("main fitness is the full objective") { expect(props::main_fitness_is_full_objective(kCases, 107)); }
TEST_CASE("evaluation against the naive model") { expect(props::evaluation_matches_naive(kCases, 108)); }
TEST_CASE("local search never worse") { expect(props::local_search_never_worse(kCases, 109)); }
TEST_CASE("migration sizes and receiver bests") { expect(props::migration_preserves_sizes(kCases, 110)); }
