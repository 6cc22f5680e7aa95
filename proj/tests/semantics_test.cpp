#include <random>

#include <gtest/gtest.h>

#include "bca/automaton_io.hpp"
#include "bca/epsilon.hpp"
#include "bca/liminf_automaton.hpp"
#include "bca/semantics.hpp"
#include "support.hpp"

using namespace bca;

namespace {

const BlindCounterAutomaton& liminf() {
  static const auto a = build_liminf_automaton();
  return a;
}

const BlindCounterAutomaton& liminf_ef() {
  static const auto a = eliminate_epsilon(build_liminf_automaton());
  return a;
}

Configuration at(const BlindCounterAutomaton& a, std::string_view state, std::int64_t c) {
  return {a.require_state(state), {c}};
}

}  // namespace

TEST(StepAll, DecrementDisabledAtZero) {
  const auto& a = liminf();
  EXPECT_EQ(step_all(a, at(a, "G", 0), "a"), (std::set<Configuration>{at(a, "Wa", 0)}));
  EXPECT_EQ(step_all(a, at(a, "G", 3), "a"), (std::set<Configuration>{at(a, "Wa", 3), at(a, "Ma", 2)}));
  EXPECT_THROW(step_all(a, at(a, "G", 0), "c"), Error);
}

TEST(StepAll, NeverProducesNegativeCounters) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = bca::testing::random_automaton(rng, 5);
    for (StateId q = 0; q < a.states().size(); ++q)
      for (std::int64_t c = 0; c < 3; ++c)
        for (const char* l : {"a", "b"})
          for (const auto& next : step_all(a, {q, {c}}, l)) EXPECT_GE(next.counters[0], 0);
  }
}

TEST(ReachableAfter, FollowsEpsilonMoves) {
  const auto& a = liminf();
  const auto after = reachable_after(a, "ab");
  EXPECT_TRUE(after.contains(at(a, "G", 1)));   // N = 1, then wait through the block
  EXPECT_TRUE(after.contains(at(a, "Ib", 2)));  // still incrementing
  EXPECT_FALSE(after.contains(at(a, "F", 0)));
}

TEST(Trace, Format) {
  const auto& a = liminf_ef();
  const auto r = oracle_accept(a, parse_lasso("|ab"), {8, 200});
  ASSERT_TRUE(r.witness);
  const auto lines = format_trace(a, *r.witness);
  ASSERT_FALSE(lines.empty());
  EXPECT_EQ(lines[0].substr(0, 6), "I 0 0 ");
  EXPECT_NE(std::find(lines.begin(), lines.end(), "CYCLE-START"), lines.end());
}

TEST(Oracle, AcceptsAbWithAReplayableWitness) {
  const auto& a = liminf_ef();
  const auto w = parse_lasso("|ab");
  const auto r = oracle_accept(a, w, {8, 200});
  EXPECT_EQ(r.verdict, OracleVerdict::accept);
  EXPECT_TRUE(r.conclusive());
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(check_lasso_run(a, w, *r.witness), "");
}

// Every used (1,1) block nets zero, so the run uses every block after the first; the cycle
// reads one block and passes through the accepting mark.
TEST(Oracle, AbWitnessUsesEveryBlockAfterTheFirst) {
  const auto& a = liminf();
  const auto w = parse_lasso("|ab");
  const auto r = oracle_accept(a, w, {8, 200});
  ASSERT_TRUE(r.witness);
  const auto& run = *r.witness;
  EXPECT_EQ(check_lasso_run(a, w, run), "");
  std::size_t letters = 0, visits_f = 0;
  for (std::size_t i = run.cycle_start; i < run.steps.size(); ++i) {
    const auto& t = a.transitions()[run.steps[i].transition];
    if (!t.is_epsilon()) ++letters;
    if (a.state_name(t.target) == "F") ++visits_f;
  }
  EXPECT_EQ(letters, 2u);
  EXPECT_EQ(visits_f, 1u);
}

// The initial increment loop runs forever on any word, so the cap is always reached; see the
// decisions ledger. Raising the caps never turns the verdict into accept.
TEST(Oracle, RejectsAabWithinCaps) {
  const auto& a = liminf_ef();
  const auto w = parse_lasso("|aab");
  const auto r = oracle_accept(a, w, {12, 400});
  EXPECT_EQ(r.verdict, OracleVerdict::reject_within_caps);
  EXPECT_FALSE(r.frontier_hit);
  EXPECT_TRUE(r.cap_touched);
  for (std::int64_t cap : {4, 16, 24}) EXPECT_FALSE(oracle_accept(a, w, {cap, 2000}).accepted());
}

TEST(Oracle, RejectsWordsOutsideZ) {
  const auto& a = liminf_ef();
  for (std::int64_t cap : {0, 3, 10})
    for (std::size_t depth : {10u, 100u, 1000u}) EXPECT_FALSE(oracle_accept(a, parse_lasso("|a"), {cap, depth}).accepted());
}

TEST(Oracle, InconclusiveWhenTheDepthRunsOut) {
  const auto r = oracle_accept(liminf_ef(), parse_lasso("|aab"), {12, 3});
  EXPECT_EQ(r.verdict, OracleVerdict::inconclusive);
  EXPECT_TRUE(r.frontier_hit);
  EXPECT_FALSE(r.conclusive());
}

TEST(Oracle, RaisingCapsNeverLosesAnAccept) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 150; ++trial) {
    const auto a = bca::testing::random_automaton(rng, 4);
    const auto w = bca::testing::random_lasso(rng, 2, 4);
    bool accepted = false;
    for (std::int64_t cap = 0; cap <= 6; cap += 2) {
      const bool now = oracle_accept(a, w, {cap, 400}).accepted();
      EXPECT_TRUE(now || !accepted);
      accepted = now;
    }
  }
}

TEST(Oracle, AgreesWithTheNaiveReference) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = bca::testing::random_automaton(rng, 4);
    const auto w = bca::testing::random_lasso(rng, 2, 3);
    const std::int64_t cap = 4;
    const auto r = oracle_accept(a, w, {cap, 100000});
    const auto naive = bca::testing::naive_accepts(a, w, cap);
    ASSERT_FALSE(r.frontier_hit);
    if (naive.has_value()) {
      EXPECT_EQ(r.accepted(), *naive) << format_automaton(a) << to_string(w);
      if (!*naive) {
        EXPECT_FALSE(r.cap_touched);
      }
    } else {
      EXPECT_FALSE(r.accepted());
      EXPECT_TRUE(r.cap_touched);
    }
    if (r.witness) {
      EXPECT_EQ(check_lasso_run(a, w, *r.witness), "");
    }
  }
}

TEST(Oracle, WitnessesReplayOnRandomAutomata) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = bca::testing::random_automaton(rng, 5);
    const auto w = bca::testing::random_lasso(rng, 3, 4);
    const auto r = oracle_accept(a, w, {6, 500});
    if (r.witness) {
      EXPECT_EQ(check_lasso_run(a, w, *r.witness), "") << to_string(w);
    }
  }
}

TEST(CheckLassoRun, RejectsBrokenRuns) {
  const auto& a = liminf_ef();
  const auto w = parse_lasso("|ab");
  const auto good = *oracle_accept(a, w, {8, 200}).witness;
  auto wrong_letter = good;
  EXPECT_NE(check_lasso_run(a, parse_lasso("|ba"), wrong_letter), "");
  auto no_cycle = good;
  no_cycle.cycle_start = no_cycle.steps.size();
  EXPECT_NE(check_lasso_run(a, w, no_cycle), "");
  auto bad_counter = good;
  bad_counter.steps.back().config.counters[0] += 1;
  EXPECT_NE(check_lasso_run(a, w, bad_counter), "");
}

TEST(EnumerateAcceptingRuns, Examples) {
  const auto& a = liminf_ef();
  const auto runs = enumerate_accepting_runs(a, parse_lasso("|ab"), {4, 100}, 3);
  ASSERT_GE(runs.size(), 1u);
  for (const auto& run : runs) {
    EXPECT_EQ(check_lasso_run(a, parse_lasso("|ab"), run), "");
    EXPECT_EQ(run.steps.front().config.counters[0], 1);
  }
  EXPECT_TRUE(enumerate_accepting_runs(a, parse_lasso("|aab"), {6, 200}, 10).empty());
  EXPECT_TRUE(enumerate_accepting_runs(a, parse_lasso("|ab"), {4, 100}, 0).empty());
}

TEST(EnumerateAcceptingRuns, DistinctAndDeterministic) {
  const auto& a = liminf();
  const auto w = parse_lasso("|aabbab");
  const auto first = enumerate_accepting_runs(a, w, {5, 200}, 25);
  EXPECT_EQ(first, enumerate_accepting_runs(a, w, {5, 200}, 25));
  EXPECT_EQ(first.size(), 13u);
  for (std::size_t i = 0; i < first.size(); ++i) {
    EXPECT_EQ(check_lasso_run(a, w, first[i]), "");
    for (std::size_t j = 0; j < i; ++j) EXPECT_FALSE(first[i] == first[j]);
  }
}
