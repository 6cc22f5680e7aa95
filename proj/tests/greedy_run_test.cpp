#include <random>

#include <gtest/gtest.h>

#include "bca/canonical_run.hpp"
#include "bca/liminf_automaton.hpp"
#include "bca/reduction.hpp"
#include "run_profile.hpp"
#include "support.hpp"

using namespace bca;

namespace {

const BlindCounterAutomaton& liminf() {
  static const auto a = build_liminf_automaton();
  return a;
}

BlockLasso random_blocks(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> exp(1, 5);
  std::uniform_int_distribution<std::size_t> plen(0, 3), vlen(1, 4);
  std::vector<Block> pre, per;
  for (std::size_t i = plen(rng); i > 0; --i) pre.push_back({exp(rng), exp(rng)});
  for (std::size_t i = vlen(rng); i > 0; --i) per.push_back({exp(rng), exp(rng)});
  return BlockLasso(pre, per);
}

}  // namespace

TEST(CanonicalRun, UnitBlocks) {
  const auto trace = canonical_run(parse_blocks("|1:1"), 1, 6);
  ASSERT_EQ(trace.size(), 6u);
  EXPECT_EQ(trace[0].phase, RunPhase::wait_current_block);
  EXPECT_FALSE(trace[0].used);
  for (std::size_t i = 1; i < 6; ++i) {
    EXPECT_EQ(trace[i].phase, RunPhase::steady);
    EXPECT_TRUE(trace[i].used);
    EXPECT_EQ(trace[i].counter_before, 1);
    EXPECT_EQ(trace[i].counter_after, 1);
  }
  EXPECT_EQ(final_state(trace).used_blocks, (std::vector<std::size_t>{1, 2, 3, 4, 5}));
}

TEST(CanonicalRun, NegativeBlocksAreNeverUsed) {
  const auto trace = canonical_run(parse_blocks("|2:1"), 3, 20);
  EXPECT_EQ(trace[0].phase, RunPhase::wait_current_block);
  EXPECT_EQ(trace[0].counter_after, 3);
  EXPECT_TRUE(final_state(trace).used_blocks.empty());
  EXPECT_EQ(final_state(trace).counter, 3);
}

TEST(CanonicalRun, Stages) {
  const auto trace = canonical_run(parse_blocks("1:1,1:1|3:4"), 5, 4);
  EXPECT_EQ(trace[0].phase, RunPhase::initial_increments);
  EXPECT_EQ(trace[1].phase, RunPhase::initial_increments);
  EXPECT_EQ(trace[2].phase, RunPhase::wait_current_block);  // letter 5 is inside block 2
  EXPECT_EQ(trace[2].counter_after, 5);
  EXPECT_EQ(trace[3].phase, RunPhase::steady);
  EXPECT_TRUE(trace[3].used);
  EXPECT_EQ(trace[3].counter_after, 6);
}

TEST(CanonicalRun, EmptyHorizonAndBadN) {
  EXPECT_TRUE(canonical_run(parse_blocks("|1:1"), 2, 0).empty());
  EXPECT_THROW(canonical_run(parse_blocks("|1:1"), 0, 3), Error);
}

TEST(PhiHolds, Examples) {
  const std::vector<Block> two{{1, 1}, {1, 1}};
  EXPECT_EQ(phi_holds(two, 1), (std::vector<std::size_t>{1}));
  const std::vector<Block> wide{{3, 1}};
  EXPECT_TRUE(phi_holds(wide, 1).empty());
  EXPECT_TRUE(phi_holds(std::vector<Block>{}, 4).empty());
}

// Whether block j is used depends only on blocks 0..j.
TEST(PhiHolds, DependsOnlyOnThePrefix) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 300; ++trial) {
    const auto b = random_blocks(rng);
    std::vector<Block> list;
    for (std::size_t i = 0; i < 12; ++i) list.push_back(b.at(i));
    const std::uint64_t n = 1 + trial % 6;
    const auto full = phi_holds(list, n);
    for (std::size_t cut = 0; cut <= list.size(); ++cut) {
      std::vector<Block> head(list.begin(), list.begin() + cut);
      std::vector<std::size_t> expect;
      for (auto j : full)
        if (j < cut) expect.push_back(j);
      EXPECT_EQ(phi_holds(head, n), expect);
    }
  }
}

TEST(Characterize, Examples) {
  const auto unit = characterize(parse_blocks("|1:1"));
  ASSERT_TRUE(unit);
  EXPECT_EQ(unit->initial_increments, 1u);
  EXPECT_EQ(unit->pattern, (std::vector<bool>{true}));

  EXPECT_FALSE(characterize(parse_blocks("|2:1")));

  const auto mixed = characterize(parse_blocks("|1:1,5:1"));
  ASSERT_TRUE(mixed);
  EXPECT_EQ(mixed->initial_increments, 1u);
  EXPECT_EQ(mixed->pattern, (std::vector<bool>{true, false}));
  EXPECT_TRUE(mixed->exceptional.empty());
}

TEST(Characterize, PositivePeriodBlockDecidesMembership) {
  for (const auto& w : bca::testing::z_suite())
    EXPECT_EQ(characterize(decompose_blocks(w)).has_value(), bca::testing::liminf_closed_form(w)) << to_string(w);
}

// The certificate must describe exactly the blocks the greedy run uses, far beyond the point
// where the period analysis stopped.
TEST(Characterize, MatchesLongHorizonSimulation) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 400; ++trial) {
    const auto b = random_blocks(rng);
    std::uint64_t widest = 0;
    for (const auto& blk : b.period) widest = std::max(widest, blk.n);
    const std::size_t horizon = b.prefix.size() + (widest + 30) * b.period.size() + 30;
    for (std::uint64_t n = 1; n <= max_initial_increments(b); ++n) {
      const auto used = final_state(canonical_run(b, n, horizon)).used_blocks;
      const auto cert = greedy_usage(b, n);
      if (cert) {
        EXPECT_EQ(cert->used_up_to(horizon), used) << to_string(b) << " N=" << n;
        EXPECT_TRUE(check_usage_inequality(b, *cert));
      } else {
        const std::size_t tail = horizon - b.period.size();
        EXPECT_TRUE(used.empty() || used.back() < tail) << to_string(b) << " N=" << n;
      }
    }
    // Larger N never hurts, so the least accepting N is found below the bound.
    const auto cert = characterize(b);
    const bool any = std::any_of(b.period.begin(), b.period.end(), [](const Block& x) { return x.positive(); });
    EXPECT_EQ(cert.has_value(), any) << to_string(b);
    if (cert) {
      EXPECT_TRUE(greedy_usage(b, cert->initial_increments + 7).has_value());
    }
  }
}

TEST(Characterize, UsageInequalityAudit) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 500; ++trial) {
    const auto b = random_blocks(rng);
    if (const auto cert = characterize(b)) {
      EXPECT_TRUE(check_usage_inequality(b, *cert, 3)) << to_string(b);
      EXPECT_TRUE(std::any_of(cert->pattern.begin(), cert->pattern.end(), [](bool u) { return u; }));
    }
  }
}

TEST(CanonicalRunSteps, AreLegalRunsOfTheAutomaton) {
  std::mt19937_64 rng(73);
  const auto& a = liminf();
  for (int trial = 0; trial < 200; ++trial) {
    const auto b = random_blocks(rng);
    const std::uint64_t n = 1 + trial % 7;
    const std::size_t horizon = 12;
    const auto steps = canonical_run_steps(a, b, n, horizon);
    const auto word = b.to_word();
    Configuration c = initial_configuration(a);
    std::size_t letters = 0;
    for (const auto& s : steps) {
      const auto& t = a.transitions()[s.transition];
      std::set<Configuration> options;
      if (t.is_epsilon()) {
        for (const auto& succ : successors(a, c, kEpsilon)) options.insert(succ.config);
      } else {
        options = step_all(a, c, std::string(1, word.at(letters)));
        ++letters;
      }
      ASSERT_TRUE(options.contains(s.config)) << to_string(b) << " N=" << n;
      EXPECT_EQ(s.position, letters);
      c = s.config;
    }
    std::size_t expected = 0;
    for (std::size_t i = 0; i < horizon; ++i) expected += b.at(i).length();
    EXPECT_EQ(letters, expected);
    // The state after each used block's a's is F, i.e. the run visits the accepting state.
    const auto used = final_state(canonical_run(b, n, horizon)).used_blocks;
    std::size_t visits = 0;
    for (const auto& s : steps) visits += a.state_name(s.config.state) == "F";
    EXPECT_EQ(visits, used.size());
  }
}

TEST(Reduction, Examples) {
  const auto zero = reduction_check(parse_integer_lasso("|0"));
  EXPECT_TRUE(zero.in_d3);
  EXPECT_TRUE(zero.decided);
  EXPECT_TRUE(zero.holds());

  const auto three = reduction_check(parse_integer_lasso("|3"));
  EXPECT_TRUE(three.decided);
  ASSERT_TRUE(three.certificate);
  EXPECT_GE(three.certificate->initial_increments, 4u);

  const auto nines = reduction_check(parse_integer_lasso("9,9|1"));
  EXPECT_TRUE(nines.in_d3);
  EXPECT_TRUE(nines.decided);
  EXPECT_TRUE(nines.holds());
}

TEST(Reduction, Report) {
  const auto lines = format_report(reduction_check(parse_integer_lasso("2|0")));
  const std::vector<std::string> expected{"point=2|0",      "in_d3=true",          "liminf=0",
                                          "word=aaabbb|ab", "decide=true",         "characterize=true",
                                          "n=1",            "biconditional=true"};
  EXPECT_EQ(lines, expected);
}

// An accepting run with N initial increments can be replaced by the greedy run with the same N,
// which is never lower at a block boundary.
TEST(GreedyRun, DominatesEnumeratedRuns) {
  const auto& a = liminf();
  std::size_t runs_checked = 0;
  for (const auto& w : bca::testing::z_suite()) {
    if (!bca::testing::liminf_closed_form(w)) continue;
    const auto runs = enumerate_accepting_runs(a, w, {4, 400}, 4, 200000);
    const auto blocks = decompose_blocks(w);
    for (const auto& run : runs) {
      ++runs_checked;
      const auto p = bca::testing::profile_run(a, w, run, 6 * w.length() + 24);
      ASSERT_GE(p.initial_increments, 1u);
      EXPECT_TRUE(greedy_usage(blocks, p.initial_increments).has_value()) << to_string(w);
      const auto trace = canonical_run(blocks, p.initial_increments, p.used.size());
      bool positive_in_cycle = false;
      for (std::size_t j = 0; j < p.used.size(); ++j) {
        EXPECT_GE(trace[j].counter_before, p.counter_at_block[j]) << to_string(w) << " block " << j;
        if (p.used[j] && blocks.at(j).positive()) {
          EXPECT_TRUE(trace[j].used) << to_string(w) << " block " << j;
        }
        positive_in_cycle = positive_in_cycle || (p.used_in_cycle[j] && blocks.at(j).positive());
      }
      EXPECT_TRUE(positive_in_cycle) << to_string(w);
    }
  }
  EXPECT_GT(runs_checked, 500u);
}
