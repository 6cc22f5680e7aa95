#ifndef BCA_TESTS_RUN_PROFILE_HPP
#define BCA_TESTS_RUN_PROFILE_HPP

#include <cstdint>
#include <vector>

#include "bca/automaton.hpp"
#include "bca/semantics.hpp"
#include "bca/words.hpp"

namespace bca::testing {

/// What a lasso run of the liminf automaton (with epsilon-moves) does block by block.
struct RunProfile {
  std::uint64_t initial_increments = 0;
  std::vector<std::int64_t> counter_at_block;  // counter when the block's first letter is due
  std::vector<bool> used;                      // the run entered Ma inside the block
  std::vector<bool> used_in_cycle;             // ... during a cycle repetition
};

/// Unrolls `run` (stem, then the cycle repeated) until `letters` letters are read, and
/// reports every block that lies completely inside that prefix.
inline RunProfile profile_run(const BlindCounterAutomaton& a, const LassoWord& w, const Run& run, std::size_t letters) {
  const auto blocks = decompose_blocks(w);
  std::vector<std::size_t> starts{0};
  while (starts.back() < letters) starts.push_back(starts.back() + blocks.at(starts.size() - 1).length());
  const std::size_t complete = starts.size() - 1;
  RunProfile p;
  p.counter_at_block.assign(complete, -1);
  p.used.assign(complete, false);
  p.used_in_cycle.assign(complete, false);

  const auto I = a.require_state("I"), Ia = a.require_state("Ia"), Ib = a.require_state("Ib");
  const auto Ma = a.require_state("Ma");
  std::int64_t counter = 0;
  std::size_t read = 0, block = 0;
  p.counter_at_block[0] = 0;
  auto step = [&](std::size_t index, bool in_cycle) {
    const auto& t = a.transitions()[run.steps[index].transition];
    if (!t.is_epsilon() && (t.source == I || t.source == Ia || t.source == Ib)) ++p.initial_increments;
    counter += t.deltas[0];
    if (t.target == Ma && block < complete) {
      p.used[block] = true;
      if (in_cycle) p.used_in_cycle[block] = true;
    }
    if (!t.is_epsilon()) {
      ++read;
      if (block + 1 < starts.size() && read == starts[block + 1]) {
        ++block;
        if (block < complete) p.counter_at_block[block] = counter;
      }
    }
  };
  for (std::size_t i = 0; i < run.cycle_start; ++i) step(i, false);
  while (read < letters)
    for (std::size_t i = run.cycle_start; i < run.steps.size() && read < letters; ++i) step(i, true);
  // Drop the last block if the prefix ends inside it.
  while (!p.used.empty() && starts[p.used.size()] > letters) {
    p.used.pop_back();
    p.used_in_cycle.pop_back();
    p.counter_at_block.pop_back();
  }
  return p;
}

}  // namespace bca::testing

#endif  // BCA_TESTS_RUN_PROFILE_HPP
