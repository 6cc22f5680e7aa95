#ifndef BCA_CANONICAL_RUN_HPP
#define BCA_CANONICAL_RUN_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bca/automaton.hpp"
#include "bca/semantics.hpp"
#include "bca/words.hpp"

namespace bca {

enum class RunPhase { initial_increments, wait_current_block, steady };

inline std::string to_string(RunPhase p) {
  switch (p) {
    case RunPhase::initial_increments: return "initial-increments";
    case RunPhase::wait_current_block: return "wait-current-block";
    case RunPhase::steady: return "steady";
  }
  return "?";
}

/// What the greedy run does with one block.
struct BlockStep {
  std::size_t index = 0;
  Block block;
  RunPhase phase = RunPhase::steady;
  std::int64_t counter_before = 0;
  std::int64_t counter_after = 0;
  bool used = false;

  friend bool operator==(const BlockStep&, const BlockStep&) = default;
};

struct CanonicalRunState {
  RunPhase phase = RunPhase::initial_increments;
  std::int64_t counter = 0;
  std::size_t block_index = 0;
  std::vector<std::size_t> used_blocks;
};

/// The greedy run with N initial increments over the first `horizon` blocks of a block stream.
///
/// The first N letters are read while incrementing, the block in progress at letter N is
/// waited out, and from then on a block is used exactly when it is positive (k >= n) and
/// affordable (n <= counter). Using a block adds k - n to the counter.
template <typename BlockAt>
std::vector<BlockStep> greedy_trace(BlockAt&& block_at, std::uint64_t initial_increments, std::size_t horizon) {
  if (initial_increments == 0) throw Error("the greedy run needs at least one initial increment");
  const auto n0 = static_cast<std::int64_t>(initial_increments);
  std::vector<BlockStep> trace;
  trace.reserve(horizon);
  std::int64_t letters = 0;  // letters before the current block
  std::int64_t counter = 0;
  for (std::size_t i = 0; i < horizon; ++i) {
    const Block b = block_at(i);
    BlockStep step{i, b, RunPhase::steady, 0, 0, false};
    const auto end = letters + static_cast<std::int64_t>(b.length());
    if (end < n0) {
      step.phase = RunPhase::initial_increments;
      step.counter_before = letters;
      counter = step.counter_after = end;
    } else if (letters < n0) {
      step.phase = RunPhase::wait_current_block;
      step.counter_before = letters;
      counter = step.counter_after = n0;
    } else {
      step.counter_before = counter;
      step.used = b.positive() && static_cast<std::int64_t>(b.n) <= counter;
      if (step.used) counter += static_cast<std::int64_t>(b.k) - static_cast<std::int64_t>(b.n);
      step.counter_after = counter;
    }
    letters = end;
    trace.push_back(step);
  }
  return trace;
}

inline std::vector<BlockStep> canonical_run(const BlockLasso& blocks, std::uint64_t initial_increments,
                                            std::size_t horizon) {
  return greedy_trace([&](std::size_t i) { return blocks.at(i); }, initial_increments, horizon);
}

/// Finite block list; the horizon is clipped to its length.
inline std::vector<BlockStep> canonical_run(std::span<const Block> blocks, std::uint64_t initial_increments,
                                            std::size_t horizon) {
  return greedy_trace([&](std::size_t i) { return blocks[i]; }, initial_increments,
                       std::min(horizon, blocks.size()));
}

inline CanonicalRunState final_state(const std::vector<BlockStep>& trace) {
  CanonicalRunState s;
  if (trace.empty()) return s;
  s.phase = trace.back().phase;
  s.counter = trace.back().counter_after;
  s.block_index = trace.size();
  for (const auto& step : trace)
    if (step.used) s.used_blocks.push_back(step.index);
  return s;
}

/// Indices of the blocks the greedy run with N increments uses, among a finite block list.
/// Whether block j is used depends only on the word up to the end of block j.
inline std::vector<std::size_t> phi_holds(std::span<const Block> blocks, std::uint64_t initial_increments) {
  return final_state(canonical_run(blocks, initial_increments, blocks.size())).used_blocks;
}

/// Letter-level run of the liminf automaton (with epsilon-moves) that realises the greedy run
/// over the first `horizon` blocks; RunStep::position counts letters read so far.
inline std::vector<RunStep> canonical_run_steps(const BlindCounterAutomaton& liminf, const BlockLasso& blocks,
                                                std::uint64_t initial_increments, std::size_t horizon) {
  const auto trace = canonical_run(blocks, initial_increments, horizon);
  std::vector<RunStep> steps;
  Configuration c = initial_configuration(liminf);
  std::size_t letters = 0;
  auto move = [&](std::string_view letter, std::string_view target) {
    const LetterId l = letter == kEpsilonName ? kEpsilon : liminf.require_letter(letter);
    const StateId t = liminf.require_state(target);
    for (const auto& s : successors(liminf, c, l)) {
      if (s.config.state != t) continue;
      if (l != kEpsilon) ++letters;
      c = s.config;
      steps.push_back({s.transition, letters, c});
      return;
    }
    throw std::logic_error("greedy run blocked at " + liminf.state_name(c.state) + " on " + std::string(letter));
  };

  std::uint64_t read = 0;
  for (const auto& step : trace) {
    const Block& b = step.block;
    if (step.phase == RunPhase::steady) {
      if (step.used) {
        move("a", "Ma");
        for (std::uint64_t i = 1; i < b.n; ++i) move("a", "Ma");
        move("eps", "F");
        move("b", "Mb");
        for (std::uint64_t i = 1; i < b.k; ++i) move("b", "Mb");
        move("eps", "G");
      } else {
        move("a", "Wa");
        for (std::uint64_t i = 1; i < b.n; ++i) move("a", "Wa");
        move("b", "Wb");
        for (std::uint64_t i = 1; i < b.k; ++i) move("b", "Wb");
        move("eps", "G");
      }
      continue;
    }
    // Increment on every letter up to letter N, then wait for the end of the block.
    for (std::uint64_t i = 0; i < b.length(); ++i) {
      const char letter = i < b.n ? 'a' : 'b';
      if (read < initial_increments) {
        move(std::string(1, letter), letter == 'a' ? "Ia" : "Ib");
        ++read;
        if (read == initial_increments) move("eps", letter == 'a' ? "Wa" : "Wb");
      } else {
        move(std::string(1, letter), letter == 'a' ? "Wa" : "Wb");
      }
    }
    if (step.phase == RunPhase::wait_current_block) move("eps", "G");
  }
  return steps;
}

// ---------------------------------------------------------------------------
// Usage certificates on block lassos

/// The set I of used block indices: the finite `exceptional` list, plus from block index
/// `period_start` on, every block whose offset within the block period is marked in `pattern`.
struct UsageCertificate {
  std::uint64_t initial_increments = 1;
  std::vector<std::size_t> exceptional;
  std::size_t period_start = 0;
  std::vector<bool> pattern;

  bool uses(std::size_t i) const {
    if (i < period_start) return std::binary_search(exceptional.begin(), exceptional.end(), i);
    return pattern[(i - period_start) % pattern.size()];
  }

  std::vector<std::size_t> used_up_to(std::size_t limit) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < limit; ++i)
      if (uses(i)) out.push_back(i);
    return out;
  }
};

/// Runs the greedy run with N increments on a block lasso and decides whether it uses
/// infinitely many blocks.
///
/// Past the wait stage the counter never decreases, and the effect of one block period is
/// monotone in the counter it starts with. So at successive period boundaries the counter
/// either stays put (the period's usage repeats forever) or climbs until it covers every n in
/// the period (every positive block is used from then on).
inline std::optional<UsageCertificate> greedy_usage(const BlockLasso& blocks, std::uint64_t initial_increments) {
  if (initial_increments == 0) throw Error("the greedy run needs at least one initial increment");
  const auto n0 = static_cast<std::int64_t>(initial_increments);
  UsageCertificate cert;
  cert.initial_increments = initial_increments;

  std::size_t i = 0;
  std::int64_t letters = 0;
  while (letters < n0) letters += static_cast<std::int64_t>(blocks.at(i++).length());
  std::int64_t counter = n0;

  auto visit = [&](std::size_t index) {
    const Block& b = blocks.at(index);
    const bool used = b.positive() && static_cast<std::int64_t>(b.n) <= counter;
    if (used) counter += static_cast<std::int64_t>(b.k) - static_cast<std::int64_t>(b.n);
    return used;
  };
  for (; !blocks.is_period_boundary(i); ++i)
    if (visit(i)) cert.exceptional.push_back(i);

  const std::size_t period = blocks.period.size();
  std::int64_t widest = 0;
  for (const auto& b : blocks.period) widest = std::max(widest, static_cast<std::int64_t>(b.n));

  while (true) {
    std::vector<bool> pattern(period, false);
    if (counter >= widest) {
      for (std::size_t j = 0; j < period; ++j) pattern[j] = blocks.period[j].positive();
      if (std::none_of(pattern.begin(), pattern.end(), [](bool u) { return u; })) return std::nullopt;
      cert.period_start = i;
      cert.pattern = std::move(pattern);
      return cert;
    }
    const std::int64_t before = counter;
    for (std::size_t j = 0; j < period; ++j) pattern[j] = visit(i + j);
    if (counter == before) {
      if (std::none_of(pattern.begin(), pattern.end(), [](bool u) { return u; })) return std::nullopt;
      cert.period_start = i;
      cert.pattern = std::move(pattern);
      return cert;
    }
    for (std::size_t j = 0; j < period; ++j)
      if (pattern[j]) cert.exceptional.push_back(i + j);
    i += period;
  }
}

/// Largest number of initial increments tried by `characterize`.
inline std::uint64_t max_initial_increments(const BlockLasso& blocks) {
  std::uint64_t sum = 0, widest = 0;
  for (const auto& b : blocks.prefix) sum += b.n;
  for (const auto& b : blocks.period) widest = std::max(widest, b.n);
  return sum + widest + 1;
}

/// Membership of a block lasso in the automaton's language via the greedy runs: the
/// certificate for the least N whose greedy run uses infinitely many blocks.
inline std::optional<UsageCertificate> characterize(const BlockLasso& blocks) {
  const auto limit = max_initial_increments(blocks);
  for (std::uint64_t n = 1; n <= limit; ++n)
    if (auto cert = greedy_usage(blocks, n)) return cert;
  return std::nullopt;
}

/// Checks the usage inequality on the first `periods` repetitions after the certificate's
/// periodic part begins: the first used block starts after letter N, and every used block i
/// satisfies n_i <= N + sum over used j < i of (k_j - n_j).
inline bool check_usage_inequality(const BlockLasso& blocks, const UsageCertificate& cert, std::size_t periods = 3) {
  const std::size_t limit = cert.period_start + periods * blocks.period.size();
  const auto used = cert.used_up_to(limit);
  if (used.empty()) return false;
  std::int64_t start = 0;
  for (std::size_t i = 0; i < used.front(); ++i) start += static_cast<std::int64_t>(blocks.at(i).length());
  if (start < static_cast<std::int64_t>(cert.initial_increments)) return false;
  std::int64_t balance = static_cast<std::int64_t>(cert.initial_increments);
  for (std::size_t i : used) {
    const Block& b = blocks.at(i);
    if (static_cast<std::int64_t>(b.n) > balance) return false;
    balance += static_cast<std::int64_t>(b.k) - static_cast<std::int64_t>(b.n);
  }
  return true;
}

}  // namespace bca

#endif  // BCA_CANONICAL_RUN_HPP
