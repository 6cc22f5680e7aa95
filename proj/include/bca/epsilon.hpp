#ifndef BCA_EPSILON_HPP
#define BCA_EPSILON_HPP

#include <array>
#include <cstdint>
#include <map>
#include <queue>
#include <vector>

#include "bca/automaton.hpp"

namespace bca {

namespace detail {

/// Bit i set iff counter i is positive. Epsilon-transitions never change counters, so the
/// zero/positive pattern is constant along an epsilon-path.
using Pattern = std::uint32_t;

inline Pattern guard_pattern(const Transition& t) {
  Pattern p = 0;
  for (std::size_t i = 0; i < t.guards.size(); ++i)
    if (t.guards[i] == 1) p |= Pattern{1} << i;
  return p;
}

/// Zero/positive patterns the counters may have after `t` fires. A decrement from a positive
/// counter may land on zero or stay positive, so it contributes both outcomes.
inline std::vector<Pattern> post_patterns(const Transition& t) {
  std::vector<Pattern> out{0};
  for (std::size_t i = 0; i < t.guards.size(); ++i) {
    const Pattern bit = Pattern{1} << i;
    const bool known_zero = t.guards[i] == 0 && t.deltas[i] == 0;
    const bool unknown = t.guards[i] == 1 && t.deltas[i] == -1;
    if (known_zero) continue;
    if (unknown) {
      const std::size_t n = out.size();
      for (std::size_t j = 0; j < n; ++j) out.push_back(out[j] | bit);
    } else {
      for (auto& p : out) p |= bit;
    }
  }
  return out;
}

class EpsilonClosure {
 public:
  explicit EpsilonClosure(const BlindCounterAutomaton& a) : a_(a) {
    for (const auto& t : a.transitions())
      if (t.is_epsilon()) edges_.push_back(&t);
  }

  /// Targets of non-empty epsilon-paths from `start` enabled under `pattern`, mapped to
  /// whether some such path meets an accepting state or an accepting epsilon-transition.
  std::map<StateId, bool> from(StateId start, Pattern pattern, bool start_flag) const {
    const std::size_t n = a_.states().size();
    std::vector<std::array<bool, 2>> seen(n, {false, false});
    std::queue<std::pair<StateId, bool>> queue;
    queue.emplace(start, start_flag);
    seen[start][start_flag] = true;
    while (!queue.empty()) {
      auto [s, flag] = queue.front();
      queue.pop();
      for (const Transition* t : edges_) {
        if (t->source != s || guard_pattern(*t) != pattern) continue;
        const bool next = flag || t->accepting || a_.is_accepting(t->target);
        if (!seen[t->target][next]) {
          seen[t->target][next] = true;
          queue.emplace(t->target, next);
        }
      }
    }
    std::map<StateId, bool> out;
    for (StateId s = 0; s < n; ++s) {
      if (s == start) continue;
      if (seen[s][1]) out[s] = true;
      else if (seen[s][0]) out[s] = false;
    }
    return out;
  }

 private:
  const BlindCounterAutomaton& a_;
  std::vector<const Transition*> edges_;
};

/// Appends `t` followed by every epsilon-path out of its target. Fails when a composed step
/// would need a counter test that a single transition cannot express.
inline void compose_with_post_closure(const BlindCounterAutomaton& a, const EpsilonClosure& closure,
                                      Transition t, bool prefix_accepting, std::vector<Transition>& out) {
  t.accepting = t.accepting || prefix_accepting;
  const auto patterns = post_patterns(t);
  std::vector<std::map<StateId, bool>> reach;
  for (Pattern p : patterns) reach.push_back(closure.from(t.target, p, a.is_accepting(t.target)));

  std::map<StateId, bool> all = reach.front();
  for (std::size_t i = 1; i < reach.size(); ++i) {
    if (reach[i] != reach.front())
      throw Error("epsilon-path after [" + describe(a, t) +
                  "] depends on whether a decremented counter reaches zero; not expressible");
  }
  out.push_back(t);
  for (auto [target, accepting] : all) {
    Transition composed = t;
    composed.target = target;
    composed.accepting = t.accepting || accepting;
    out.push_back(std::move(composed));
  }
}

}  // namespace detail

/// Removes epsilon-transitions while preserving the accepted omega-language.
///
/// Every letter transition is composed with the epsilon-paths that may follow it; the
/// initial state additionally absorbs epsilon-paths taken before the first letter. A
/// composed transition whose epsilon-part meets an accepting state is marked accepting,
/// because the intermediate states are no longer visited. Acceptance of the result is
/// "some accepting state or some accepting transition occurs infinitely often".
inline BlindCounterAutomaton eliminate_epsilon(const BlindCounterAutomaton& a) {
  require_valid(a);
  if (!a.has_epsilon()) return a;
  if (a.counter_count() > 16) throw Error("epsilon elimination supports at most 16 counters");

  const detail::EpsilonClosure closure(a);
  std::vector<Transition> out;
  for (const auto& t : a.transitions()) {
    if (t.is_epsilon()) continue;
    detail::compose_with_post_closure(a, closure, t, false, out);
  }

  const StateId q0 = a.initial();
  const detail::Pattern patterns = detail::Pattern{1} << a.counter_count();
  for (detail::Pattern p = 0; p < patterns; ++p) {
    for (auto [via, accepting] : closure.from(q0, p, false)) {
      for (const auto& t : a.transitions()) {
        if (t.is_epsilon() || t.source != via || detail::guard_pattern(t) != p) continue;
        Transition shifted = t;
        shifted.source = q0;
        detail::compose_with_post_closure(a, closure, shifted, accepting, out);
      }
    }
  }
  return a.with_transitions(std::move(out));
}

}  // namespace bca

#endif  // BCA_EPSILON_HPP
