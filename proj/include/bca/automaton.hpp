#ifndef BCA_AUTOMATON_HPP
#define BCA_AUTOMATON_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bca {

/// Domain error raised by every module of the library. The CLI maps it to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using StateId = std::uint32_t;
using LetterId = std::uint32_t;

inline constexpr LetterId kEpsilon = std::numeric_limits<LetterId>::max();
inline constexpr std::string_view kEpsilonName = "eps";

/// One element of the transition relation: (source, letter, guard flags, target, deltas).
/// A guard flag of 0 means "fires when that counter is zero", 1 means "fires when it is
/// positive". `accepting` is only set on automata produced by epsilon elimination.
struct Transition {
  StateId source = 0;
  LetterId letter = 0;
  std::vector<std::int8_t> guards;
  StateId target = 0;
  std::vector<std::int8_t> deltas;
  bool accepting = false;

  bool is_epsilon() const { return letter == kEpsilon; }

  friend auto operator<=>(const Transition&, const Transition&) = default;
  friend bool operator==(const Transition&, const Transition&) = default;
};

/// A k-blind-counter Buchi automaton. States and letters are opaque names interned to
/// dense ids in insertion order; transitions are kept sorted and duplicate-free so that
/// every derived output is independent of insertion order.
class BlindCounterAutomaton {
 public:
  explicit BlindCounterAutomaton(std::size_t counters = 1) : counters_(counters) {
    if (counters == 0) throw Error("automaton needs at least one counter");
  }

  StateId add_state(std::string name) {
    if (auto id = state_id(name)) return *id;
    if (name.empty()) throw Error("empty state name");
    state_index_.emplace(name, static_cast<StateId>(states_.size()));
    states_.push_back(std::move(name));
    accepting_.push_back(false);
    return static_cast<StateId>(states_.size() - 1);
  }

  LetterId add_letter(std::string name) {
    if (auto id = letter_id(name)) return *id;
    if (name.empty() || name == kEpsilonName) throw Error("invalid letter name '" + name + "'");
    letter_index_.emplace(name, static_cast<LetterId>(alphabet_.size()));
    alphabet_.push_back(std::move(name));
    return static_cast<LetterId>(alphabet_.size() - 1);
  }

  void set_initial(StateId s) {
    check_state(s);
    initial_ = s;
  }

  void set_accepting(StateId s, bool accepting = true) {
    check_state(s);
    accepting_[s] = accepting;
  }

  /// Inserts a transition. An identical transition differing only in its accepting mark is
  /// merged (the mark is or-ed), which keeps the relation a set.
  void add_transition(Transition t) {
    check_state(t.source);
    check_state(t.target);
    if (t.letter != kEpsilon && t.letter >= alphabet_.size()) throw Error("unknown letter id");
    if (t.guards.size() != counters_ || t.deltas.size() != counters_)
      throw Error("transition vector length differs from counter count " + std::to_string(counters_));
    bool accepting = t.accepting;
    t.accepting = false;
    auto pos = std::lower_bound(transitions_.begin(), transitions_.end(), t, same_shape_less);
    if (pos != transitions_.end() && !same_shape_less(t, *pos)) {
      pos->accepting = pos->accepting || accepting;
      return;
    }
    t.accepting = accepting;
    transitions_.insert(pos, std::move(t));
  }

  /// Name-based convenience used by builders and tests. `letter` may be "eps".
  void add_transition(std::string_view source, std::string_view letter, std::vector<int> guards,
                      std::string_view target, std::vector<int> deltas, bool accepting = false) {
    Transition t;
    t.source = require_state(source);
    t.target = require_state(target);
    t.letter = letter == kEpsilonName ? kEpsilon : require_letter(letter);
    for (int g : guards) t.guards.push_back(static_cast<std::int8_t>(g));
    for (int d : deltas) t.deltas.push_back(static_cast<std::int8_t>(d));
    t.accepting = accepting;
    add_transition(std::move(t));
  }

  std::size_t counter_count() const { return counters_; }
  const std::vector<std::string>& states() const { return states_; }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  StateId initial() const { return initial_; }
  bool is_accepting(StateId s) const { return accepting_.at(s); }

  std::vector<StateId> accepting_states() const {
    std::vector<StateId> out;
    for (StateId s = 0; s < accepting_.size(); ++s)
      if (accepting_[s]) out.push_back(s);
    return out;
  }

  std::optional<StateId> state_id(std::string_view name) const {
    auto it = state_index_.find(name);
    if (it == state_index_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<LetterId> letter_id(std::string_view name) const {
    auto it = letter_index_.find(name);
    if (it == letter_index_.end()) return std::nullopt;
    return it->second;
  }

  StateId require_state(std::string_view name) const {
    if (auto id = state_id(name)) return *id;
    throw Error("unknown state '" + std::string(name) + "'");
  }

  LetterId require_letter(std::string_view name) const {
    if (auto id = letter_id(name)) return *id;
    throw Error("unknown letter '" + std::string(name) + "'");
  }

  const std::string& state_name(StateId s) const { return states_.at(s); }

  std::string letter_name(LetterId l) const {
    return l == kEpsilon ? std::string(kEpsilonName) : alphabet_.at(l);
  }

  bool has_epsilon() const {
    return std::any_of(transitions_.begin(), transitions_.end(),
                       [](const Transition& t) { return t.is_epsilon(); });
  }

  bool has_accepting_transitions() const {
    return std::any_of(transitions_.begin(), transitions_.end(),
                       [](const Transition& t) { return t.accepting; });
  }

  /// Transitions in canonical order with a replaced relation; states, letters and marks kept.
  BlindCounterAutomaton with_transitions(std::vector<Transition> ts) const {
    BlindCounterAutomaton out = *this;
    out.transitions_.clear();
    for (auto& t : ts) out.add_transition(std::move(t));
    return out;
  }

  friend bool operator==(const BlindCounterAutomaton&, const BlindCounterAutomaton&) = default;

 private:
  static bool same_shape_less(const Transition& a, const Transition& b) {
    return std::tie(a.source, a.letter, a.guards, a.target, a.deltas) <
           std::tie(b.source, b.letter, b.guards, b.target, b.deltas);
  }

  void check_state(StateId s) const {
    if (s >= states_.size()) throw Error("unknown state id " + std::to_string(s));
  }

  std::size_t counters_;
  std::vector<std::string> states_;
  std::vector<std::string> alphabet_;
  std::map<std::string, StateId, std::less<>> state_index_;
  std::map<std::string, LetterId, std::less<>> letter_index_;
  std::vector<bool> accepting_;
  std::vector<Transition> transitions_;
  StateId initial_ = 0;
};

inline std::string format_vector(const std::vector<std::int8_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(static_cast<int>(v[i]));
  }
  return out;
}

/// `src letter guards target deltas [accepting]`, the transition-line syntax of automaton files.
inline std::string describe(const BlindCounterAutomaton& a, const Transition& t) {
  std::string out = a.state_name(t.source) + ' ' + a.letter_name(t.letter) + ' ' +
                    format_vector(t.guards) + ' ' + a.state_name(t.target) + ' ' +
                    format_vector(t.deltas);
  if (t.accepting) out += " accepting";
  return out;
}

// ---------------------------------------------------------------------------
// Well-formedness

struct Violation {
  std::string clause;
  std::string transition;
  std::string message;

  friend auto operator<=>(const Violation&, const Violation&) = default;
  friend bool operator==(const Violation&, const Violation&) = default;
};

namespace clause {
inline constexpr std::string_view kNoStates = "no-states";
inline constexpr std::string_view kGuardRange = "guard-range";
inline constexpr std::string_view kDeltaRange = "delta-range";
inline constexpr std::string_view kBlindness = "blindness";
inline constexpr std::string_view kZeroConsistency = "zero-consistency";
inline constexpr std::string_view kEpsilonDelta = "epsilon-delta";
inline constexpr std::string_view kEpsilonCycle = "epsilon-cycle";
}  // namespace clause

namespace detail {

/// States lying on a cycle of epsilon-transitions (self-loops included).
inline std::vector<StateId> epsilon_cycle_states(const BlindCounterAutomaton& a) {
  const std::size_t n = a.states().size();
  std::vector<std::vector<StateId>> succ(n);
  for (const auto& t : a.transitions())
    if (t.is_epsilon()) succ[t.source].push_back(t.target);
  std::vector<StateId> out;
  for (StateId s = 0; s < n; ++s) {
    std::vector<bool> seen(n, false);
    std::vector<StateId> stack(succ[s].begin(), succ[s].end());
    bool cyclic = false;
    while (!stack.empty() && !cyclic) {
      StateId x = stack.back();
      stack.pop_back();
      if (x == s) cyclic = true;
      if (seen[x]) continue;
      seen[x] = true;
      for (StateId y : succ[x]) stack.push_back(y);
    }
    if (cyclic) out.push_back(s);
  }
  return out;
}

}  // namespace detail

/// Checks the well-formedness clauses of a blind-counter automaton. The result is sorted,
/// so it does not depend on the order transitions were inserted.
inline std::vector<Violation> validate(const BlindCounterAutomaton& a) {
  std::vector<Violation> out;
  if (a.states().empty()) out.push_back({std::string(clause::kNoStates), "", "automaton has no states"});

  std::set<Transition> relation;
  for (auto t : a.transitions()) {
    t.accepting = false;
    relation.insert(t);
  }

  for (const auto& t : a.transitions()) {
    const std::string text = describe(a, t);
    for (std::size_t i = 0; i < a.counter_count(); ++i) {
      const int g = t.guards[i];
      const int d = t.deltas[i];
      const std::string where = " on counter " + std::to_string(i);
      if (g != 0 && g != 1)
        out.push_back({std::string(clause::kGuardRange), text, "guard must be 0 or 1" + where});
      if (d < -1 || d > 1)
        out.push_back({std::string(clause::kDeltaRange), text, "delta must be -1, 0 or +1" + where});
      if (g == 0 && d == -1)
        out.push_back({std::string(clause::kZeroConsistency), text,
                       "guard 0 requires delta in {0,+1}" + where});
      if (g == 0) {
        Transition partner = t;
        partner.accepting = false;
        partner.guards[i] = 1;
        if (!relation.contains(partner))
          out.push_back({std::string(clause::kBlindness), text,
                         "missing guard-1 counterpart" + where});
      }
    }
    if (t.is_epsilon() &&
        std::any_of(t.deltas.begin(), t.deltas.end(), [](std::int8_t d) { return d != 0; }))
      out.push_back({std::string(clause::kEpsilonDelta), text, "epsilon-transition modifies a counter"});
  }

  for (StateId s : detail::epsilon_cycle_states(a))
    out.push_back({std::string(clause::kEpsilonCycle), "",
                   "state " + a.state_name(s) + " lies on an epsilon-cycle"});

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::string to_string(const Violation& v) {
  std::string out = v.clause + ": " + v.message;
  if (!v.transition.empty()) out += " [" + v.transition + "]";
  return out;
}

inline void require_valid(const BlindCounterAutomaton& a) {
  auto violations = validate(a);
  if (!violations.empty()) throw Error("automaton is not well-formed: " + to_string(violations.front()));
}

/// Enabledness of a transition at a counter vector, lifted componentwise: a positive counter
/// needs guard 1; a zero counter needs guard 0 and a non-negative delta.
inline bool enabled(const Transition& t, const std::vector<std::int64_t>& counters) {
  for (std::size_t i = 0; i < counters.size(); ++i) {
    if (counters[i] >= 1) {
      if (t.guards[i] != 1) return false;
    } else {
      if (t.guards[i] != 0 || t.deltas[i] < 0) return false;
    }
  }
  return true;
}

}  // namespace bca

#endif  // BCA_AUTOMATON_HPP
