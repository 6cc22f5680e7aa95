#ifndef BCA_LIMINF_AUTOMATON_HPP
#define BCA_LIMINF_AUTOMATON_HPP

#include <string_view>

#include "bca/automaton.hpp"

namespace bca {

/// Adds the edge q --letter:delta--> q', i.e. the guard-0 and guard-1 instances. The guard-0
/// instance of a decrement would be ill-formed, so decrements get the guard-1 instance only.
inline void add_edge_pair(BlindCounterAutomaton& a, std::string_view source, std::string_view letter,
                          std::string_view target, int delta) {
  if (delta >= 0) a.add_transition(source, letter, {0}, target, {delta});
  a.add_transition(source, letter, {1}, target, {delta});
}

/// The one-blind-counter automaton over {a,b} whose language is the set of words
/// a^n0 b^k0 a^n1 b^k1 ... for which some initial counter N lets infinitely many blocks be
/// read with a decrement per a and an increment per b without the counter going negative.
///
///   I, Ia, Ib   read the first N letters, incrementing on each
///   Wa, Wb      wait for the end of the block in progress
///   G           block start: skip the block (to Wa) or use it (to Ma)
///   Ma, F, Mb   use a block: decrement on a's, visit F, increment on b's
inline BlindCounterAutomaton build_liminf_automaton() {
  BlindCounterAutomaton a(1);
  for (auto s : {"I", "Ia", "Ib", "Wa", "Wb", "G", "Ma", "F", "Mb"}) a.add_state(s);
  a.add_letter("a");
  a.add_letter("b");
  a.set_initial(a.require_state("I"));
  a.set_accepting(a.require_state("F"));

  add_edge_pair(a, "I", "a", "Ia", +1);
  add_edge_pair(a, "Ia", "a", "Ia", +1);
  add_edge_pair(a, "Ia", "b", "Ib", +1);
  add_edge_pair(a, "Ib", "b", "Ib", +1);
  add_edge_pair(a, "Ib", "a", "Ia", +1);
  add_edge_pair(a, "Wa", "a", "Wa", 0);
  add_edge_pair(a, "Wa", "b", "Wb", 0);
  add_edge_pair(a, "Wb", "b", "Wb", 0);
  add_edge_pair(a, "G", "a", "Ma", -1);
  add_edge_pair(a, "Ma", "a", "Ma", -1);
  add_edge_pair(a, "F", "b", "Mb", +1);
  add_edge_pair(a, "Mb", "b", "Mb", +1);
  add_edge_pair(a, "G", "a", "Wa", 0);

  add_edge_pair(a, "Ia", "eps", "Wa", 0);
  add_edge_pair(a, "Ib", "eps", "Wb", 0);
  add_edge_pair(a, "Wb", "eps", "G", 0);
  add_edge_pair(a, "Ma", "eps", "F", 0);
  add_edge_pair(a, "Mb", "eps", "G", 0);
  return a;
}

}  // namespace bca

#endif  // BCA_LIMINF_AUTOMATON_HPP
