#ifndef BCA_TESTS_SUPPORT_HPP
#define BCA_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "bca/automaton.hpp"
#include "bca/semantics.hpp"
#include "bca/words.hpp"

namespace bca::testing {

/// All (u, v) over {a,b} with |u| <= max_u, 1 <= |v| <= max_v.
inline std::vector<LassoWord> all_lassos(std::size_t max_u, std::size_t max_v) {
  auto words_of = [](std::size_t len) {
    std::vector<std::string> out;
    for (std::size_t bits = 0; bits < (std::size_t{1} << len); ++bits) {
      std::string w;
      for (std::size_t i = 0; i < len; ++i) w += (bits >> (len - 1 - i)) & 1 ? 'b' : 'a';
      out.push_back(w);
    }
    return out;
  };
  std::vector<LassoWord> out;
  for (std::size_t lu = 0; lu <= max_u; ++lu)
    for (const auto& u : words_of(lu))
      for (std::size_t lv = 1; lv <= max_v; ++lv)
        for (const auto& v : words_of(lv)) out.push_back(LassoWord{u, v});
  return out;
}

/// The small-lasso suite: |u| <= 2, |v| <= 6, restricted to Z.
inline const std::vector<LassoWord>& z_suite() {
  static const std::vector<LassoWord> suite = [] {
    std::vector<LassoWord> out;
    for (auto& w : all_lassos(2, 6))
      if (in_z(w)) out.push_back(w);
    return out;
  }();
  return suite;
}

/// Membership in L(A) for the liminf automaton on Z, in closed form: the block period has a
/// positive block. (Choose N above every n of the period; then every positive period block is
/// affordable forever. Conversely an accepting run uses infinitely many positive blocks.)
inline bool liminf_closed_form(const LassoWord& w) {
  const auto blocks = decompose_blocks(w);
  return std::any_of(blocks.period.begin(), blocks.period.end(), [](const Block& b) { return b.k >= b.n; });
}

inline IntegerLasso random_integer_lasso(std::mt19937_64& rng, std::uint64_t max_value, std::size_t max_prefix,
                                         std::size_t max_period) {
  std::uniform_int_distribution<std::uint64_t> value(0, max_value);
  std::uniform_int_distribution<std::size_t> plen(0, max_prefix), vlen(1, max_period);
  IntegerLasso x;
  for (std::size_t i = plen(rng); i > 0; --i) x.prefix.push_back(value(rng));
  for (std::size_t i = vlen(rng); i > 0; --i) x.period.push_back(value(rng));
  return x;
}

inline LassoWord random_lasso(std::mt19937_64& rng, std::size_t max_u, std::size_t max_v) {
  std::uniform_int_distribution<std::size_t> lu(0, max_u), lv(1, max_v);
  std::bernoulli_distribution coin(0.5);
  LassoWord w;
  for (std::size_t i = lu(rng); i > 0; --i) w.prefix += coin(rng) ? 'a' : 'b';
  for (std::size_t i = lv(rng); i > 0; --i) w.period += coin(rng) ? 'a' : 'b';
  return w;
}

/// A random valid epsilon-free one-counter automaton over {a,b}. Zero-guarded transitions get
/// their guard-1 partner, accepting marks are put on both members of a pair, and some
/// transitions are guard-1 only.
inline BlindCounterAutomaton random_automaton(std::mt19937_64& rng, std::size_t max_states) {
  std::uniform_int_distribution<std::size_t> count(1, max_states);
  const std::size_t n = count(rng);
  BlindCounterAutomaton a(1);
  for (std::size_t i = 0; i < n; ++i) a.add_state("q" + std::to_string(i));
  a.add_letter("a");
  a.add_letter("b");
  a.set_initial(0);
  std::bernoulli_distribution accepting_state(0.3), accepting_edge(0.1), pair(0.6);
  for (std::size_t i = 0; i < n; ++i)
    if (accepting_state(rng)) a.set_accepting(static_cast<StateId>(i));
  std::uniform_int_distribution<std::size_t> state(0, n - 1), edges(n, 3 * n + 2);
  std::uniform_int_distribution<int> letter(0, 1), delta(-1, 1);
  for (std::size_t e = edges(rng); e > 0; --e) {
    const auto s = static_cast<StateId>(state(rng));
    const auto t = static_cast<StateId>(state(rng));
    const auto l = static_cast<LetterId>(letter(rng));
    const auto d = static_cast<std::int8_t>(delta(rng));
    const bool acc = accepting_edge(rng);
    a.add_transition(Transition{s, l, {1}, t, {d}, acc});
    if (d >= 0 && pair(rng)) a.add_transition(Transition{s, l, {0}, t, {d}, acc});
  }
  return a;
}

/// Naive reference oracle: explicit configuration set (state, position, counter <= cap), with
/// reachability recomputed from scratch for every accepting edge. Returns nullopt when the cap
/// cut some successor off and no accepting cycle was found.
inline std::optional<bool> naive_accepts(const BlindCounterAutomaton& a, const LassoWord& w, std::int64_t cap) {
  using Node = std::tuple<StateId, std::size_t, std::int64_t>;
  bool touched = false;
  auto next = [&](const Node& v) {
    std::vector<std::pair<Node, bool>> out;
    const auto [q, pos, c] = v;
    for (const auto& t : a.transitions()) {
      if (t.source != q) continue;
      if (!t.is_epsilon() && a.letter_name(t.letter) != std::string(1, w.at(pos))) continue;
      if (!enabled(t, {c})) continue;
      const std::int64_t c2 = c + t.deltas[0];
      if (c2 > cap) {
        touched = true;
        continue;
      }
      out.emplace_back(Node{t.target, t.is_epsilon() ? pos : w.next_position(pos), c2},
                       t.accepting || a.is_accepting(q));
    }
    return out;
  };
  auto reach = [&](const Node& from) {
    std::set<Node> seen{from};
    std::vector<Node> stack{from};
    while (!stack.empty()) {
      Node v = stack.back();
      stack.pop_back();
      for (auto& [u, acc] : next(v))
        if (seen.insert(u).second) stack.push_back(u);
    }
    return seen;
  };
  const auto from_root = reach(Node{a.initial(), 0, 0});
  for (const auto& v : from_root)
    for (const auto& [u, acc] : next(v))
      if (acc && reach(u).contains(v)) return true;
  if (touched) return std::nullopt;
  return false;
}

}  // namespace bca::testing

#endif  // BCA_TESTS_SUPPORT_HPP
