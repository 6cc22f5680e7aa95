#ifndef BCA_PETRI_NET_HPP
#define BCA_PETRI_NET_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bca/automaton.hpp"
#include "bca/automaton_io.hpp"
#include "bca/semantics.hpp"
#include "bca/words.hpp"

namespace bca {

// Net files, one declaration per line, `#` starts a comment:
//
//   place p unbounded
//   place t bounded 1
//   trans produce a in: out: p        label `eps` is the empty letter
//   trans consume b in: p out:        arcs are comma-separated place names, repeats count
//   init t=1                          (optional; unlisted places start empty)
//   accept {t=0}; {t=1}               accepting markings of the bounded places; unlisted ones are 0

struct Place {
  std::string name;
  std::optional<std::int64_t> bound;  // nullopt: unbounded

  bool bounded() const { return bound.has_value(); }
};

using Marking = std::vector<std::int64_t>;

struct NetTransition {
  std::string name;
  std::string label;
  std::vector<std::int64_t> input;
  std::vector<std::int64_t> output;
};

struct LabeledPetriNet {
  std::vector<Place> places;
  std::vector<NetTransition> transitions;
  Marking initial;
  std::set<Marking> accepting;  // over the bounded places, in place order

  std::vector<std::size_t> bounded_places() const {
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p < places.size(); ++p)
      if (places[p].bounded()) out.push_back(p);
    return out;
  }

  std::vector<std::size_t> unbounded_places() const {
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p < places.size(); ++p)
      if (!places[p].bounded()) out.push_back(p);
    return out;
  }

  std::vector<std::string> labels() const {
    std::set<std::string> out;
    for (const auto& t : transitions)
      if (t.label != kEpsilonName) out.insert(t.label);
    return {out.begin(), out.end()};
  }

  std::optional<std::size_t> place_id(std::string_view name) const {
    for (std::size_t p = 0; p < places.size(); ++p)
      if (places[p].name == name) return p;
    return std::nullopt;
  }

  Marking control(const Marking& m) const {
    Marking out;
    for (std::size_t p : bounded_places()) out.push_back(m[p]);
    return out;
  }
};

/// "{p=1,q=0}" over the listed places.
inline std::string format_marking(const LabeledPetriNet& net, const Marking& m, const std::vector<std::size_t>& which) {
  std::string out = "{";
  for (std::size_t i = 0; i < which.size(); ++i) {
    if (i) out += ',';
    out += net.places[which[i]].name + '=' + std::to_string(m[i]);
  }
  return out + '}';
}

inline std::string format_marking(const LabeledPetriNet& net, const Marking& m) {
  std::vector<std::size_t> all(net.places.size());
  for (std::size_t p = 0; p < all.size(); ++p) all[p] = p;
  return format_marking(net, m, all);
}

inline void check_net(const LabeledPetriNet& net) {
  const std::size_t n = net.places.size();
  if (net.initial.size() != n) throw Error("initial marking has the wrong size");
  for (std::size_t p = 0; p < n; ++p) {
    if (net.initial[p] < 0) throw Error("negative initial marking on " + net.places[p].name);
    if (net.places[p].bounded() && net.initial[p] > *net.places[p].bound)
      throw Error("initial marking exceeds the bound of " + net.places[p].name);
  }
  for (const auto& t : net.transitions) {
    if (t.input.size() != n || t.output.size() != n) throw Error("transition " + t.name + " has the wrong arity");
    for (std::size_t p = 0; p < n; ++p)
      if (!net.places[p].bounded() && (t.input[p] > 1 || t.output[p] > 1))
        throw Error("transition " + t.name + " moves more than one token on unbounded place " + net.places[p].name);
  }
  const auto bounded = net.bounded_places();
  for (const auto& m : net.accepting) {
    if (m.size() != bounded.size()) throw Error("accepting marking has the wrong size");
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i] < 0 || m[i] > *net.places[bounded[i]].bound)
        throw Error("accepting marking " + format_marking(net, m, bounded) + " exceeds a bound");
  }
}

namespace detail {

inline bool net_enabled(const NetTransition& t, const Marking& m) {
  for (std::size_t p = 0; p < m.size(); ++p)
    if (m[p] < t.input[p]) return false;
  return true;
}

inline Marking net_fire(const LabeledPetriNet& net, const NetTransition& t, const Marking& m) {
  Marking out = m;
  for (std::size_t p = 0; p < m.size(); ++p) {
    out[p] += t.output[p] - t.input[p];
    if (net.places[p].bounded() && out[p] > *net.places[p].bound)
      throw Error("bounded place " + net.places[p].name + " overflows: firing " + t.name + " from " +
                  format_marking(net, m) + " gives " + format_marking(net, out));
  }
  return out;
}

}  // namespace detail

/// States are the reachable markings of the bounded places, counters the unbounded places.
/// A net with no unbounded place gets one idle counter.
inline BlindCounterAutomaton translate(const LabeledPetriNet& net) {
  check_net(net);
  const auto bounded = net.bounded_places();
  const auto unbounded = net.unbounded_places();
  for (std::size_t p : unbounded)
    if (net.initial[p] != 0)
      throw Error("unbounded place " + net.places[p].name + " must start empty to become a counter");
  const std::size_t k = std::max<std::size_t>(1, unbounded.size());

  BlindCounterAutomaton a(k);
  for (const auto& l : net.labels()) a.add_letter(l);

  // Full markings with the unbounded places at 0; only the bounded part matters here.
  auto project = [&](const Marking& full) { return net.control(full); };
  auto full_of = [&](const Marking& control) {
    Marking full(net.places.size(), 0);
    for (std::size_t i = 0; i < bounded.size(); ++i) full[bounded[i]] = control[i];
    return full;
  };
  std::map<Marking, StateId> ids;
  std::deque<Marking> queue;
  auto visit = [&](const Marking& control) {
    if (auto it = ids.find(control); it != ids.end()) return it->second;
    const StateId s = a.add_state(format_marking(net, control, bounded));
    ids.emplace(control, s);
    queue.push_back(control);
    return s;
  };
  a.set_initial(visit(project(net.initial)));

  while (!queue.empty()) {
    const Marking control = queue.front();
    queue.pop_front();
    const StateId source = ids.at(control);
    if (net.accepting.contains(control)) a.set_accepting(source);
    for (const auto& t : net.transitions) {
      Marking full = full_of(control);
      for (std::size_t p : unbounded) full[p] = t.input[p];  // enough tokens to test the bounded part
      if (!detail::net_enabled(t, full)) continue;
      const StateId target = visit(project(detail::net_fire(net, t, full)));

      std::vector<std::vector<std::int8_t>> guard_options(k, {0, 1});
      std::vector<std::int8_t> deltas(k, 0);
      for (std::size_t i = 0; i < unbounded.size(); ++i) {
        const std::size_t p = unbounded[i];
        deltas[i] = static_cast<std::int8_t>(t.output[p] - t.input[p]);
        if (t.input[p] > 0) guard_options[i] = {1};
      }
      const bool eps = t.label == kEpsilonName;
      if (eps && std::any_of(deltas.begin(), deltas.end(), [](std::int8_t d) { return d != 0; }))
        throw Error("epsilon transition " + t.name + " changes an unbounded place");
      const LetterId letter = eps ? kEpsilon : a.require_letter(t.label);

      std::vector<std::int8_t> guards(k, 0);
      auto emit = [&](auto&& self, std::size_t i) -> void {
        if (i == k) {
          a.add_transition(Transition{source, letter, guards, target, deltas, false});
          return;
        }
        for (std::int8_t g : guard_options[i]) {
          guards[i] = g;
          self(self, i + 1);
        }
      };
      emit(emit, 0);
    }
  }
  return a;
}

/// Markings reachable by firing sequences whose labels spell `prefix`, with epsilon
/// transitions interleaved anywhere.
inline std::set<Marking> simulate_net(const LabeledPetriNet& net, const std::vector<std::string>& prefix,
                                      std::size_t closure_limit = 100000) {
  check_net(net);
  auto close = [&](std::set<Marking> current) {
    std::deque<Marking> queue(current.begin(), current.end());
    while (!queue.empty()) {
      const Marking m = queue.front();
      queue.pop_front();
      for (const auto& t : net.transitions) {
        if (t.label != kEpsilonName || !detail::net_enabled(t, m)) continue;
        Marking next = detail::net_fire(net, t, m);
        if (current.insert(next).second) {
          if (current.size() > closure_limit) throw Error("epsilon closure exceeds " + std::to_string(closure_limit) + " markings");
          queue.push_back(std::move(next));
        }
      }
    }
    return current;
  };
  std::set<Marking> current = close({net.initial});
  for (const auto& letter : prefix) {
    std::set<Marking> next;
    for (const auto& m : current)
      for (const auto& t : net.transitions)
        if (t.label == letter && detail::net_enabled(t, m)) next.insert(detail::net_fire(net, t, m));
    current = close(std::move(next));
  }
  return current;
}

/// Bounded Büchi search directly on the token game: configurations (marking, position) with
/// every unbounded place at most `counter_cap`, explored breadth-first to depth `depth_cap`.
/// A run is accepting when it visits an accepting control marking infinitely often.
inline OracleResult net_oracle_accept(const LabeledPetriNet& net, const LassoWord& w, ExplorationCaps caps = {}) {
  check_net(net);
  if (w.period.empty()) throw Error("lasso period must be non-empty");
  using Node = std::pair<Marking, std::size_t>;
  std::map<Node, std::size_t> ids;
  std::vector<Node> nodes;
  std::vector<std::size_t> depth;
  std::vector<std::vector<std::size_t>> succ;
  OracleResult result;

  auto intern = [&](Node node, std::size_t d) {
    auto [it, fresh] = ids.emplace(node, nodes.size());
    if (fresh) {
      nodes.push_back(std::move(node));
      depth.push_back(d);
      succ.emplace_back();
    }
    return it->second;
  };
  intern({net.initial, 0}, 0);
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    if (depth[v] >= caps.depth_cap) {
      result.frontier_hit = true;
      continue;
    }
    const auto [m, pos] = nodes[v];
    const std::string letter(1, w.at(pos));
    for (const auto& t : net.transitions) {
      const bool eps = t.label == kEpsilonName;
      if ((!eps && t.label != letter) || !detail::net_enabled(t, m)) continue;
      Marking next = detail::net_fire(net, t, m);
      bool over = false;
      for (std::size_t p = 0; p < next.size(); ++p)
        if (!net.places[p].bounded() && next[p] > caps.counter_cap) over = true;
      if (over) {
        result.cap_touched = true;
        continue;
      }
      const std::size_t u = intern({std::move(next), eps ? pos : w.next_position(pos)}, depth[v] + 1);
      succ[v].push_back(u);
    }
  }
  result.explored = nodes.size();

  const auto comp = detail::strongly_connected_components(nodes.size(), [&](std::size_t v, std::vector<std::size_t>& out) {
    out = succ[v];
  });
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    if (!net.accepting.contains(net.control(nodes[v].first))) continue;
    const bool cyclic = std::any_of(succ[v].begin(), succ[v].end(), [&](std::size_t u) { return comp[u] == comp[v]; });
    if (cyclic) {
      result.verdict = OracleVerdict::accept;
      return result;
    }
  }
  result.verdict = result.frontier_hit ? OracleVerdict::inconclusive : OracleVerdict::reject_within_caps;
  return result;
}

inline LabeledPetriNet parse_net(std::string_view text) {
  LabeledPetriNet net;
  struct PendingTrans {
    std::size_t line;
    std::string name, label;
    std::vector<std::string> in, out;
  };
  std::vector<PendingTrans> pending;
  std::vector<std::pair<std::size_t, std::string>> inits, accepts;
  std::size_t number = 0;
  std::istringstream stream{std::string(text)};
  auto fail = [&](const std::string& msg) -> Error { return Error("line " + std::to_string(number) + ": " + msg); };

  for (std::string line; std::getline(stream, line);) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto toks = detail::tokens(line);
    if (toks.empty()) continue;
    const std::string& kind = toks.front();
    if (kind == "place") {
      if (toks.size() < 3) throw fail("expected 'place NAME bounded B' or 'place NAME unbounded'");
      if (net.place_id(toks[1])) throw fail("duplicate place '" + toks[1] + "'");
      Place p{toks[1], std::nullopt};
      if (toks[2] == "bounded" && toks.size() == 4) {
        p.bound = static_cast<std::int64_t>(detail::parse_uint(toks[3], "bound"));
      } else if (toks[2] != "unbounded" || toks.size() != 3) {
        throw fail("expected 'bounded B' or 'unbounded'");
      }
      net.places.push_back(std::move(p));
    } else if (kind == "trans") {
      if (toks.size() < 5) throw fail("expected 'trans NAME LABEL in: ... out: ...'");
      PendingTrans t{number, toks[1], toks[2], {}, {}};
      std::vector<std::string>* target = nullptr;
      for (std::size_t i = 3; i < toks.size(); ++i) {
        if (toks[i] == "in:") {
          target = &t.in;
        } else if (toks[i] == "out:") {
          target = &t.out;
        } else if (!target) {
          throw fail("expected 'in:' after the label");
        } else {
          for (auto part : detail::split(toks[i], ','))
            if (!detail::trim(part).empty()) target->emplace_back(detail::trim(part));
        }
      }
      pending.push_back(std::move(t));
    } else if (kind == "init") {
      std::string rest;
      for (std::size_t i = 1; i < toks.size(); ++i) rest += toks[i];
      inits.emplace_back(number, rest);
    } else if (kind == "accept") {
      std::string rest;
      for (std::size_t i = 1; i < toks.size(); ++i) rest += toks[i];
      accepts.emplace_back(number, rest);
    } else {
      throw fail("unknown declaration '" + kind + "'");
    }
  }

  const std::size_t n = net.places.size();
  auto resolve = [&](const std::string& name, std::size_t line) {
    if (auto p = net.place_id(name)) return *p;
    throw Error("line " + std::to_string(line) + ": unknown place '" + name + "'");
  };
  auto assignments = [&](std::string_view text, std::size_t line) {
    Marking m(n, 0);
    for (auto part : detail::split(text, ',')) {
      part = detail::trim(part);
      if (part.empty()) continue;
      const auto eq = part.find('=');
      if (eq == std::string_view::npos) throw Error("line " + std::to_string(line) + ": expected p=n");
      const std::size_t p = resolve(std::string(detail::trim(part.substr(0, eq))), line);
      m[p] = static_cast<std::int64_t>(detail::parse_uint(part.substr(eq + 1), "token count"));
    }
    return m;
  };

  for (const auto& t : pending) {
    NetTransition nt{t.name, t.label, std::vector<std::int64_t>(n, 0), std::vector<std::int64_t>(n, 0)};
    for (const auto& p : t.in) ++nt.input[resolve(p, t.line)];
    for (const auto& p : t.out) ++nt.output[resolve(p, t.line)];
    net.transitions.push_back(std::move(nt));
  }
  if (inits.size() > 1) throw Error("line " + std::to_string(inits[1].first) + ": duplicate init");
  net.initial = inits.empty() ? Marking(n, 0) : assignments(inits.front().second, inits.front().first);

  const auto bounded = net.bounded_places();
  for (const auto& [line, text] : accepts) {
    for (auto part : detail::split(text, ';')) {
      part = detail::trim(part);
      if (part.empty()) continue;
      if (part.front() != '{' || part.back() != '}')
        throw Error("line " + std::to_string(line) + ": expected '{p=n,...}'");
      const Marking full = assignments(part.substr(1, part.size() - 2), line);
      for (std::size_t p = 0; p < n; ++p)
        if (!net.places[p].bounded() && full[p] != 0)
          throw Error("line " + std::to_string(line) + ": accepting markings range over bounded places only");
      net.accepting.insert(net.control(full));
    }
  }
  check_net(net);
  return net;
}

}  // namespace bca

#endif  // BCA_PETRI_NET_HPP
