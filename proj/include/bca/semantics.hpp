#ifndef BCA_SEMANTICS_HPP
#define BCA_SEMANTICS_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "bca/automaton.hpp"
#include "bca/words.hpp"

namespace bca {

struct Configuration {
  StateId state = 0;
  std::vector<std::int64_t> counters;

  friend auto operator<=>(const Configuration&, const Configuration&) = default;
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

inline Configuration initial_configuration(const BlindCounterAutomaton& a) {
  return {a.initial(), std::vector<std::int64_t>(a.counter_count(), 0)};
}

struct Successor {
  std::size_t transition;  // index into a.transitions()
  Configuration config;

  friend auto operator<=>(const Successor&, const Successor&) = default;
};

/// Applies `t` to counters that already satisfy `enabled(t, counters)`.
inline std::vector<std::int64_t> apply(const Transition& t, std::vector<std::int64_t> counters) {
  for (std::size_t i = 0; i < counters.size(); ++i) counters[i] += t.deltas[i];
  return counters;
}

/// All one-step successors on `letter` (which may be kEpsilon), ordered by resulting configuration.
inline std::vector<Successor> successors(const BlindCounterAutomaton& a, const Configuration& c, LetterId letter) {
  std::vector<Successor> out;
  const auto& ts = a.transitions();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto& t = ts[i];
    if (t.source != c.state || t.letter != letter || !enabled(t, c.counters)) continue;
    out.push_back({i, {t.target, apply(t, c.counters)}});
  }
  std::sort(out.begin(), out.end(), [](const Successor& x, const Successor& y) {
    return std::tie(x.config, x.transition) < std::tie(y.config, y.transition);
  });
  return out;
}

/// Configurations reachable by one transition reading `letter`.
inline std::set<Configuration> step_all(const BlindCounterAutomaton& a, const Configuration& c,
                                        std::string_view letter) {
  const LetterId l = a.require_letter(letter);
  std::set<Configuration> out;
  for (auto& s : successors(a, c, l)) out.insert(std::move(s.config));
  return out;
}

inline std::set<Configuration> epsilon_closure(const BlindCounterAutomaton& a, std::set<Configuration> from) {
  std::vector<Configuration> work(from.begin(), from.end());
  while (!work.empty()) {
    Configuration c = std::move(work.back());
    work.pop_back();
    for (auto& s : successors(a, c, kEpsilon))
      if (from.insert(s.config).second) work.push_back(s.config);
  }
  return from;
}

/// Configurations after reading a finite word, with epsilon-moves allowed before, between and
/// after letters. Each character of `word` is one letter.
inline std::set<Configuration> reachable_after(const BlindCounterAutomaton& a, std::string_view word) {
  std::set<Configuration> current = epsilon_closure(a, {initial_configuration(a)});
  for (char ch : word) {
    const LetterId l = a.require_letter(std::string(1, ch));
    std::set<Configuration> next;
    for (const auto& c : current)
      for (auto& s : successors(a, c, l)) next.insert(std::move(s.config));
    current = epsilon_closure(a, std::move(next));
  }
  return current;
}

// ---------------------------------------------------------------------------
// Runs on lasso words

struct RunStep {
  std::size_t transition;  // index into a.transitions()
  std::size_t position;    // lasso position after the step
  Configuration config;    // configuration after the step

  friend bool operator==(const RunStep&, const RunStep&) = default;
};

/// A finite run prefix from (q0, position 0, zero counters). When it is a lasso witness,
/// steps[cycle_start..] is the repeated part; it returns to the (state, position) it started
/// from with counters no smaller than before.
struct Run {
  Configuration initial;
  std::vector<RunStep> steps;
  std::size_t cycle_start = 0;

  const Configuration& config_before(std::size_t step) const {
    return step == 0 ? initial : steps[step - 1].config;
  }
  std::size_t position_before(std::size_t step) const { return step == 0 ? 0 : steps[step - 1].position; }

  friend bool operator==(const Run&, const Run&) = default;
};

inline std::string format_counters(const std::vector<std::int64_t>& cs) {
  std::string out;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(cs[i]);
  }
  return out;
}

/// One line per step, `state pos counter --letter--> state' pos' counter'`, with a
/// `CYCLE-START` line in front of the first repeated step.
inline std::vector<std::string> format_trace(const BlindCounterAutomaton& a, const Run& run) {
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < run.steps.size(); ++i) {
    if (i == run.cycle_start) lines.push_back("CYCLE-START");
    const auto& from = run.config_before(i);
    const auto& step = run.steps[i];
    const auto& t = a.transitions().at(step.transition);
    lines.push_back(a.state_name(from.state) + ' ' + std::to_string(run.position_before(i)) + ' ' +
                    format_counters(from.counters) + " --" + a.letter_name(t.letter) + "--> " +
                    a.state_name(step.config.state) + ' ' + std::to_string(step.position) + ' ' +
                    format_counters(step.config.counters));
  }
  return lines;
}

/// Checks that `run` is a legal run of `a` on `w` and that its cycle is an accepting, repeatable
/// lasso. Returns an empty string on success, otherwise the first problem found.
inline std::string check_lasso_run(const BlindCounterAutomaton& a, const LassoWord& w, const Run& run) {
  if (run.initial != initial_configuration(a)) return "run does not start in the initial configuration";
  if (run.cycle_start >= run.steps.size()) return "run has no cycle";
  bool accepting = false;
  bool reads = false;
  for (std::size_t i = 0; i < run.steps.size(); ++i) {
    const auto& from = run.config_before(i);
    const std::size_t pos = run.position_before(i);
    const auto& step = run.steps[i];
    if (step.transition >= a.transitions().size()) return "step " + std::to_string(i) + ": no such transition";
    const auto& t = a.transitions()[step.transition];
    const std::string where = "step " + std::to_string(i) + ": ";
    if (t.source != from.state) return where + "transition does not leave the current state";
    if (!enabled(t, from.counters)) return where + "transition not enabled at counters " + format_counters(from.counters);
    if (t.is_epsilon()) {
      if (step.position != pos) return where + "epsilon step moved the position";
    } else {
      if (a.letter_name(t.letter) != std::string(1, w.at(pos))) return where + "letter does not match the word";
      if (step.position != w.next_position(pos)) return where + "position does not advance";
    }
    if (step.config != Configuration{t.target, apply(t, from.counters)}) return where + "wrong resulting configuration";
    if (i >= run.cycle_start) {
      accepting = accepting || t.accepting || a.is_accepting(t.source);
      reads = reads || !t.is_epsilon();
    }
  }
  const auto& anchor = run.config_before(run.cycle_start);
  const auto& end = run.steps.back().config;
  if (end.state != anchor.state || run.steps.back().position != run.position_before(run.cycle_start))
    return "cycle does not return to its first node";
  for (std::size_t i = 0; i < end.counters.size(); ++i) {
    if (end.counters[i] < anchor.counters[i]) return "cycle has negative counter effect";
    // A second pass starts higher, where zero-guarded steps are disabled.
    if (end.counters[i] > anchor.counters[i])
      for (std::size_t j = run.cycle_start; j < run.steps.size(); ++j)
        if (a.transitions()[run.steps[j].transition].guards[i] == 0) return "growing cycle tests counter zero";
  }
  if (!reads) return "cycle reads no letter";
  if (!accepting) return "cycle visits no accepting state or transition";
  return {};
}

// ---------------------------------------------------------------------------
// Bounded brute-force acceptance oracle

struct ExplorationCaps {
  std::int64_t counter_cap = 8;
  std::size_t depth_cap = 200;
};

enum class OracleVerdict { accept, reject_within_caps, inconclusive };

inline std::string to_string(OracleVerdict v) {
  switch (v) {
    case OracleVerdict::accept: return "accept";
    case OracleVerdict::reject_within_caps: return "reject-within-caps";
    case OracleVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct OracleResult {
  OracleVerdict verdict = OracleVerdict::inconclusive;
  bool cap_touched = false;    // some successor was dropped for exceeding the counter cap
  bool frontier_hit = false;   // exploration stopped at the depth cap with successors pending
  std::size_t explored = 0;
  std::optional<Run> witness;

  /// Accept is always sound; reject is sound only when no successor was cut off.
  bool conclusive() const {
    return verdict == OracleVerdict::accept ||
           (verdict == OracleVerdict::reject_within_caps && !cap_touched);
  }
  bool accepted() const { return verdict == OracleVerdict::accept; }
};

namespace detail {

/// Explicit configuration graph of `a` on the lasso `w`, truncated by the caps.
struct ConfigGraph {
  struct Node {
    Configuration config;
    std::size_t position;
    std::size_t depth;
    std::size_t parent;      // BFS tree parent, npos for the root
    std::size_t parent_edge; // index into edges[parent]
  };
  struct Edge {
    std::size_t transition;
    std::size_t target;
    bool accepting;
  };
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::vector<Node> nodes;
  std::vector<std::vector<Edge>> edges;  // empty for unexpanded nodes
  std::vector<bool> expanded;
  bool cap_touched = false;
  bool frontier_hit = false;
};

inline ConfigGraph explore(const BlindCounterAutomaton& a, const LassoWord& w, const ExplorationCaps& caps) {
  ConfigGraph g;
  std::map<std::pair<std::size_t, Configuration>, std::size_t> index;
  auto intern = [&](const Configuration& c, std::size_t pos, std::size_t depth, std::size_t parent,
                    std::size_t parent_edge) {
    auto [it, fresh] = index.try_emplace({pos, c}, g.nodes.size());
    if (fresh) {
      g.nodes.push_back({c, pos, depth, parent, parent_edge});
      g.edges.emplace_back();
      g.expanded.push_back(false);
    }
    return it->second;
  };
  intern(initial_configuration(a), 0, 0, ConfigGraph::npos, 0);

  struct Pending {
    std::size_t transition;
    std::size_t position;
    Configuration config;
  };
  for (std::size_t id = 0; id < g.nodes.size(); ++id) {
    const Configuration current = g.nodes[id].config;
    const std::size_t pos = g.nodes[id].position;
    const std::size_t depth = g.nodes[id].depth;

    std::vector<Pending> next;
    for (auto& s : successors(a, current, kEpsilon)) next.push_back({s.transition, pos, std::move(s.config)});
    if (auto l = a.letter_id(std::string(1, w.at(pos))))
      for (auto& s : successors(a, current, *l)) next.push_back({s.transition, w.next_position(pos), std::move(s.config)});
    std::erase_if(next, [&](const Pending& p) {
      bool over = std::any_of(p.config.counters.begin(), p.config.counters.end(),
                              [&](std::int64_t c) { return c > caps.counter_cap; });
      g.cap_touched = g.cap_touched || over;
      return over;
    });
    if (depth >= caps.depth_cap) {
      if (!next.empty()) g.frontier_hit = true;
      continue;
    }
    std::sort(next.begin(), next.end(), [&](const Pending& x, const Pending& y) {
      return std::tie(a.state_name(x.config.state), x.position, x.config.counters, x.transition) <
             std::tie(a.state_name(y.config.state), y.position, y.config.counters, y.transition);
    });
    g.expanded[id] = true;
    for (auto& p : next) {
      const auto& t = a.transitions()[p.transition];
      const bool acc = t.accepting || a.is_accepting(t.source);
      const std::size_t edge_index = g.edges[id].size();
      const std::size_t target = intern(p.config, p.position, depth + 1, id, edge_index);
      g.edges[id].push_back({p.transition, target, acc});
    }
  }
  return g;
}

/// Iterative Tarjan; component ids are assigned in reverse topological order.
template <typename Successors>
std::vector<std::size_t> strongly_connected_components(std::size_t n, Successors&& succ) {
  constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unvisited), low(n, 0), comp(n, unvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // node, next successor slot
  std::size_t counter = 0, components = 0;
  std::vector<std::size_t> scratch;
  std::vector<std::vector<std::size_t>> cache(n);
  std::vector<bool> cached(n, false);
  auto out = [&](std::size_t v) -> const std::vector<std::size_t>& {
    if (!cached[v]) {
      scratch.clear();
      succ(v, scratch);
      cache[v] = scratch;
      cached[v] = true;
    }
    return cache[v];
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, slot] = call.back();
      const auto& next = out(v);
      if (slot < next.size()) {
        const std::size_t w = next[slot++];
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = components;
        } while (w != done);
        ++components;
      }
      cached[done] = false;
      cache[done].clear();
      cache[done].shrink_to_fit();
    }
  }
  return comp;
}

inline std::vector<std::size_t> components_of(const ConfigGraph& g) {
  return strongly_connected_components(g.nodes.size(), [&](std::size_t v, std::vector<std::size_t>& out) {
    for (const auto& e : g.edges[v]) out.push_back(e.target);
  });
}

inline std::vector<std::pair<std::size_t, std::size_t>> bfs_path(const ConfigGraph& g, std::size_t from,
                                                                 std::size_t to, const std::vector<std::size_t>& comp) {
  // (node, edge index) pairs leading from `from` to `to` inside from's component.
  std::vector<std::pair<std::size_t, std::size_t>> prev(g.nodes.size(), {ConfigGraph::npos, 0});
  std::vector<bool> seen(g.nodes.size(), false);
  std::queue<std::size_t> q;
  q.push(from);
  seen[from] = true;
  while (!q.empty() && !seen[to]) {
    std::size_t v = q.front();
    q.pop();
    for (std::size_t e = 0; e < g.edges[v].size(); ++e) {
      std::size_t w = g.edges[v][e].target;
      if (seen[w] || comp[w] != comp[from]) continue;
      seen[w] = true;
      prev[w] = {v, e};
      q.push(w);
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> path;
  if (from == to) return path;
  for (std::size_t v = to; v != from; v = prev[v].first) path.push_back(prev[v]);
  std::reverse(path.begin(), path.end());
  return path;
}

inline RunStep step_of(const ConfigGraph& g, std::size_t node, std::size_t edge) {
  const auto& e = g.edges[node][edge];
  return {e.transition, g.nodes[e.target].position, g.nodes[e.target].config};
}

inline Run lasso_run(const ConfigGraph& g, const std::vector<std::pair<std::size_t, std::size_t>>& stem,
                     const std::vector<std::pair<std::size_t, std::size_t>>& cycle) {
  Run run;
  run.initial = g.nodes[0].config;
  for (auto [v, e] : stem) run.steps.push_back(step_of(g, v, e));
  run.cycle_start = run.steps.size();
  for (auto [v, e] : cycle) run.steps.push_back(step_of(g, v, e));
  return run;
}

inline std::vector<std::pair<std::size_t, std::size_t>> tree_path(const ConfigGraph& g, std::size_t to) {
  std::vector<std::pair<std::size_t, std::size_t>> path;
  for (std::size_t v = to; g.nodes[v].parent != ConfigGraph::npos; v = g.nodes[v].parent)
    path.emplace_back(g.nodes[v].parent, g.nodes[v].parent_edge);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace detail

/// Bounded search for an accepting lasso run of `a` on `w`: explores configurations
/// (state, position, counters <= counter_cap) breadth-first up to depth_cap and looks for a
/// reachable cycle that fires an accepting transition or leaves an accepting state.
/// Epsilon-transitions are followed as non-reading steps.
inline OracleResult oracle_accept(const BlindCounterAutomaton& a, const LassoWord& w, const ExplorationCaps& caps) {
  require_valid(a);
  if (caps.counter_cap < 0) throw Error("counter cap must be non-negative");
  const auto g = detail::explore(a, w, caps);
  OracleResult result;
  result.cap_touched = g.cap_touched;
  result.frontier_hit = g.frontier_hit;
  result.explored = g.nodes.size();

  const auto comp = detail::components_of(g);
  for (std::size_t v = 0; v < g.nodes.size(); ++v) {
    for (std::size_t e = 0; e < g.edges[v].size(); ++e) {
      const auto& edge = g.edges[v][e];
      if (!edge.accepting || comp[edge.target] != comp[v]) continue;
      auto cycle = detail::bfs_path(g, edge.target, v, comp);
      cycle.insert(cycle.begin(), {v, e});
      result.verdict = OracleVerdict::accept;
      result.witness = detail::lasso_run(g, detail::tree_path(g, v), cycle);
      return result;
    }
  }
  result.verdict = g.frontier_hit ? OracleVerdict::inconclusive : OracleVerdict::reject_within_caps;
  return result;
}

/// Distinct accepting lasso runs (simple stem plus simple cycle in the bounded configuration
/// graph), in depth-first order over the graph's deterministic edge order.
inline std::vector<Run> enumerate_accepting_runs(const BlindCounterAutomaton& a, const LassoWord& w,
                                                 const ExplorationCaps& caps, std::size_t limit,
                                                 std::size_t budget = 2'000'000) {
  require_valid(a);
  std::vector<Run> runs;
  if (limit == 0) return runs;
  const auto g = detail::explore(a, w, caps);
  const auto comp = detail::components_of(g);
  const std::size_t n = g.nodes.size();

  // Nodes that can still reach an accepting edge inside a component.
  std::vector<bool> useful(n, false);
  std::vector<std::vector<std::size_t>> pred(n);
  for (std::size_t v = 0; v < n; ++v)
    for (const auto& e : g.edges[v]) {
      pred[e.target].push_back(v);
      if (e.accepting && comp[e.target] == comp[v]) useful[v] = true;
    }
  std::vector<std::size_t> work;
  for (std::size_t v = 0; v < n; ++v)
    if (useful[v]) work.push_back(v);
  while (!work.empty()) {
    std::size_t v = work.back();
    work.pop_back();
    for (std::size_t p : pred[v])
      if (!useful[p]) useful[p] = true, work.push_back(p);
  }
  if (!useful[0]) return runs;

  std::vector<std::size_t> on_path(n, detail::ConfigGraph::npos);
  std::vector<std::pair<std::size_t, std::size_t>> path;  // (node, edge) steps
  std::vector<std::size_t> nodes{0};
  on_path[0] = 0;
  std::vector<std::size_t> next_edge{0};
  while (!nodes.empty() && runs.size() < limit && budget > 0) {
    --budget;
    const std::size_t v = nodes.back();
    std::size_t& e = next_edge.back();
    if (e >= g.edges[v].size() || nodes.size() > caps.depth_cap) {
      on_path[v] = detail::ConfigGraph::npos;
      nodes.pop_back();
      next_edge.pop_back();
      if (!path.empty()) path.pop_back();
      continue;
    }
    const std::size_t edge = e++;
    const std::size_t target = g.edges[v][edge].target;
    if (on_path[target] != detail::ConfigGraph::npos) {
      const std::size_t j = on_path[target];
      bool accepting = g.edges[v][edge].accepting;
      for (std::size_t s = j; s < path.size(); ++s) accepting = accepting || g.edges[path[s].first][path[s].second].accepting;
      if (accepting) {
        std::vector<std::pair<std::size_t, std::size_t>> stem(path.begin(), path.begin() + j);
        std::vector<std::pair<std::size_t, std::size_t>> cycle(path.begin() + j, path.end());
        cycle.emplace_back(v, edge);
        runs.push_back(detail::lasso_run(g, stem, cycle));
      }
      continue;
    }
    if (!useful[target]) continue;
    path.emplace_back(v, edge);
    on_path[target] = nodes.size();
    nodes.push_back(target);
    next_edge.push_back(0);
  }
  return runs;
}

}  // namespace bca

#endif  // BCA_SEMANTICS_HPP
