#ifndef BCA_LASSO_DECISION_HPP
#define BCA_LASSO_DECISION_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "bca/automaton.hpp"
#include "bca/semantics.hpp"
#include "bca/words.hpp"

namespace bca {

// ---------------------------------------------------------------------------
// Product of a one-counter automaton with a lasso

struct ProductNode {
  StateId state;
  std::size_t position;
};

/// A zero-edge fires only at counter 0 (guard 0, delta 0 or +1); a positive edge fires only at
/// counter >= 1.
struct ProductEdge {
  std::size_t from;
  std::size_t to;
  std::size_t transition;
  bool zero;
  int delta;
  bool accepting;  // accepting transition, or leaves an accepting state
};

struct ProductGraph {
  std::vector<ProductNode> nodes;            // reachable ones, in BFS order from (q0, 0)
  std::vector<ProductEdge> edges;
  std::vector<std::vector<std::size_t>> out; // edge indices per node

  std::size_t node_count() const { return nodes.size(); }
};

inline ProductGraph build_product(const BlindCounterAutomaton& a, const LassoWord& w) {
  if (a.counter_count() != 1)
    throw Error("lasso decision needs exactly one counter, automaton has " + std::to_string(a.counter_count()));
  if (a.has_epsilon()) throw Error("lasso decision needs an epsilon-free automaton");
  require_valid(a);

  ProductGraph g;
  std::map<std::pair<StateId, std::size_t>, std::size_t> index;
  auto intern = [&](StateId s, std::size_t pos) {
    auto [it, fresh] = index.try_emplace({s, pos}, g.nodes.size());
    if (fresh) {
      g.nodes.push_back({s, pos});
      g.out.emplace_back();
    }
    return it->second;
  };
  intern(a.initial(), 0);
  for (std::size_t v = 0; v < g.nodes.size(); ++v) {
    const auto [state, pos] = g.nodes[v];
    const auto letter = a.letter_id(std::string(1, w.at(pos)));
    if (!letter) continue;
    const auto& ts = a.transitions();
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const auto& t = ts[i];
      if (t.source != state || t.letter != *letter) continue;
      const std::size_t to = intern(t.target, w.next_position(pos));
      g.out[v].push_back(g.edges.size());
      g.edges.push_back({v, to, i, t.guards[0] == 0, t.deltas[0], t.accepting || a.is_accepting(t.source)});
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Verdicts

struct AcceptanceVerdict {
  bool accepted = false;
  char kind = '-';              // 'Z': the cycle meets counter 0; 'P': it stays positive
  std::int64_t requirement = 0; // least starting counter that executes the cycle
  bool pumped = false;          // stem pumps a positive cycle to reach the requirement
  std::optional<Run> witness;
  std::int64_t cutoff = 0;      // counter bound used for the bounded phase
  std::size_t node_count = 0;
};

/// key=value lines followed by the witness trace (one `trace=` line per step).
inline std::vector<std::string> format_verdict(const BlindCounterAutomaton& a, const AcceptanceVerdict& v) {
  std::vector<std::string> lines;
  lines.push_back(std::string("accepted=") + (v.accepted ? "true" : "false"));
  lines.push_back("nodes=" + std::to_string(v.node_count));
  lines.push_back("cutoff=" + std::to_string(v.cutoff));
  if (!v.accepted) return lines;
  lines.push_back(std::string("case=") + v.kind);
  lines.push_back("requirement=" + std::to_string(v.requirement));
  lines.push_back(std::string("pumped=") + (v.pumped ? "true" : "false"));
  if (v.witness)
    for (auto& line : format_trace(a, *v.witness)) lines.push_back("trace=" + line);
  return lines;
}

/// Least counter value from which the edge sequence can be executed: each zero-edge needs
/// counter 0 and each positive edge needs counter >= 1 at the moment it fires.
inline std::int64_t cycle_requirement(const ProductGraph& g, const std::vector<std::size_t>& edges) {
  std::int64_t prefix = 0, need = 0;
  for (std::size_t e : edges) {
    need = std::max<std::int64_t>(need, (g.edges[e].zero ? 0 : 1) - prefix);
    prefix += g.edges[e].delta;
  }
  return need;
}

namespace detail {

/// Configurations (node, c) with 0 <= c <= cutoff, packed as node * (cutoff + 1) + c.
class BoundedConfigs {
 public:
  BoundedConfigs(const ProductGraph& g, std::int64_t cutoff) : g_(g), width_(static_cast<std::size_t>(cutoff) + 1) {}

  std::size_t size() const { return g_.node_count() * width_; }
  std::size_t id(std::size_t node, std::int64_t c) const { return node * width_ + static_cast<std::size_t>(c); }
  std::size_t node(std::size_t id) const { return id / width_; }
  std::int64_t counter(std::size_t id) const { return static_cast<std::int64_t>(id % width_); }

  /// Calls f(edge index, successor id) for every enabled edge that stays within the cutoff.
  template <typename F>
  void for_each_successor(std::size_t id, F&& f) const {
    const std::size_t v = node(id);
    const std::int64_t c = counter(id);
    for (std::size_t e : g_.out[v]) {
      const auto& edge = g_.edges[e];
      if (edge.zero != (c == 0)) continue;
      const std::int64_t next = c + edge.delta;
      if (next < 0 || static_cast<std::size_t>(next) >= width_) continue;
      f(e, this->id(edge.to, next));
    }
  }

 private:
  const ProductGraph& g_;
  std::size_t width_;
};

struct BoundedSearch {
  std::vector<std::size_t> order;        // reached ids in BFS order
  std::vector<bool> reached;
  std::vector<std::size_t> parent_edge;  // product edge that discovered the id
  std::vector<std::size_t> parent;
};

inline BoundedSearch bounded_bfs(const BoundedConfigs& space) {
  BoundedSearch s;
  s.reached.assign(space.size(), false);
  s.parent.assign(space.size(), 0);
  s.parent_edge.assign(space.size(), 0);
  const std::size_t root = space.id(0, 0);
  s.reached[root] = true;
  s.order.push_back(root);
  for (std::size_t i = 0; i < s.order.size(); ++i) {
    const std::size_t id = s.order[i];
    space.for_each_successor(id, [&](std::size_t e, std::size_t next) {
      if (s.reached[next]) return;
      s.reached[next] = true;
      s.parent[next] = id;
      s.parent_edge[next] = e;
      s.order.push_back(next);
    });
  }
  return s;
}

/// Product edges from the root to `id` along the BFS tree.
inline std::vector<std::size_t> bfs_stem(const BoundedSearch& s, const BoundedConfigs& space, std::size_t id) {
  std::vector<std::size_t> edges;
  const std::size_t root = space.id(0, 0);
  for (std::size_t v = id; v != root; v = s.parent[v]) edges.push_back(s.parent_edge[v]);
  std::reverse(edges.begin(), edges.end());
  return edges;
}

/// Replays product edges from (q0, 0, 0) into a Run; `cycle_start` counts stem edges.
inline Run make_run(const BlindCounterAutomaton& a, const ProductGraph& g, const std::vector<std::size_t>& stem,
                    const std::vector<std::size_t>& cycle) {
  Run run;
  run.initial = initial_configuration(a);
  Configuration c = run.initial;
  auto push = [&](std::size_t e) {
    const auto& t = a.transitions()[g.edges[e].transition];
    c = Configuration{t.target, apply(t, c.counters)};
    run.steps.push_back({g.edges[e].transition, g.nodes[g.edges[e].to].position, c});
  };
  for (std::size_t e : stem) push(e);
  run.cycle_start = run.steps.size();
  for (std::size_t e : cycle) push(e);
  return run;
}

/// Accepting cycle inside the bounded configuration graph, if any: the first accepting edge
/// whose endpoints share a strongly connected component, taking sources by counter value and
/// then in BFS order.
inline std::optional<AcceptanceVerdict> bounded_phase(const BlindCounterAutomaton& a, const ProductGraph& g,
                                                      const BoundedConfigs& space, const BoundedSearch& s) {
  const auto comp = strongly_connected_components(space.size(), [&](std::size_t id, std::vector<std::size_t>& out) {
    if (!s.reached[id]) return;
    space.for_each_successor(id, [&](std::size_t, std::size_t next) { out.push_back(next); });
  });

  std::vector<std::size_t> sources = s.order;
  std::stable_sort(sources.begin(), sources.end(),
                   [&](std::size_t x, std::size_t y) { return space.counter(x) < space.counter(y); });
  for (std::size_t id : sources) {
    std::optional<std::pair<std::size_t, std::size_t>> hit;
    space.for_each_successor(id, [&](std::size_t e, std::size_t next) {
      if (!hit && g.edges[e].accepting && comp[next] == comp[id]) hit.emplace(e, next);
    });
    if (!hit) continue;

    // Close the cycle with a BFS from the edge's target back to `id` inside the component.
    std::map<std::size_t, std::pair<std::size_t, std::size_t>> prev;  // id -> (parent id, edge)
    std::queue<std::size_t> q;
    q.push(hit->second);
    prev[hit->second] = {hit->second, 0};
    while (!q.empty() && !prev.contains(id)) {
      const std::size_t v = q.front();
      q.pop();
      space.for_each_successor(v, [&](std::size_t e, std::size_t next) {
        if (comp[next] != comp[id] || prev.contains(next)) return;
        prev[next] = {v, e};
        q.push(next);
      });
    }
    std::vector<std::size_t> back;
    for (std::size_t v = id; v != hit->second; v = prev[v].first) back.push_back(prev[v].second);
    std::reverse(back.begin(), back.end());
    std::vector<std::size_t> cycle{hit->first};
    cycle.insert(cycle.end(), back.begin(), back.end());

    AcceptanceVerdict verdict;
    verdict.accepted = true;
    verdict.requirement = cycle_requirement(g, cycle);
    bool meets_zero = space.counter(id) == 0;
    std::int64_t c = space.counter(id);
    for (std::size_t e : cycle) {
      c += g.edges[e].delta;
      meets_zero = meets_zero || c == 0;
    }
    verdict.kind = meets_zero ? 'Z' : 'P';
    verdict.witness = make_run(a, g, bfs_stem(s, space, id), cycle);
    return verdict;
  }
  return std::nullopt;
}

/// Longest-path Bellman-Ford over the positive edges inside `members`. Returns a positive-effect
/// cycle (as edge list) when one exists.
inline std::optional<std::vector<std::size_t>> positive_cycle(const ProductGraph& g, const std::vector<std::size_t>& members,
                                                              const std::vector<bool>& in) {
  std::map<std::size_t, std::int64_t> dist;
  std::map<std::size_t, std::size_t> pred;
  for (std::size_t v : members) dist[v] = 0;
  std::optional<std::size_t> relaxed;
  for (std::size_t round = 0; round <= members.size(); ++round) {
    relaxed.reset();
    for (std::size_t v : members)
      for (std::size_t e : g.out[v]) {
        const auto& edge = g.edges[e];
        if (edge.zero || !in[edge.to]) continue;
        if (dist[v] + edge.delta > dist[edge.to]) {
          dist[edge.to] = dist[v] + edge.delta;
          pred[edge.to] = e;
          relaxed = edge.to;
        }
      }
    if (!relaxed) return std::nullopt;
  }
  std::size_t v = *relaxed;
  for (std::size_t i = 0; i < members.size(); ++i) v = g.edges[pred.at(v)].from;
  std::vector<std::size_t> cycle;
  std::size_t x = v;
  do {
    cycle.push_back(pred.at(x));
    x = g.edges[pred.at(x)].from;
  } while (x != v);
  std::reverse(cycle.begin(), cycle.end());
  return cycle;
}

/// Longest path (edge list) from `from` to `to` over positive edges inside `in`, assuming the
/// region has no positive cycle.
inline std::optional<std::pair<std::int64_t, std::vector<std::size_t>>> longest_path(
    const ProductGraph& g, const std::vector<std::size_t>& members, const std::vector<bool>& in, std::size_t from,
    std::size_t to) {
  constexpr std::int64_t minus_inf = std::numeric_limits<std::int64_t>::min();
  std::map<std::size_t, std::int64_t> dist;
  std::map<std::size_t, std::size_t> pred;
  for (std::size_t v : members) dist[v] = minus_inf;
  dist[from] = 0;
  for (std::size_t round = 0; round + 1 < members.size(); ++round) {
    bool changed = false;
    for (std::size_t v : members) {
      if (dist[v] == minus_inf) continue;
      for (std::size_t e : g.out[v]) {
        const auto& edge = g.edges[e];
        if (edge.zero || !in[edge.to] || edge.to == from) continue;
        if (dist[v] + edge.delta > dist[edge.to]) {
          dist[edge.to] = dist[v] + edge.delta;
          pred[edge.to] = e;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  if (dist[to] == minus_inf) return std::nullopt;
  std::vector<std::size_t> path;
  for (std::size_t v = to; v != from; v = g.edges[pred[v]].from) path.push_back(pred[v]);
  std::reverse(path.begin(), path.end());
  return std::make_pair(dist[to], path);
}

inline std::vector<std::size_t> shortest_path(const ProductGraph& g, const std::vector<bool>& in, std::size_t from,
                                              std::size_t to) {
  std::map<std::size_t, std::size_t> pred;
  std::queue<std::size_t> q;
  q.push(from);
  std::vector<bool> seen(g.node_count(), false);
  seen[from] = true;
  while (!q.empty() && !seen[to]) {
    const std::size_t v = q.front();
    q.pop();
    for (std::size_t e : g.out[v]) {
      const auto& edge = g.edges[e];
      if (edge.zero || !in[edge.to] || seen[edge.to]) continue;
      seen[edge.to] = true;
      pred[edge.to] = e;
      q.push(edge.to);
    }
  }
  std::vector<std::size_t> path;
  for (std::size_t v = to; v != from; v = g.edges[pred[v]].from) path.push_back(pred[v]);
  std::reverse(path.begin(), path.end());
  return path;
}

inline std::int64_t effect(const ProductGraph& g, const std::vector<std::size_t>& edges) {
  std::int64_t sum = 0;
  for (std::size_t e : edges) sum += g.edges[e].delta;
  return sum;
}

/// Accepting closed walk with non-negative effect inside the region of nodes whose counter is
/// unbounded. The stem pumps until the walk's requirement is met.
inline std::optional<AcceptanceVerdict> pumping_phase(const BlindCounterAutomaton& a, const ProductGraph& g,
                                                      const BoundedConfigs& space, const BoundedSearch& s,
                                                      std::int64_t cutoff) {
  const std::size_t n = g.node_count();
  // A node reached with counter > n lies downstream of a pumpable cycle, and so does every node
  // reachable from it through positive edges.
  std::vector<bool> unbounded(n, false);
  std::vector<std::size_t> work;
  for (std::size_t id : s.order)
    if (space.counter(id) > static_cast<std::int64_t>(n) && !unbounded[space.node(id)]) {
      unbounded[space.node(id)] = true;
      work.push_back(space.node(id));
    }
  while (!work.empty()) {
    const std::size_t v = work.back();
    work.pop_back();
    for (std::size_t e : g.out[v]) {
      const auto& edge = g.edges[e];
      if (!edge.zero && !unbounded[edge.to]) unbounded[edge.to] = true, work.push_back(edge.to);
    }
  }

  const auto comp = strongly_connected_components(n, [&](std::size_t v, std::vector<std::size_t>& out) {
    if (!unbounded[v]) return;
    for (std::size_t e : g.out[v])
      if (!g.edges[e].zero && unbounded[g.edges[e].to]) out.push_back(g.edges[e].to);
  });
  std::map<std::size_t, std::vector<std::size_t>> members;  // component -> nodes in BFS order
  for (std::size_t v = 0; v < n; ++v)
    if (unbounded[v]) members[comp[v]].push_back(v);

  std::vector<std::pair<std::size_t, std::size_t>> order;  // (first node, component)
  for (auto& [c, vs] : members) order.emplace_back(vs.front(), c);
  std::sort(order.begin(), order.end());

  for (auto [first, c] : order) {
    const auto& vs = members[c];
    std::vector<bool> in(n, false);
    for (std::size_t v : vs) in[v] = true;

    std::vector<std::size_t> candidates;
    for (std::size_t v : vs)
      for (std::size_t e : g.out[v])
        if (!g.edges[e].zero && g.edges[e].accepting && in[g.edges[e].to]) candidates.push_back(e);
    if (candidates.empty()) continue;

    std::optional<std::vector<std::size_t>> walk;
    if (auto pump = positive_cycle(g, vs, in)) {
      const std::size_t e = candidates.front();
      const std::size_t hub = g.edges[pump->front()].from;
      auto to_hub = shortest_path(g, in, g.edges[e].to, hub);
      auto from_hub = shortest_path(g, in, hub, g.edges[e].from);
      std::vector<std::size_t> base{e};
      base.insert(base.end(), to_hub.begin(), to_hub.end());
      const std::int64_t deficit = -(effect(g, base) + effect(g, from_hub));
      const std::int64_t gain = effect(g, *pump);
      const std::int64_t repeats = deficit > 0 ? (deficit + gain - 1) / gain : 0;
      walk = base;
      for (std::int64_t r = 0; r < repeats; ++r) walk->insert(walk->end(), pump->begin(), pump->end());
      walk->insert(walk->end(), from_hub.begin(), from_hub.end());
    } else {
      for (std::size_t e : candidates) {
        auto back = longest_path(g, vs, in, g.edges[e].to, g.edges[e].from);
        if (g.edges[e].to == g.edges[e].from) back = std::make_pair(std::int64_t{0}, std::vector<std::size_t>{});
        if (!back || back->first + g.edges[e].delta < 0) continue;
        walk = std::vector<std::size_t>{e};
        walk->insert(walk->end(), back->second.begin(), back->second.end());
        break;
      }
    }
    if (!walk) continue;

    const std::int64_t need = cycle_requirement(g, *walk);
    const std::size_t anchor = g.edges[walk->front()].from;
    // Reaching (anchor, c >= need) never requires counters above need + 2n + 1.
    const std::int64_t cap = std::max<std::int64_t>(cutoff, need + 2 * static_cast<std::int64_t>(n) + 2);
    const BoundedConfigs wide(g, cap);
    const auto search = bounded_bfs(wide);
    std::optional<std::size_t> target;
    for (std::size_t id : search.order)
      if (wide.node(id) == anchor && wide.counter(id) >= need) {
        target = id;
        break;
      }
    if (!target) throw std::logic_error("pumpable region unreachable with the expected counter");

    AcceptanceVerdict verdict;
    verdict.accepted = true;
    verdict.kind = 'P';
    verdict.requirement = need;
    verdict.pumped = true;
    verdict.witness = make_run(a, g, bfs_stem(search, wide, *target), *walk);
    return verdict;
  }
  return std::nullopt;
}

}  // namespace detail

/// The default bounded-phase cutoff, nodeCount^2 + 1.
inline std::int64_t default_cutoff(std::size_t node_count) {
  return static_cast<std::int64_t>(node_count * node_count + 1);
}

/// Decides whether the one-counter epsilon-free automaton `a` accepts `w`.
///
/// Bounded phase: search configurations with counter <= cutoff for an accepting cycle. Pumping
/// phase: nodes reached with counter above nodeCount sit below a positive cycle, so any counter
/// is available there; look for an accepting closed walk of non-negative effect over positive
/// edges in that region. Cutoffs below 2 * nodeCount + 1 are raised to it; from that value on
/// both phases are exact.
inline AcceptanceVerdict decide_accept(const BlindCounterAutomaton& a, const LassoWord& w,
                                       std::optional<std::int64_t> cutoff = std::nullopt) {
  const ProductGraph g = build_product(a, w);
  const std::size_t n = g.node_count();
  std::int64_t k = cutoff.value_or(default_cutoff(n));
  if (k < 0) throw Error("cutoff must be non-negative");
  k = std::max<std::int64_t>(k, 2 * static_cast<std::int64_t>(n) + 1);

  const detail::BoundedConfigs space(g, k);
  const auto search = detail::bounded_bfs(space);
  std::optional<AcceptanceVerdict> verdict = detail::bounded_phase(a, g, space, search);
  if (!verdict) verdict = detail::pumping_phase(a, g, space, search, k);
  if (!verdict) verdict = AcceptanceVerdict{};
  verdict->cutoff = k;
  verdict->node_count = n;
  return *verdict;
}

}  // namespace bca

#endif  // BCA_LASSO_DECISION_HPP
