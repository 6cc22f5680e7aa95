#ifndef BCA_AUTOMATON_IO_HPP
#define BCA_AUTOMATON_IO_HPP

#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bca/automaton.hpp"
#include "bca/words.hpp"

namespace bca {

// Automaton files are UTF-8 text, one record per line, `#` starts a comment:
//
//   states: I Ia Wa           header lines, each at most once
//   alphabet: a b
//   counters: 1
//   initial: I
//   accepting: F              (optional, may list no state)
//   I a 0 Ia 1                transition: src letter guards target deltas [accepting]
//   Ia eps 0,1 Wa 0,0         guards/deltas are comma-separated, one entry per counter
//
// `eps` is the empty letter. Any other `name:` header is rejected.

namespace detail {

inline std::vector<std::string> tokens(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

inline std::vector<std::int8_t> parse_small_vector(std::string_view text, std::size_t line) {
  std::vector<std::int8_t> out;
  for (auto part : split(text, ',')) {
    part = trim(part);
    int value = 0;
    try {
      std::size_t used = 0;
      value = std::stoi(std::string(part), &used);
      if (used != part.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error("line " + std::to_string(line) + ": invalid integer '" + std::string(part) + "'");
    }
    if (value < -128 || value > 127) throw Error("line " + std::to_string(line) + ": value out of range");
    out.push_back(static_cast<std::int8_t>(value));
  }
  return out;
}

}  // namespace detail

inline BlindCounterAutomaton parse_automaton(std::string_view text) {
  std::map<std::string, std::pair<std::size_t, std::vector<std::string>>> headers;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  std::size_t number = 0;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto toks = detail::tokens(line);
    if (toks.empty()) continue;
    if (toks.front().back() == ':') {
      std::string key = toks.front().substr(0, toks.front().size() - 1);
      static const std::vector<std::string> known{"states", "alphabet", "counters", "initial", "accepting"};
      if (std::find(known.begin(), known.end(), key) == known.end())
        throw Error("line " + std::to_string(number) + ": unknown field '" + key + "'");
      if (headers.contains(key)) throw Error("line " + std::to_string(number) + ": duplicate field '" + key + "'");
      headers[key] = {number, std::vector<std::string>(toks.begin() + 1, toks.end())};
      continue;
    }
    if (toks.size() != 5 && !(toks.size() == 6 && toks[5] == "accepting"))
      throw Error("line " + std::to_string(number) + ": expected 'src letter guards target deltas [accepting]'");
    rows.emplace_back(number, std::move(toks));
  }

  for (const char* key : {"states", "alphabet", "counters", "initial"})
    if (!headers.contains(key)) throw Error(std::string("missing field '") + key + "'");
  const auto& counters = headers["counters"];
  if (counters.second.size() != 1) throw Error("line " + std::to_string(counters.first) + ": counters takes one value");
  const auto k = detail::parse_uint(counters.second.front(), "counter count");
  if (k == 0 || k > 64) throw Error("line " + std::to_string(counters.first) + ": counter count must be in 1..64");

  BlindCounterAutomaton a(k);
  for (const auto& s : headers["states"].second) a.add_state(s);
  for (const auto& l : headers["alphabet"].second) a.add_letter(l);
  const auto& initial = headers["initial"];
  if (initial.second.size() != 1) throw Error("line " + std::to_string(initial.first) + ": initial takes one state");
  auto resolve = [&](const std::string& name, std::size_t line) {
    if (auto id = a.state_id(name)) return *id;
    throw Error("line " + std::to_string(line) + ": unknown state '" + name + "'");
  };
  a.set_initial(resolve(initial.second.front(), initial.first));
  if (headers.contains("accepting"))
    for (const auto& s : headers["accepting"].second) a.set_accepting(resolve(s, headers["accepting"].first));

  for (const auto& [line, toks] : rows) {
    Transition t;
    t.source = resolve(toks[0], line);
    if (toks[1] == kEpsilonName) {
      t.letter = kEpsilon;
    } else if (auto l = a.letter_id(toks[1])) {
      t.letter = *l;
    } else {
      throw Error("line " + std::to_string(line) + ": unknown letter '" + toks[1] + "'");
    }
    t.guards = detail::parse_small_vector(toks[2], line);
    t.target = resolve(toks[3], line);
    t.deltas = detail::parse_small_vector(toks[4], line);
    t.accepting = toks.size() == 6;
    if (t.guards.size() != k || t.deltas.size() != k)
      throw Error("line " + std::to_string(line) + ": expected " + std::to_string(k) + " guard and delta entries");
    a.add_transition(std::move(t));
  }
  return a;
}

inline std::string format_automaton(const BlindCounterAutomaton& a) {
  std::string out = "states:";
  for (const auto& s : a.states()) out += ' ' + s;
  out += "\nalphabet:";
  for (const auto& l : a.alphabet()) out += ' ' + l;
  out += "\ncounters: " + std::to_string(a.counter_count());
  out += "\ninitial: " + a.state_name(a.initial());
  out += "\naccepting:";
  for (StateId s : a.accepting_states()) out += ' ' + a.state_name(s);
  out += '\n';
  for (const auto& t : a.transitions()) out += describe(a, t) + '\n';
  return out;
}

}  // namespace bca

#endif  // BCA_AUTOMATON_IO_HPP
