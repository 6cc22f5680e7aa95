#ifndef BCA_TOOLS_CLI_HPP
#define BCA_TOOLS_CLI_HPP

// Command dispatcher behind the `bca` binary. Machine-readable key=value lines go to `out`,
// human-readable notes and timing to `err`.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bca/automaton.hpp"
#include "bca/automaton_io.hpp"
#include "bca/canonical_run.hpp"
#include "bca/epsilon.hpp"
#include "bca/lasso_decision.hpp"
#include "bca/liminf_automaton.hpp"
#include "bca/petri_net.hpp"
#include "bca/reduction.hpp"
#include "bca/semantics.hpp"
#include "bca/words.hpp"

namespace bca::cli {

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error("cannot write " + path);
}

inline const char* flag(bool b) { return b ? "true" : "false"; }

inline std::vector<std::string> automaton_lines(const BlindCounterAutomaton& a) {
  std::vector<std::string> lines;
  lines.push_back("states=" + std::to_string(a.states().size()));
  lines.push_back("counters=" + std::to_string(a.counter_count()));
  lines.push_back("transitions=" + std::to_string(a.transitions().size()));
  std::istringstream text(format_automaton(a));
  for (std::string line; std::getline(text, line);) lines.push_back("automaton=" + line);
  return lines;
}

}  // namespace detail

/// Runs one command; `args` excludes the program name. Returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Blind one-counter Büchi automata on lasso words", "bca"};
  app.require_subcommand(1);

  std::string file, lasso, intlasso, blocks_spec, out_file;
  std::optional<std::int64_t> cutoff;
  std::int64_t counter_cap = 0;
  std::size_t depth = 0;
  std::uint64_t initial = 0;
  std::size_t horizon = 0;

  auto* validate_cmd = app.add_subcommand("validate", "check the well-formedness rules");
  validate_cmd->add_option("FILE", file, "automaton file")->required();
  auto* eliminate_cmd = app.add_subcommand("eliminate", "remove epsilon transitions");
  eliminate_cmd->add_option("FILE", file, "automaton file")->required();
  eliminate_cmd->add_option("--out", out_file, "write the result as an automaton file");
  auto* accept_cmd = app.add_subcommand("accept", "decide acceptance of a lasso word");
  accept_cmd->add_option("FILE", file, "automaton file")->required();
  accept_cmd->add_option("--lasso", lasso, "lasso u|v")->required();
  accept_cmd->add_option("--cutoff", cutoff, "bounded-phase counter bound");
  auto* oracle_cmd = app.add_subcommand("oracle", "bounded brute-force acceptance search");
  oracle_cmd->add_option("FILE", file, "automaton file")->required();
  oracle_cmd->add_option("--lasso", lasso, "lasso u|v")->required();
  oracle_cmd->add_option("--counter-cap", counter_cap, "largest counter value explored")->required();
  oracle_cmd->add_option("--depth", depth, "largest BFS depth explored")->required();
  auto* encode_cmd = app.add_subcommand("encode", "encode an integer lasso as a word");
  encode_cmd->add_option("--intlasso", intlasso, "integer lasso m,..|p,..")->required();
  auto* run_cmd = app.add_subcommand("canonical-run", "simulate the greedy run");
  run_cmd->add_option("--blocks", blocks_spec, "block lasso n:k,..|n:k,..")->required();
  run_cmd->add_option("--n", initial, "initial increments")->required();
  run_cmd->add_option("--horizon", horizon, "number of blocks")->required();
  auto* characterize_cmd = app.add_subcommand("characterize", "usage certificate of a block lasso");
  characterize_cmd->add_option("--blocks", blocks_spec, "block lasso n:k,..|n:k,..")->required();
  auto* reduction_cmd = app.add_subcommand("reduction", "check the reduction on one integer lasso");
  reduction_cmd->add_option("--intlasso", intlasso, "integer lasso m,..|p,..")->required();
  auto* translate_cmd = app.add_subcommand("translate-pn", "translate a labelled Petri net");
  translate_cmd->add_option("FILE", file, "net file")->required();
  translate_cmd->add_option("--out", out_file, "write the result as an automaton file");
  auto* demo_cmd = app.add_subcommand("demo-paper", "print the liminf automaton and run the reduction battery");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    err << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return 2;
  }

  const auto started = std::chrono::steady_clock::now();
  std::vector<std::string> lines;
  std::string note;
  int code = 0;
  auto load = [&] {
    auto a = parse_automaton(detail::read_file(file));
    require_valid(a);
    return a;
  };

  try {
    if (validate_cmd->parsed()) {
      lines.push_back("command=validate");
      const auto violations = validate(parse_automaton(detail::read_file(file)));
      lines.push_back(std::string("valid=") + detail::flag(violations.empty()));
      lines.push_back("violations=" + std::to_string(violations.size()));
      for (const auto& v : violations) lines.push_back("violation=" + to_string(v));
      note = violations.empty() ? "valid" : std::to_string(violations.size()) + " violation(s)";
      code = violations.empty() ? 0 : 1;
    } else if (eliminate_cmd->parsed()) {
      lines.push_back("command=eliminate");
      const auto a = eliminate_epsilon(load());
      for (auto& l : detail::automaton_lines(a)) lines.push_back(std::move(l));
      if (!out_file.empty()) detail::write_file(out_file, format_automaton(a));
      note = std::to_string(a.transitions().size()) + " transitions after elimination";
    } else if (accept_cmd->parsed()) {
      lines.push_back("command=accept");
      const auto w = parse_lasso(lasso);
      lines.push_back("lasso=" + to_string(w));
      const auto raw = load();
      lines.push_back(std::string("eliminated=") + detail::flag(raw.has_epsilon()));
      const auto a = eliminate_epsilon(raw);
      const auto v = decide_accept(a, w, cutoff);
      for (auto& l : format_verdict(a, v)) lines.push_back(std::move(l));
      note = v.accepted ? std::string("accepted (case ") + v.kind + ")" : "rejected";
    } else if (oracle_cmd->parsed()) {
      lines.push_back("command=oracle");
      const auto w = parse_lasso(lasso);
      lines.push_back("lasso=" + to_string(w));
      const auto a = eliminate_epsilon(load());
      const auto r = oracle_accept(a, w, ExplorationCaps{counter_cap, depth});
      lines.push_back("verdict=" + to_string(r.verdict));
      lines.push_back(std::string("conclusive=") + detail::flag(r.conclusive()));
      lines.push_back(std::string("cap_touched=") + detail::flag(r.cap_touched));
      lines.push_back(std::string("frontier_hit=") + detail::flag(r.frontier_hit));
      lines.push_back("explored=" + std::to_string(r.explored));
      if (r.witness)
        for (auto& l : format_trace(a, *r.witness)) lines.push_back("trace=" + l);
      note = to_string(r.verdict);
    } else if (encode_cmd->parsed()) {
      lines.push_back("command=encode");
      const auto x = parse_integer_lasso(intlasso);
      lines.push_back("point=" + to_string(x));
      lines.push_back("word=" + to_string(phi_encode(x)));
      lines.push_back("blocks=" + to_string(phi_blocks(x)));
      note = "encoded " + to_string(x);
    } else if (run_cmd->parsed()) {
      lines.push_back("command=canonical-run");
      const auto b = parse_blocks(blocks_spec);
      lines.push_back("blocks=" + to_string(b));
      lines.push_back("n=" + std::to_string(initial));
      const auto trace = canonical_run(b, initial, horizon);
      for (const auto& s : trace)
        lines.push_back("block=" + std::to_string(s.index) + ' ' + std::to_string(s.block.n) + ':' +
                        std::to_string(s.block.k) + ' ' + to_string(s.phase) + ' ' + std::to_string(s.counter_before) +
                        ' ' + std::to_string(s.counter_after) + ' ' + (s.used ? "used" : "skipped"));
      const auto fin = final_state(trace);
      lines.push_back("counter=" + std::to_string(fin.counter));
      lines.push_back("used=" + bca::detail::join(fin.used_blocks, ","));
      note = std::to_string(fin.used_blocks.size()) + " of " + std::to_string(trace.size()) + " blocks used";
    } else if (characterize_cmd->parsed()) {
      lines.push_back("command=characterize");
      const auto b = parse_blocks(blocks_spec);
      lines.push_back("blocks=" + to_string(b));
      const auto cert = characterize(b);
      lines.push_back(std::string("accepted=") + detail::flag(cert.has_value()));
      if (cert) {
        lines.push_back("n=" + std::to_string(cert->initial_increments));
        lines.push_back("exceptional=" + bca::detail::join(cert->exceptional, ","));
        lines.push_back("period_start=" + std::to_string(cert->period_start));
        std::string pattern;
        for (bool u : cert->pattern) pattern += u ? '1' : '0';
        lines.push_back("pattern=" + pattern);
        lines.push_back(std::string("usage_inequality=") + detail::flag(check_usage_inequality(b, *cert)));
      }
      note = cert ? "accepted with N=" + std::to_string(cert->initial_increments) : "rejected";
    } else if (reduction_cmd->parsed()) {
      lines.push_back("command=reduction");
      const auto r = reduction_check(parse_integer_lasso(intlasso));
      for (auto& l : format_report(r)) lines.push_back(std::move(l));
      note = r.holds() ? "biconditional holds" : "biconditional FAILS";
      code = r.holds() ? 0 : 1;
    } else if (translate_cmd->parsed()) {
      lines.push_back("command=translate-pn");
      const auto a = translate(parse_net(detail::read_file(file)));
      for (auto& l : detail::automaton_lines(a)) lines.push_back(std::move(l));
      if (!out_file.empty()) detail::write_file(out_file, format_automaton(a));
      note = std::to_string(a.states().size()) + " control states";
    } else if (demo_cmd->parsed()) {
      lines.push_back("command=demo-paper");
      const auto a = build_liminf_automaton();
      for (auto& l : detail::automaton_lines(a)) lines.push_back(std::move(l));
      std::size_t passed = 0;
      const auto battery = demo_battery();
      for (const auto& x : battery) {
        const auto r = reduction_check(x);
        std::string row = "case=";
        for (const auto& l : format_report(r)) row += (row.size() > 5 ? " " : "") + l;
        lines.push_back(row);
        if (r.holds()) ++passed;
      }
      lines.push_back("passed=" + std::to_string(passed) + "/" + std::to_string(battery.size()));
      note = passed == battery.size() ? "battery passed" : "battery FAILED";
      code = passed == battery.size() ? 0 : 1;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  for (const auto& l : lines) out << l << '\n';
  const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  err << app.get_subcommands().front()->get_name() << ": " << note << " (" << std::fixed << std::setprecision(2) << ms
      << " ms)\n";
  return code;
}

}  // namespace bca::cli

#endif  // BCA_TOOLS_CLI_HPP
