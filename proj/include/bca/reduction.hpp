#ifndef BCA_REDUCTION_HPP
#define BCA_REDUCTION_HPP

#include <optional>
#include <string>
#include <vector>

#include "bca/canonical_run.hpp"
#include "bca/epsilon.hpp"
#include "bca/lasso_decision.hpp"
#include "bca/liminf_automaton.hpp"
#include "bca/words.hpp"

namespace bca {

/// The liminf automaton after epsilon elimination, built once.
inline const BlindCounterAutomaton& liminf_automaton_epsilon_free() {
  static const BlindCounterAutomaton a = eliminate_epsilon(build_liminf_automaton());
  return a;
}

/// Evaluates "liminf x < infinity  <=>  encode(x) accepted" on one integer lasso, through the
/// lasso decision procedure and independently through the greedy-run characterization.
struct ReductionReport {
  IntegerLasso point;
  bool in_d3 = false;
  LassoWord word;
  bool decided = false;
  std::optional<UsageCertificate> certificate;

  bool characterized() const { return certificate.has_value(); }
  bool holds() const { return in_d3 == decided && decided == characterized(); }
};

inline ReductionReport reduction_check(const IntegerLasso& x, std::optional<std::int64_t> cutoff = std::nullopt) {
  ReductionReport r;
  r.point = x;
  r.in_d3 = in_d3(x);
  r.word = phi_encode(x);
  r.decided = decide_accept(liminf_automaton_epsilon_free(), r.word, cutoff).accepted;
  r.certificate = characterize(decompose_blocks(r.word));
  return r;
}

inline std::vector<std::string> format_report(const ReductionReport& r) {
  auto flag = [](bool b) { return b ? std::string("true") : std::string("false"); };
  std::vector<std::string> lines{
      "point=" + to_string(r.point),
      "in_d3=" + flag(r.in_d3),
      "liminf=" + std::to_string(liminf_value(r.point)),
      "word=" + to_string(r.word),
      "decide=" + flag(r.decided),
      "characterize=" + flag(r.characterized()),
  };
  if (r.certificate) lines.push_back("n=" + std::to_string(r.certificate->initial_increments));
  lines.push_back("biconditional=" + flag(r.holds()));
  return lines;
}

/// Integer lassos exercised by `demo-paper`.
inline std::vector<IntegerLasso> demo_battery() {
  std::vector<IntegerLasso> out;
  for (const char* text : {"|0", "|3", "9,9|1", "|0,1", "2|0", "5,5|7", "|1,2,3", "0,4|2,6", "|6,0,6", "3,2,1|4"})
    out.push_back(parse_integer_lasso(text));
  return out;
}

}  // namespace bca

#endif  // BCA_REDUCTION_HPP
