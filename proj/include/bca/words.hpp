#ifndef BCA_WORDS_HPP
#define BCA_WORDS_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "bca/automaton.hpp"

namespace bca {

namespace detail {

/// Rewrites an ultimately periodic sequence `prefix . period^omega` into its canonical
/// presentation: primitive period, and the prefix shortened as far as the period allows.
template <typename Seq>
void canonicalize_lasso(Seq& prefix, Seq& period) {
  const std::size_t p = period.size();
  for (std::size_t d = 1; d <= p; ++d) {
    if (p % d) continue;
    bool ok = true;
    for (std::size_t i = d; i < p && ok; ++i) ok = period[i] == period[i - d];
    if (ok) {
      period.resize(d);
      break;
    }
  }
  while (!prefix.empty() && prefix.back() == period.back()) {
    prefix.pop_back();
    std::rotate(period.begin(), period.end() - 1, period.end());
  }
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::uint64_t parse_uint(std::string_view s, std::string_view what) {
  s = trim(s);
  if (s.empty() || s.size() > 18 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw Error("invalid " + std::string(what) + " '" + std::string(s) + "'");
  return std::stoull(std::string(s));
}

inline std::vector<std::uint64_t> parse_uint_list(std::string_view s, std::string_view what) {
  std::vector<std::uint64_t> out;
  if (trim(s).empty()) return out;
  for (auto part : split(s, ',')) out.push_back(parse_uint(part, what));
  return out;
}

template <typename T>
std::string join(const std::vector<T>& v, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Letter lassos

/// The ultimately periodic word prefix . period^omega; every character is one letter.
struct LassoWord {
  std::string prefix;
  std::string period;

  LassoWord() : period("a") {}
  LassoWord(std::string u, std::string v) : prefix(std::move(u)), period(std::move(v)) {
    if (period.empty()) throw Error("lasso period must be non-empty");
  }

  std::size_t length() const { return prefix.size() + period.size(); }

  /// Letter at 0-based position i of the infinite word.
  char at(std::size_t i) const {
    return i < prefix.size() ? prefix[i] : period[(i - prefix.size()) % period.size()];
  }

  /// Successor of a position in the lasso graph [0, |u|+|v|): advance through u, cycle through v.
  std::size_t next_position(std::size_t pos) const { return pos + 1 < length() ? pos + 1 : prefix.size(); }

  std::string expand(std::size_t letters) const {
    std::string out;
    out.reserve(letters);
    for (std::size_t i = 0; i < letters; ++i) out.push_back(at(i));
    return out;
  }

  LassoWord canonical() const {
    LassoWord out = *this;
    detail::canonicalize_lasso(out.prefix, out.period);
    return out;
  }

  friend bool operator==(const LassoWord&, const LassoWord&) = default;
  friend auto operator<=>(const LassoWord&, const LassoWord&) = default;
};

/// Parses the `u|v` literal; v must be non-empty.
inline LassoWord parse_lasso(std::string_view text) {
  auto bar = text.find('|');
  if (bar == std::string_view::npos || text.find('|', bar + 1) != std::string_view::npos)
    throw Error("lasso literal must have the form u|v, got '" + std::string(text) + "'");
  auto u = text.substr(0, bar);
  auto v = text.substr(bar + 1);
  if (v.empty()) throw Error("lasso period must be non-empty in '" + std::string(text) + "'");
  for (char c : text)
    if (c == ' ' || c == '\t' || c == ',') throw Error("lasso letters must be single non-blank characters");
  return LassoWord(std::string(u), std::string(v));
}

inline std::string to_string(const LassoWord& w) { return w.prefix + '|' + w.period; }

// ---------------------------------------------------------------------------
// Integer lassos (finitely presented points of the Baire space)

struct IntegerLasso {
  std::vector<std::uint64_t> prefix;
  std::vector<std::uint64_t> period{0};

  IntegerLasso() = default;
  IntegerLasso(std::vector<std::uint64_t> m, std::vector<std::uint64_t> p) : prefix(std::move(m)), period(std::move(p)) {
    if (period.empty()) throw Error("integer lasso period must be non-empty");
  }

  std::uint64_t at(std::size_t i) const {
    return i < prefix.size() ? prefix[i] : period[(i - prefix.size()) % period.size()];
  }

  IntegerLasso canonical() const {
    IntegerLasso out = *this;
    detail::canonicalize_lasso(out.prefix, out.period);
    return out;
  }

  friend bool operator==(const IntegerLasso&, const IntegerLasso&) = default;
  friend auto operator<=>(const IntegerLasso&, const IntegerLasso&) = default;
};

/// Parses `m0,m1|p0,p1`.
inline IntegerLasso parse_integer_lasso(std::string_view text) {
  auto parts = detail::split(text, '|');
  if (parts.size() != 2) throw Error("integer lasso must have the form m0,m1|p0,p1, got '" + std::string(text) + "'");
  auto period = detail::parse_uint_list(parts[1], "integer");
  if (period.empty()) throw Error("integer lasso period must be non-empty");
  return IntegerLasso(detail::parse_uint_list(parts[0], "integer"), std::move(period));
}

inline std::string to_string(const IntegerLasso& x) {
  return detail::join(x.prefix, ",") + '|' + detail::join(x.period, ",");
}

// ---------------------------------------------------------------------------
// Blocks

/// A maximal segment a^n b^k of a word that starts with a and has infinitely many of both letters.
struct Block {
  std::uint64_t n = 1;
  std::uint64_t k = 1;

  bool positive() const { return k >= n; }
  std::uint64_t length() const { return n + k; }

  friend bool operator==(const Block&, const Block&) = default;
  friend auto operator<=>(const Block&, const Block&) = default;
};

struct BlockLasso {
  std::vector<Block> prefix;
  std::vector<Block> period{Block{}};

  BlockLasso() = default;
  BlockLasso(std::vector<Block> pre, std::vector<Block> per) : prefix(std::move(pre)), period(std::move(per)) {
    if (period.empty()) throw Error("block lasso period must be non-empty");
    for (const auto& b : prefix)
      if (b.n == 0 || b.k == 0) throw Error("block exponents must be positive");
    for (const auto& b : period)
      if (b.n == 0 || b.k == 0) throw Error("block exponents must be positive");
  }

  const Block& at(std::size_t i) const {
    return i < prefix.size() ? prefix[i] : period[(i - prefix.size()) % period.size()];
  }

  bool is_period_boundary(std::size_t i) const {
    return i >= prefix.size() && (i - prefix.size()) % period.size() == 0;
  }

  BlockLasso canonical() const {
    BlockLasso out = *this;
    detail::canonicalize_lasso(out.prefix, out.period);
    return out;
  }

  LassoWord to_word() const {
    auto spell = [](const std::vector<Block>& bs) {
      std::string s;
      for (const auto& b : bs) s += std::string(b.n, 'a') + std::string(b.k, 'b');
      return s;
    };
    return LassoWord(spell(prefix), spell(period));
  }

  friend bool operator==(const BlockLasso&, const BlockLasso&) = default;
};

/// Parses `n:k,n:k|n:k,...` (the part before `|` may be empty).
inline BlockLasso parse_blocks(std::string_view text) {
  auto parse_list = [](std::string_view s) {
    std::vector<Block> out;
    if (detail::trim(s).empty()) return out;
    for (auto item : detail::split(s, ',')) {
      auto nk = detail::split(item, ':');
      if (nk.size() != 2) throw Error("block must have the form n:k, got '" + std::string(item) + "'");
      out.push_back({detail::parse_uint(nk[0], "block exponent"), detail::parse_uint(nk[1], "block exponent")});
    }
    return out;
  };
  auto parts = detail::split(text, '|');
  if (parts.size() != 2) throw Error("block lasso must have the form n:k,...|n:k,..., got '" + std::string(text) + "'");
  auto period = parse_list(parts[1]);
  if (period.empty()) throw Error("block lasso period must be non-empty");
  return BlockLasso(parse_list(parts[0]), std::move(period));
}

inline std::string to_string(const BlockLasso& b) {
  auto list = [](const std::vector<Block>& bs) {
    std::string s;
    for (std::size_t i = 0; i < bs.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(bs[i].n) + ':' + std::to_string(bs[i].k);
    }
    return s;
  };
  return list(b.prefix) + '|' + list(b.period);
}

// ---------------------------------------------------------------------------
// The set Z and the block decomposition

/// u.v^omega starts with a and has infinitely many a's and b's (only letters a, b allowed).
inline bool in_z(const LassoWord& w) {
  auto binary = [](const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c == 'a' || c == 'b'; });
  };
  if (!binary(w.prefix) || !binary(w.period)) throw Error("word is not over the alphabet {a,b}");
  return w.at(0) == 'a' && w.period.find('a') != std::string::npos &&
         w.period.find('b') != std::string::npos;
}

/// The unique block sequence of a word in Z, in canonical lasso form.
inline BlockLasso decompose_blocks(const LassoWord& w) {
  if (!in_z(w)) throw Error("word " + to_string(w) + " is not in Z");
  auto starts_block = [&](std::size_t p) { return w.at(p) == 'a' && (p == 0 || w.at(p - 1) == 'b'); };

  // From |u|+1 on, whether a block starts at p depends only on (p - |u|) mod |v|.
  std::size_t origin = w.prefix.size() + 1;
  while (!starts_block(origin)) ++origin;

  auto read_blocks = [&](std::size_t from, std::size_t to) {
    std::vector<Block> out;
    std::size_t p = from;
    while (p < to) {
      Block b{0, 0};
      while (w.at(p) == 'a') ++b.n, ++p;
      while (w.at(p) == 'b') ++b.k, ++p;
      out.push_back(b);
    }
    return out;
  };
  BlockLasso out(read_blocks(0, origin), read_blocks(origin, origin + w.period.size()));
  return out.canonical();
}

// ---------------------------------------------------------------------------
// The encoding of integer sequences as words: m -> a^(m+1) b^(m+1)

inline LassoWord phi_encode(const IntegerLasso& x) {
  auto spell = [](const std::vector<std::uint64_t>& ms) {
    std::string s;
    for (auto m : ms) s += std::string(m + 1, 'a') + std::string(m + 1, 'b');
    return s;
  };
  return LassoWord(spell(x.prefix), spell(x.period));
}

/// The finite word a^(n0) b^(n0) ... a^(n_{count-1}) b^(n_{count-1}) with n_i = gen(i) + 1.
inline std::string phi_encode_prefix(const std::function<std::uint64_t(std::size_t)>& gen, std::size_t count) {
  std::string out;
  for (std::size_t i = 0; i < count; ++i) {
    const auto n = gen(i) + 1;
    out.append(n, 'a');
    out.append(n, 'b');
  }
  return out;
}

inline BlockLasso phi_blocks(const IntegerLasso& x) {
  auto blocks = [](const std::vector<std::uint64_t>& ms) {
    std::vector<Block> out;
    for (auto m : ms) out.push_back({m + 1, m + 1});
    return out;
  };
  return BlockLasso(blocks(x.prefix), blocks(x.period));
}

// ---------------------------------------------------------------------------
// liminf / lim classifiers, exact on ultimately periodic points

inline std::uint64_t liminf_value(const IntegerLasso& x) {
  return *std::min_element(x.period.begin(), x.period.end());
}

/// liminf x(n) < infinity. Always true for an ultimately periodic point.
inline bool in_d3(const IntegerLasso& x) {
  (void)liminf_value(x);
  return true;
}

/// lim x(n) = infinity. Never true for an ultimately periodic point: the period recurs.
inline bool in_c3(const IntegerLasso&) { return false; }

}  // namespace bca

#endif  // BCA_WORDS_HPP
