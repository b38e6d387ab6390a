#include "zmest/parse.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

namespace zmest {

const char* to_string(ParseVariant v) {
  switch (v) {
    case ParseVariant::mZM: return "mZM";
    case ParseVariant::ZM: return "ZM";
    case ParseVariant::LZ78: return "LZ78";
  }
  return "?";
}

std::size_t ParseResult::max_word_length() const {
  std::size_t best = 0;
  for (std::size_t k = 0; k < boundaries.size(); ++k)
    best = std::max(best, word_length(k));
  return best;
}

std::string ParseResult::to_json() const {
  nlohmann::json j;
  j["variant"] = to_string(variant);
  j["c"] = word_count;
  j["boundaries"] = boundaries;
  return j.dump();
}

ParseCounters& parse_counters() {
  static ParseCounters counters;
  return counters;
}

namespace {

// Shared loop for the two ZM-type parses. `shortest_not_found` selects the
// modified rule (advance past the failed symbol unconditionally); the
// original rule advances only when the failed query is a single symbol.
ParseResult zm_family_parse(const SymbolSequence& y, const SubstringIndex& x_index,
                            bool shortest_not_found, ParseVariant tag) {
  require_same_alphabet(*y.alphabet, *x_index.alphabet(), "parse");
  if (y.empty()) throw std::invalid_argument("parse: empty sequence");

  const std::size_t n = y.size();
  ParseResult res;
  res.variant = tag;
  res.source_length = n;
  res.word_count = 1;
  res.boundaries.push_back(1);

  auto state = x_index.root_state();
  std::size_t j = 0;  // 0-based position of the symbol being queried
  while (j + 1 < n) {
    const auto ext = x_index.extend(state, y[j]);
    if (ext.found) {
      state = ext.state;
      ++j;
      continue;
    }
    ++res.word_count;
    if (shortest_not_found || state.matched == 0) {
      // Failed word ends at j; the next word starts at j+1.
      ++j;
      res.boundaries.push_back(static_cast<std::uint64_t>(j) + 1);
    } else {
      // Longest found word ends at j-1; re-examine position j.
      res.boundaries.push_back(static_cast<std::uint64_t>(j) + 1);
    }
    state = x_index.root_state();
  }
  return res;
}

void require_equal_lengths(const SymbolSequence& y, std::size_t x_len) {
  if (y.size() != x_len)
    throw std::invalid_argument("parse: sequences must have equal length (use the "
                                "unchecked variant to parse against a longer text)");
}

}  // namespace

ParseResult mzm_parse_unchecked(const SymbolSequence& y, const SubstringIndex& x_index) {
  parse_counters().mzm.fetch_add(1, std::memory_order_relaxed);
  return zm_family_parse(y, x_index, true, ParseVariant::mZM);
}

ParseResult mzm_parse(const SymbolSequence& y, const SubstringIndex& x_index) {
  require_equal_lengths(y, x_index.source_length());
  return mzm_parse_unchecked(y, x_index);
}

ParseResult mzm_parse(const SymbolSequence& y, const SymbolSequence& x) {
  require_equal_lengths(y, x.size());
  return mzm_parse_unchecked(y, SubstringIndex::build(x));
}

ParseResult zm_parse_unchecked(const SymbolSequence& y, const SubstringIndex& x_index) {
  parse_counters().zm.fetch_add(1, std::memory_order_relaxed);
  return zm_family_parse(y, x_index, false, ParseVariant::ZM);
}

ParseResult zm_parse(const SymbolSequence& y, const SubstringIndex& x_index) {
  require_equal_lengths(y, x_index.source_length());
  return zm_parse_unchecked(y, x_index);
}

ParseResult zm_parse(const SymbolSequence& y, const SymbolSequence& x) {
  require_equal_lengths(y, x.size());
  return zm_parse_unchecked(y, SubstringIndex::build(x));
}

ParseResult lz78_parse(const SymbolSequence& y) {
  if (y.empty()) throw std::invalid_argument("lz78_parse: empty sequence");
  parse_counters().lz78.fetch_add(1, std::memory_order_relaxed);

  // Phrase trie; node 0 is the empty phrase.
  struct TrieNode {
    std::vector<std::pair<Symbol, std::int32_t>> next;
  };
  std::vector<TrieNode> trie(1);
  auto find = [&](std::int32_t node, Symbol c) -> std::int32_t {
    for (const auto& [sym, to] : trie[node].next)
      if (sym == c) return to;
    return -1;
  };

  ParseResult res;
  res.variant = ParseVariant::LZ78;
  res.source_length = y.size();

  std::int32_t node = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (node == 0) res.boundaries.push_back(static_cast<std::uint64_t>(i) + 1);
    const std::int32_t to = find(node, y[i]);
    if (to != -1) {
      node = to;
      continue;
    }
    trie[node].next.emplace_back(y[i], static_cast<std::int32_t>(trie.size()));
    trie.emplace_back();
    node = 0;  // phrase complete
  }
  res.word_count = res.boundaries.size();
  return res;
}

std::size_t longest_match(const SymbolSequence& z, const SubstringIndex& x_index) {
  require_same_alphabet(*z.alphabet, *x_index.alphabet(), "longest_match");
  if (z.empty()) throw std::invalid_argument("longest_match: z must be nonempty");
  auto state = x_index.root_state();
  for (Symbol c : z.data) {
    const auto ext = x_index.extend(state, c);
    if (!ext.found) break;
    state = ext.state;
  }
  return state.matched;
}

std::size_t longest_match(const SymbolSequence& z, const SymbolSequence& x, std::size_t n) {
  if (n == 0 || n > x.size())
    throw std::invalid_argument("longest_match: horizon must satisfy 1 <= n <= |x|");
  return longest_match(z, SubstringIndex::build(x.prefix(n)));
}

std::optional<std::size_t> waiting_time(const SymbolSequence& a, const SymbolSequence& x) {
  require_same_alphabet(*a.alphabet, *x.alphabet, "waiting_time");
  if (a.empty()) throw std::invalid_argument("waiting_time: empty pattern");
  if (a.size() > x.size()) return std::nullopt;
  const auto it = std::search(x.data.begin(), x.data.end(), a.data.begin(), a.data.end());
  if (it == x.data.end()) return std::nullopt;
  return static_cast<std::size_t>(it - x.data.begin()) + 1;
}

}  // namespace zmest
