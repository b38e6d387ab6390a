#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zmest/alphabet.hpp"
#include "zmest/suffix_automaton.hpp"

namespace zmest {

enum class ParseVariant { mZM, ZM, LZ78 };

const char* to_string(ParseVariant v);

// Decomposition of a sequence y into consecutive words. Boundaries are
// the 1-based start positions L_1 = 1 < L_2 < ... <= N; word k spans
// [boundaries[k], boundaries[k+1]-1] and the last word runs to N.
struct ParseResult {
  ParseVariant variant = ParseVariant::mZM;
  std::uint64_t word_count = 0;  // c_N
  std::size_t source_length = 0;
  std::vector<std::uint64_t> boundaries;

  std::size_t word_length(std::size_t k) const {
    const std::uint64_t end =
        (k + 1 < boundaries.size()) ? boundaries[k + 1] : source_length + 1;
    return static_cast<std::size_t>(end - boundaries[k]);
  }
  std::size_t max_word_length() const;

  // {"variant": ..., "c": ..., "boundaries": [...]}
  std::string to_json() const;
};

// Call counters for the performance contract tests (each experiment grid
// point must trigger exactly one parse per variant).
struct ParseCounters {
  std::atomic<std::uint64_t> mzm{0};
  std::atomic<std::uint64_t> zm{0};
  std::atomic<std::uint64_t> lz78{0};
};
ParseCounters& parse_counters();

// Sequential parse of y into shortest prefixes not found in x. The two
// equal-length overloads enforce |y| == |x|; the *_unchecked forms allow
// any text length and exist for experimentation only.
ParseResult mzm_parse(const SymbolSequence& y, const SymbolSequence& x);
ParseResult mzm_parse(const SymbolSequence& y, const SubstringIndex& x_index);
ParseResult mzm_parse_unchecked(const SymbolSequence& y, const SubstringIndex& x_index);

// Original variant: on a failed query with i < j the longest found word
// y_i^{j-1} is closed and the scan resumes at j; a single unfound symbol
// is consumed as its own word.
ParseResult zm_parse(const SymbolSequence& y, const SymbolSequence& x);
ParseResult zm_parse(const SymbolSequence& y, const SubstringIndex& x_index);
ParseResult zm_parse_unchecked(const SymbolSequence& y, const SubstringIndex& x_index);

// Incremental self-parse into phrases not seen before as phrases; the
// final phrase may repeat an earlier one.
ParseResult lz78_parse(const SymbolSequence& y);

// Largest l <= min(|z|, n) such that z_1^l occurs in the first n symbols
// of x; 0 when even the first symbol is absent.
std::size_t longest_match(const SymbolSequence& z, const SymbolSequence& x, std::size_t n);
std::size_t longest_match(const SymbolSequence& z, const SubstringIndex& x_index);

// Smallest 1-based r with x_r^{r+|a|-1} = a; nullopt when a never occurs
// (including |a| > |x|).
std::optional<std::size_t> waiting_time(const SymbolSequence& a, const SymbolSequence& x);

}  // namespace zmest
