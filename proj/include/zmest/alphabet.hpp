#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace zmest {

using Symbol = std::uint16_t;

// Largest supported alphabet: symbol indices are stored as 16-bit values
// (also the key width of the substring index transition maps).
constexpr std::size_t kMaxAlphabetSize = 65535;

// Ordered list of distinct symbol tokens. Immutable and shared; two
// alphabets are considered equal when their symbol lists are identical,
// never merely when their sizes agree.
class Alphabet {
 public:
  // Tokens must be nonempty, whitespace-free and pairwise distinct.
  // A single-symbol alphabet is accepted as a documented degenerate case.
  static std::shared_ptr<const Alphabet> create(std::vector<std::string> symbols);

  std::size_t size() const { return symbols_.size(); }
  const std::string& symbol(Symbol i) const { return symbols_[i]; }
  const std::vector<std::string>& symbols() const { return symbols_; }
  std::optional<Symbol> index_of(std::string_view token) const;

  // True when every token is a single byte; selects the compact
  // one-character-per-symbol sequence file format.
  bool single_char() const { return single_char_; }

  bool operator==(const Alphabet& o) const { return symbols_ == o.symbols_; }

 private:
  explicit Alphabet(std::vector<std::string> symbols);
  std::vector<std::string> symbols_;
  bool single_char_ = false;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

// Finite string of symbol indices over a fixed alphabet.
struct SymbolSequence {
  AlphabetPtr alphabet;
  std::vector<Symbol> data;

  std::size_t size() const { return data.size(); }
  bool empty() const { return data.empty(); }
  Symbol operator[](std::size_t i) const { return data[i]; }

  // First n symbols (n <= size).
  SymbolSequence prefix(std::size_t n) const;
  // 0-based contiguous slice of the given length.
  SymbolSequence slice(std::size_t begin, std::size_t len) const;

  // Renders with the alphabet's file conventions (single-char alphabets
  // concatenate, otherwise tokens are space separated).
  std::string to_string() const;

  // Builds from raw indices, checking them against the alphabet.
  static SymbolSequence from_indices(AlphabetPtr alphabet, std::vector<Symbol> indices);
  // Convenience for single-char alphabets: one symbol per character.
  static SymbolSequence from_chars(AlphabetPtr alphabet, std::string_view text);

  bool operator==(const SymbolSequence& o) const;
};

// Shared-alphabet precondition used by every cross-sequence operation.
void require_same_alphabet(const Alphabet& a, const Alphabet& b, const char* where);

}  // namespace zmest
