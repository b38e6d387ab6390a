#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "zmest/alphabet.hpp"

namespace zmest {

// Immutable substring-membership index over a fixed text, backed by a
// suffix automaton built online in O(N * |A|) time and space. A word w
// is a substring of the text iff it labels a path from the root, so
// membership costs one transition lookup per symbol.
class SubstringIndex {
 public:
  // Per-caller cursor for incremental left-anchored queries. Obtained
  // from root_state() and advanced one symbol at a time; becomes invalid
  // after a failed extension.
  struct MatchState {
    std::uint64_t index_id = 0;
    std::int32_t node = -1;
    std::size_t matched = 0;

    bool valid() const { return node >= 0; }
  };

  struct ExtendResult {
    bool found = false;
    MatchState state;
  };

  static SubstringIndex build(const SymbolSequence& text);

  std::size_t source_length() const { return source_length_; }
  const AlphabetPtr& alphabet() const { return alphabet_; }
  std::size_t node_count() const { return nodes_.size(); }
  double build_seconds() const { return build_seconds_; }
  std::uint64_t id() const { return id_; }

  // True iff w occurs as a contiguous substring of the source text; the
  // empty word is contained in every text.
  bool contains(const SymbolSequence& w) const;

  MatchState root_state() const { return {id_, 0, 0}; }

  // Equivalent to contains() on the matched word extended by one symbol.
  // The state must stem from this index and must not have failed.
  ExtendResult extend(const MatchState& state, Symbol next_symbol) const;

 private:
  struct Node {
    std::int32_t link = -1;
    std::int32_t len = 0;
    // Sorted insertion is not needed: nodes carry at most |A| entries and
    // the alphabets in play are small, so a linear scan wins.
    std::vector<std::pair<Symbol, std::int32_t>> next;
  };

  std::int32_t find_transition(std::int32_t node, Symbol c) const {
    for (const auto& [sym, to] : nodes_[node].next)
      if (sym == c) return to;
    return -1;
  }

  void set_transition(std::int32_t node, Symbol c, std::int32_t to) {
    for (auto& [sym, t] : nodes_[node].next)
      if (sym == c) {
        t = to;
        return;
      }
    nodes_[node].next.emplace_back(c, to);
  }

  void append(Symbol c);

  std::vector<Node> nodes_;
  std::int32_t last_ = 0;
  std::size_t source_length_ = 0;
  AlphabetPtr alphabet_;
  double build_seconds_ = 0.0;
  std::uint64_t id_ = 0;
};

}  // namespace zmest
