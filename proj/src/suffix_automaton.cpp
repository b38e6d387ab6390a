#include "zmest/suffix_automaton.hpp"

#include <atomic>
#include <chrono>
#include <stdexcept>

namespace zmest {

namespace {
std::atomic<std::uint64_t> g_next_index_id{1};
}

void SubstringIndex::append(Symbol c) {
  const std::int32_t cur = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{});
  nodes_[cur].len = nodes_[last_].len + 1;

  std::int32_t p = last_;
  while (p != -1 && find_transition(p, c) == -1) {
    set_transition(p, c, cur);
    p = nodes_[p].link;
  }
  if (p == -1) {
    nodes_[cur].link = 0;
  } else {
    const std::int32_t q = find_transition(p, c);
    if (nodes_[p].len + 1 == nodes_[q].len) {
      nodes_[cur].link = q;
    } else {
      const std::int32_t clone = static_cast<std::int32_t>(nodes_.size());
      nodes_.push_back(nodes_[q]);
      nodes_[clone].len = nodes_[p].len + 1;
      while (p != -1 && find_transition(p, c) == q) {
        set_transition(p, c, clone);
        p = nodes_[p].link;
      }
      nodes_[q].link = clone;
      nodes_[cur].link = clone;
    }
  }
  last_ = cur;
}

SubstringIndex SubstringIndex::build(const SymbolSequence& text) {
  if (text.empty())
    throw std::invalid_argument("SubstringIndex: cannot index an empty sequence");
  if (text.alphabet->size() > kMaxAlphabetSize)
    throw std::invalid_argument("SubstringIndex: alphabet exceeds the 65535-symbol cap");

  const auto t0 = std::chrono::steady_clock::now();
  SubstringIndex idx;
  idx.alphabet_ = text.alphabet;
  idx.source_length_ = text.size();
  idx.id_ = g_next_index_id.fetch_add(1, std::memory_order_relaxed);
  idx.nodes_.reserve(2 * text.size());
  idx.nodes_.push_back(Node{.link = -1, .len = 0, .next = {}});
  for (Symbol c : text.data) idx.append(c);
  idx.build_seconds_ =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return idx;
}

bool SubstringIndex::contains(const SymbolSequence& w) const {
  require_same_alphabet(*alphabet_, *w.alphabet, "SubstringIndex::contains");
  std::int32_t node = 0;
  for (Symbol c : w.data) {
    node = find_transition(node, c);
    if (node == -1) return false;
  }
  return true;
}

SubstringIndex::ExtendResult SubstringIndex::extend(const MatchState& state,
                                                    Symbol next_symbol) const {
  if (state.index_id != id_)
    throw std::logic_error("SubstringIndex::extend: state belongs to a different index");
  if (!state.valid())
    throw std::logic_error("SubstringIndex::extend: state already failed");
  if (next_symbol >= alphabet_->size())
    throw std::invalid_argument("SubstringIndex::extend: symbol out of range");
  const std::int32_t to = find_transition(state.node, next_symbol);
  if (to == -1) return {false, {id_, -1, state.matched}};
  return {true, {id_, to, state.matched + 1}};
}

}  // namespace zmest
