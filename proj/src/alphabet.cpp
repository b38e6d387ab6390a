#include "zmest/alphabet.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <unordered_set>

#include "zmest/common.hpp"

namespace zmest {

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  single_char_ = std::all_of(symbols_.begin(), symbols_.end(),
                             [](const std::string& s) { return s.size() == 1; });
}

std::shared_ptr<const Alphabet> Alphabet::create(std::vector<std::string> symbols) {
  if (symbols.empty()) throw std::invalid_argument("alphabet: no symbols");
  if (symbols.size() > kMaxAlphabetSize)
    throw std::invalid_argument("alphabet: more than 65535 symbols are not supported");
  std::unordered_set<std::string> seen;
  for (const auto& s : symbols) {
    if (s.empty()) throw std::invalid_argument("alphabet: empty symbol token");
    for (unsigned char c : s)
      if (std::isspace(c))
        throw std::invalid_argument("alphabet: whitespace inside symbol token '" + s + "'");
    if (!seen.insert(s).second)
      throw std::invalid_argument("alphabet: duplicate symbol token '" + s + "'");
  }
  return std::shared_ptr<const Alphabet>(new Alphabet(std::move(symbols)));
}

std::optional<Symbol> Alphabet::index_of(std::string_view token) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i] == token) return static_cast<Symbol>(i);
  return std::nullopt;
}

SymbolSequence SymbolSequence::prefix(std::size_t n) const {
  if (n > data.size()) throw std::invalid_argument("sequence prefix longer than sequence");
  return {alphabet, std::vector<Symbol>(data.begin(), data.begin() + n)};
}

SymbolSequence SymbolSequence::slice(std::size_t begin, std::size_t len) const {
  if (begin > data.size() || len > data.size() - begin)
    throw std::invalid_argument("sequence slice out of range");
  return {alphabet, std::vector<Symbol>(data.begin() + begin, data.begin() + begin + len)};
}

std::string SymbolSequence::to_string() const {
  std::string out;
  const bool compact = alphabet->single_char();
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!compact && i > 0) out += ' ';
    out += alphabet->symbol(data[i]);
  }
  return out;
}

SymbolSequence SymbolSequence::from_indices(AlphabetPtr alphabet, std::vector<Symbol> indices) {
  for (Symbol s : indices)
    if (s >= alphabet->size())
      throw std::invalid_argument("sequence: symbol index out of range");
  return {std::move(alphabet), std::move(indices)};
}

SymbolSequence SymbolSequence::from_chars(AlphabetPtr alphabet, std::string_view text) {
  std::vector<Symbol> idx;
  idx.reserve(text.size());
  for (char c : text) {
    auto i = alphabet->index_of(std::string_view(&c, 1));
    if (!i) throw std::invalid_argument(std::string("sequence: unknown symbol '") + c + "'");
    idx.push_back(*i);
  }
  return {std::move(alphabet), std::move(idx)};
}

bool SymbolSequence::operator==(const SymbolSequence& o) const {
  return *alphabet == *o.alphabet && data == o.data;
}

void require_same_alphabet(const Alphabet& a, const Alphabet& b, const char* where) {
  if (!(a == b))
    throw std::invalid_argument(std::string(where) + ": alphabet mismatch");
}

}  // namespace zmest
