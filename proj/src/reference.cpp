#include "zmest/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace zmest {
namespace reference {

bool naive_contains(const SymbolSequence& x, const SymbolSequence& w) {
  if (w.size() > x.size()) return false;
  for (std::size_t k = 0; k + w.size() <= x.size(); ++k) {
    bool ok = true;
    for (std::size_t i = 0; i < w.size() && ok; ++i) ok = x[k + i] == w[i];
    if (ok) return true;
  }
  return false;
}

namespace {

ParseResult zm_family_naive(const SymbolSequence& y, const SymbolSequence& x,
                            bool shortest_not_found, ParseVariant tag) {
  require_same_alphabet(*y.alphabet, *x.alphabet, "parse");
  if (y.size() != x.size())
    throw std::invalid_argument("parse: sequences must have equal length");
  if (y.empty()) throw std::invalid_argument("parse: empty sequence");

  const std::size_t n = y.size();
  ParseResult res;
  res.variant = tag;
  res.source_length = n;
  res.word_count = 1;
  res.boundaries.push_back(1);

  std::size_t i = 0, j = 0;  // 0-based; query word is y[i..j]
  while (j + 1 < n) {
    if (naive_contains(x, y.slice(i, j - i + 1))) {
      ++j;
      continue;
    }
    ++res.word_count;
    if (shortest_not_found || i == j) {
      ++j;
      i = j;
    } else {
      i = j;
    }
    res.boundaries.push_back(static_cast<std::uint64_t>(i) + 1);
  }
  return res;
}

}  // namespace

ParseResult mzm_parse_naive(const SymbolSequence& y, const SymbolSequence& x) {
  return zm_family_naive(y, x, true, ParseVariant::mZM);
}

ParseResult zm_parse_naive(const SymbolSequence& y, const SymbolSequence& x) {
  return zm_family_naive(y, x, false, ParseVariant::ZM);
}

std::size_t longest_match_naive(const SymbolSequence& z, const SymbolSequence& x,
                                std::size_t n) {
  if (n == 0 || n > x.size())
    throw std::invalid_argument("longest_match: horizon must satisfy 1 <= n <= |x|");
  const SymbolSequence xp = x.prefix(n);
  std::size_t best = 0;
  const std::size_t cap = std::min(z.size(), n);
  for (std::size_t l = 1; l <= cap; ++l)
    if (naive_contains(xp, z.slice(0, l))) best = l;
  return best;
}

double log_marginal_bruteforce(const HmmModel& model, const SymbolSequence& x) {
  require_same_alphabet(*model.alphabet, *x.alphabet, "log_marginal_bruteforce");
  const std::size_t S = model.state_count();
  const std::size_t n = x.size();
  if (n == 0) return 0.0;

  double total = 0.0;
  std::vector<std::size_t> path(n, 0);
  for (;;) {
    double p = model.pi[path[0]] * model.R(path[0], x[0]);
    for (std::size_t i = 1; i < n && p > 0.0; ++i)
      p *= model.P(path[i - 1], path[i]) * model.R(path[i], x[i]);
    total += p;
    std::size_t k = n;
    while (k > 0) {
      if (++path[k - 1] < S) break;
      path[k - 1] = 0;
      --k;
    }
    if (k == 0) break;
  }
  return total > 0.0 ? std::log(total) : -kInf;
}

double q_ell_naive(const HmmModel& model_x, const HmmModel& model_y, int ell, double alpha) {
  require_same_alphabet(*model_x.alphabet, *model_y.alphabet, "q_ell_naive");
  const std::size_t A = model_x.alphabet->size();
  const auto n = static_cast<std::size_t>(ell);

  double max_term = -kInf, sum = 0.0;
  bool infinite = false;
  std::vector<Symbol> s(n, 0);
  for (;;) {
    const SymbolSequence a{model_x.alphabet, s};
    const double ly = log_marginal(model_y, a);
    if (ly != -kInf) {
      const double lx = log_marginal(model_x, a);
      double term;
      if (alpha == 0.0) {
        term = ly;
      } else if (lx == -kInf) {
        if (alpha > 0.0) infinite = true;
        term = -kInf;
      } else {
        term = -alpha * lx + ly;
      }
      if (term != -kInf) {
        if (term > max_term) {
          sum = sum * std::exp(max_term - term) + 1.0;
          max_term = term;
        } else {
          sum += std::exp(term - max_term);
        }
      }
    }
    std::size_t k = n;
    while (k > 0) {
      if (static_cast<std::size_t>(++s[k - 1]) < A) break;
      s[k - 1] = 0;
      --k;
    }
    if (k == 0) break;
  }
  if (infinite) return kInf;
  if (max_term == -kInf) return -kInf;
  return max_term + std::log(sum);
}

}  // namespace reference
}  // namespace zmest
