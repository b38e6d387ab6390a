#pragma once

#include "zmest/hmm.hpp"
#include "zmest/parse.hpp"

namespace zmest {
// Straightforward serial implementations of the hot kernels. They are the
// ground truth for the optimized paths: the test suites check exact
// agreement and the benchmark target compares running times against them.
namespace reference {

// O(|x| * |w|) substring scan.
bool naive_contains(const SymbolSequence& x, const SymbolSequence& w);

// The two ZM-type parses with every membership query answered by
// naive_contains (O(N^2) per query, O(N^3) total).
ParseResult mzm_parse_naive(const SymbolSequence& y, const SymbolSequence& x);
ParseResult zm_parse_naive(const SymbolSequence& y, const SymbolSequence& x);

std::size_t longest_match_naive(const SymbolSequence& z, const SymbolSequence& x,
                                std::size_t n);

// ln P[x] as an explicit sum over all |S|^n hidden state paths.
double log_marginal_bruteforce(const HmmModel& model, const SymbolSequence& x);

// ln sum_a P_X[a]^{-alpha} P_Y[a] by enumerating every string of length
// ell and calling log_marginal from scratch on each.
double q_ell_naive(const HmmModel& model_x, const HmmModel& model_y, int ell, double alpha);

}  // namespace reference
}  // namespace zmest
