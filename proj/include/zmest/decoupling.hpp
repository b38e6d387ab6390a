#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zmest/hmm.hpp"

namespace zmest {

// Marginal probabilities P[a] of every string with |a| <= max_len, laid
// out per length and indexed by the base-|A| code of the string. Filled
// by one prefix-sharing forward walk; probabilities stay in the linear
// domain (lengths are far too short for underflow), so ratios of exact
// products stay exact.
class StringProbTable {
 public:
  static StringProbTable build(const HmmModel& model, int max_len);

  int max_len() const { return max_len_; }
  std::size_t alphabet_size() const { return alphabet_size_; }

  double prob(int len, std::uint64_t code) const { return by_len_[len][code]; }

  // Code of the concatenation ab given the codes and the length of b.
  std::uint64_t concat_code(std::uint64_t code_a, std::uint64_t code_b, int len_b) const {
    return code_a * pow_a_[len_b] + code_b;
  }
  std::uint64_t pow_alphabet(int k) const { return pow_a_[k]; }

 private:
  int max_len_ = 0;
  std::size_t alphabet_size_ = 0;
  std::vector<std::vector<double>> by_len_;
  std::vector<std::uint64_t> pow_a_;
};

struct StringWitness {
  int len = 0;
  std::uint64_t code = 0;
};

struct UpperCheckResult {
  bool ok = false;
  double worst_ratio = -kInf;  // max over (a,b) of ln P[ab] / (P[a] P[b])
  StringWitness witness_a, witness_b;
};

struct LowerCheckResult {
  bool ok = false;
  double worst_gap = kInf;  // min over (a,b) of max_{|xi|<=tau} ln P[a xi b] / (P[a] P[b])
  StringWitness witness_a, witness_b;
};

// Upper decoupling: P[ab] <= e^k P[a] P[b] over every pair with
// |a|+|b| <= L and P[a]P[b] > 0.
UpperCheckResult check_upper(const HmmModel& model, double k, int L);
UpperCheckResult check_upper(const StringProbTable& table, double k, int L);

// Lower decoupling: for every pair some insertion xi with |xi| <= tau
// achieves P[a xi b] >= e^-k P[a] P[b]. The table must cover L + tau.
LowerCheckResult check_lower(const HmmModel& model, double k, int tau, int L);
LowerCheckResult check_lower(const StringProbTable& table, double k, int tau, int L);

// Horizon-limited decoupling certificate: the constants make both checks
// pass for every pair up to total length L, which is evidence at scale L,
// not a proof for all strings.
struct DecouplingCertificate {
  double k = 0.0;
  int tau = 0;
  int horizon = 0;  // L
  bool upper_ok = false;
  bool lower_ok = false;
  double worst_upper_ratio = -kInf;
  double worst_lower_gap = kInf;
  std::string to_json() const;
  std::string to_csv() const;
};

// Smallest tau <= tau_max admitting a finite constant, then the smallest
// k on a 1e-3 grid making both checks pass at horizon L.
DecouplingCertificate fit_constants(const HmmModel& model, int L, int tau_max);

// Empirical tail of the waiting time W(a, X) against the decoupling bound
// (1 - e^-k P_X[a])^floor((r-1)/(|a|+tau)).
struct TailRow {
  std::size_t r = 0;
  double survival = 0.0;  // empirical Prob{W > r}
  double bound = 1.0;
  double sigma = 0.0;  // binomial std. error at the bound
  bool flagged = false;  // survival exceeds bound + 3 sigma
};
struct TailTable {
  std::vector<TailRow> rows;
  double p_a = 0.0;  // P_X[a]
  std::size_t trials = 0;
};
TailTable waiting_time_tail_test(const HmmModel& model_x, const SymbolSequence& a,
                                 double k, int tau, const std::vector<std::size_t>& r_grid,
                                 std::size_t trials, std::uint64_t seed);

}  // namespace zmest
