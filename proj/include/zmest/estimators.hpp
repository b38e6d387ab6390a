#pragma once

#include <span>
#include <string>
#include <vector>

#include "zmest/hmm.hpp"
#include "zmest/parse.hpp"

namespace zmest {

enum class Estimator { mZM, ZM, LM, LZ78, KL };

const char* to_string(Estimator e);
// Parses one of "mZM","ZM","LM","LZ78","KL" (case sensitive).
Estimator estimator_from_string(const std::string& name);

// Ratio-of-counts cross entropy estimates, in nats per symbol. A +inf
// return is the degenerate-count sentinel, never an approximation.
double q_mzm(const SymbolSequence& y, const SymbolSequence& x);  // c ln N / (N - c)
double q_zm(const SymbolSequence& y, const SymbolSequence& x);   // c ln N / N
double q_lm(const SymbolSequence& y, const SymbolSequence& x);   // ln N / Lambda_N
double h_lz78(const SymbolSequence& y);                          // c ln c / N
// q_mzm - h_lz78; may be negative at finite N and is not clamped.
double d_kl(const SymbolSequence& y, const SymbolSequence& x);

// All five estimates of one (y, x) pair computed from a single substring
// index, one parse per ZM-type variant and one LZ78 self-parse. This is
// the worker behind trace() and the experiment harness.
struct PointEstimates {
  double mzm = 0, zm = 0, lm = 0, lz78 = 0, kl = 0;
  std::uint64_t c_mzm = 0, c_zm = 0, c_lz78 = 0;
  std::size_t lambda = 0;
  std::size_t max_mzm_word = 0;
};
PointEstimates evaluate_point(const SymbolSequence& y, const SymbolSequence& x);

struct EstimateTrace {
  Estimator tag = Estimator::mZM;
  std::vector<std::size_t> grid;
  std::vector<double> values;
};

// Samples one realization pair (Y from model_y, X from model_x) of length
// max(grid) and evaluates the tagged estimator on each prefix length in
// the grid; one realization serves every grid point.
EstimateTrace trace(const HmmModel& model_y, const HmmModel& model_x,
                    std::span<const std::size_t> grid, Estimator tag,
                    std::uint64_t seed);

}  // namespace zmest
