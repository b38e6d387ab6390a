#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zmest/alphabet.hpp"
#include "zmest/common.hpp"

namespace zmest {

// Hidden-Markov process: stationary hidden chain (pi, P) over a finite
// state space plus a row-stochastic emission matrix R into the alphabet.
struct HmmModel {
  AlphabetPtr alphabet;
  std::vector<double> pi;  // initial/stationary distribution over states
  Matrix P;                // |S| x |S| transition matrix
  Matrix R;                // |S| x |A| emission matrix

  std::size_t state_count() const { return pi.size(); }

  // Checks dimensional consistency only; probabilistic soundness is the
  // job of validate(), so that defective models can still be reported on.
  static HmmModel create(AlphabetPtr alphabet, std::vector<double> pi, Matrix P, Matrix R);
};

struct ValidationReport {
  bool stochastic_ok = false;   // pi, P, R nonnegative with unit row sums
  bool stationary_ok = false;   // ||pi P - pi||_inf <= 1e-10
  bool irreducible_ok = false;  // positive-transition digraph strongly connected
  bool nondegenerate_ok = false;
  // First length at which, from every start state, at least two strings
  // have positive probability. Absent when the support never branches
  // within the searched horizon.
  std::optional<std::size_t> witness_n;
  // Horizon |S|*|A| used for the support search; recorded so callers can
  // tell a genuine failure from a too-small search window.
  std::size_t support_horizon = 0;
  std::vector<std::string> messages;

  bool all_ok() const {
    return stochastic_ok && stationary_ok && irreducible_ok && nondegenerate_ok;
  }
};

// Flags stochasticity, stationarity, irreducibility and nondegeneracy
// (support branching) of a dimensionally consistent model.
ValidationReport validate(const HmmModel& model);

// Unique stationary distribution of an irreducible row-stochastic matrix,
// via a direct linear solve with a power-iteration fallback; residual
// ||pi P - pi||_inf <= 1e-12. Reducible input is an error naming the
// unreachable states.
std::vector<double> stationary_distribution(const Matrix& P);

// Draws x_1..x_n from the model law: s1 ~ pi, then alternately emit from
// R and step with P. Identical (model, n, seed) triples give identical
// output on every platform (xoshiro256**, see rng.hpp).
SymbolSequence sample(const HmmModel& model, std::size_t n, std::uint64_t seed);

// ln P[x_1^n] by the scaled forward recursion (per-step normalizers
// accumulated in log domain), so 10^6-symbol sequences neither underflow
// nor overflow. Returns -inf when the marginal vanishes.
double log_marginal(const HmmModel& model, const SymbolSequence& x);

// Monte Carlo cross entropy rate: samples Y_1^n from model_y and returns
// -ln P_X[Y_1^n] / n; +inf when the marginal vanishes.
double cross_entropy_mc(const HmmModel& model_x, const HmmModel& model_y,
                        std::size_t n, std::uint64_t seed);

// -sum_a py(a) ln px(a); +inf on support violation.
double analytic_cross_entropy_iid(std::span<const double> py, std::span<const double> px);

// -sum_{s,t} pi_y(s) P_y(s,t) ln P_x(s,t) for stationary irreducible
// chains on a common state set; +inf on support violation.
double analytic_cross_entropy_markov(std::span<const double> pi_y, const Matrix& P_y,
                                     std::span<const double> pi_x, const Matrix& P_x);

// Conditions i-ii gate used by sampling and evaluation entry points.
void require_sampleable(const HmmModel& model, const char* where);

}  // namespace zmest
