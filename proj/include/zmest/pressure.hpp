#pragma once

#include <vector>

#include "zmest/hmm.hpp"

namespace zmest {

// Enumeration budget shared by the pressure and decoupling scans: at most
// 2^24 strings may be visited by one call.
constexpr std::size_t kEnumerationBudget = std::size_t{1} << 24;

// q_ell(alpha) = ln sum_{|a|=ell} P_X[a]^{-alpha} P_Y[a], computed by a
// depth-first walk of the A^ell tree that extends both models' forward
// vectors one symbol at a time, with streaming log-sum-exp accumulation.
// The walk is split into fixed subtrees whose partial sums are combined
// in symbol order, so results are identical for any thread count.
// Conventions: terms with P_Y[a] = 0 vanish; at alpha = 0 the X factor is
// 1 regardless of support; a term with P_X[a] = 0 < P_Y[a] makes the sum
// +inf when alpha > 0 and vanishes when alpha < 0.
double q_ell(const HmmModel& model_x, const HmmModel& model_y, int ell, double alpha);

// q_ell / ell along a list of lengths; the last entry is the working
// estimate of the asymptotic pressure and `drift` is the per-symbol
// change between ell_max and ell_max - 1, a heuristic convergence proxy.
struct PressureRow {
  double alpha = 0.0;
  std::vector<int> lengths;
  std::vector<double> q;
  std::vector<double> per_symbol;
  double drift = 0.0;
};
PressureRow pressure_per_symbol(const HmmModel& model_x, const HmmModel& model_y,
                                double alpha, const std::vector<int>& lengths);

// Tabulated q_ell(alpha) over an (alpha, ell) grid, row-major by alpha.
struct PressureCurve {
  std::vector<double> alphas;
  std::vector<int> lengths;
  std::vector<double> q;           // alphas.size() x lengths.size()
  std::vector<double> per_symbol;  // same layout

  double at(std::size_t ia, std::size_t il) const { return q[ia * lengths.size() + il]; }
};
PressureCurve pressure_curve(const HmmModel& model_x, const HmmModel& model_y,
                             const std::vector<double>& alphas,
                             const std::vector<int>& lengths);

// q_ell(-1)/ell with the sign verdict: strictly below -1e-6 certifies the
// nondegeneracy the estimator theory needs.
struct NondegeneracyResult {
  int ell = 0;
  double per_symbol = 0.0;
  bool nondegenerate = false;
};
NondegeneracyResult nondegeneracy(const HmmModel& model_x, const HmmModel& model_y, int ell);

// Secant proxy (q_ell(0) - q_ell(-h)) / (h * ell) = -q_ell(-h)/(h * ell)
// for the left derivative of the pressure at 0, which identifies the
// cross entropy rate. Both error sources are the caller's to balance:
// finite ell truncates the limit, finite h biases the secant upward.
double left_derivative_estimate(const HmmModel& model_x, const HmmModel& model_y,
                                double h, int ell);

}  // namespace zmest
