#include "zmest/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "zmest/rng.hpp"

namespace zmest {

namespace {

constexpr double kRowSumTol = 1e-12;
constexpr double kStationaryTol = 1e-10;

bool rows_stochastic(const Matrix& m, std::string* msg, const char* name) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      if (!(v >= 0.0) || !std::isfinite(v)) {
        if (msg) *msg = std::string(name) + " row " + std::to_string(i) + " has a negative or non-finite entry";
        return false;
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowSumTol) {
      if (msg) *msg = std::string(name) + " row " + std::to_string(i) + " sums to " + format_value(sum);
      return false;
    }
  }
  return true;
}

bool vector_stochastic(std::span<const double> v, std::string* msg, const char* name) {
  double sum = 0.0;
  for (double x : v) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      if (msg) *msg = std::string(name) + " has a negative or non-finite entry";
      return false;
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kRowSumTol) {
    if (msg) *msg = std::string(name) + " sums to " + format_value(sum);
    return false;
  }
  return true;
}

double stationary_residual(std::span<const double> pi, const Matrix& P) {
  double worst = 0.0;
  for (std::size_t t = 0; t < P.cols(); ++t) {
    double v = 0.0;
    for (std::size_t s = 0; s < P.rows(); ++s) v += pi[s] * P(s, t);
    worst = std::max(worst, std::abs(v - pi[t]));
  }
  return worst;
}

// States unreachable from `from` along positive-probability transitions.
std::vector<std::size_t> unreachable_from(const Matrix& P, std::size_t from) {
  const std::size_t n = P.rows();
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    const std::size_t s = stack.back();
    stack.pop_back();
    for (std::size_t t = 0; t < n; ++t)
      if (!seen[t] && P(s, t) > 0.0) {
        seen[t] = 1;
        stack.push_back(t);
      }
  }
  std::vector<std::size_t> missing;
  for (std::size_t t = 0; t < n; ++t)
    if (!seen[t]) missing.push_back(t);
  return missing;
}

bool strongly_connected(const Matrix& P) {
  for (std::size_t s = 0; s < P.rows(); ++s)
    if (!unreachable_from(P, s).empty()) return false;
  return true;
}

// Counts strings of length n with positive probability when the hidden
// chain starts in `start`, stopping as soon as two are found. The walk
// tracks the set of hidden states compatible with the emitted prefix.
std::size_t count_positive_strings(const HmmModel& m, std::size_t start, std::size_t n) {
  const std::size_t S = m.state_count();
  const std::size_t A = m.alphabet->size();
  std::size_t found = 0;

  struct Frame {
    std::vector<char> states;
    std::size_t depth;
    Symbol next_symbol;
  };
  std::vector<Frame> stack;
  std::vector<char> init(S, 0);
  init[start] = 1;
  stack.push_back({std::move(init), 0, 0});

  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next_symbol >= A) {
      stack.pop_back();
      continue;
    }
    const Symbol a = f.next_symbol++;
    std::vector<char> emit(S, 0);
    bool any = false;
    for (std::size_t s = 0; s < S; ++s)
      if (f.states[s] && m.R(s, a) > 0.0) {
        emit[s] = 1;
        any = true;
      }
    if (!any) continue;
    const std::size_t depth = f.depth + 1;
    if (depth == n) {
      if (++found >= 2) return found;
      continue;
    }
    std::vector<char> next(S, 0);
    for (std::size_t s = 0; s < S; ++s)
      if (emit[s])
        for (std::size_t t = 0; t < S; ++t)
          if (m.P(s, t) > 0.0) next[t] = 1;
    stack.push_back({std::move(next), depth, 0});
  }
  return found;
}

}  // namespace

HmmModel HmmModel::create(AlphabetPtr alphabet, std::vector<double> pi, Matrix P, Matrix R) {
  const std::size_t S = pi.size();
  if (S == 0) throw std::invalid_argument("model: empty state space");
  if (P.rows() != S || P.cols() != S)
    throw std::invalid_argument("model: P must be |S| x |S|");
  if (R.rows() != S || R.cols() != alphabet->size())
    throw std::invalid_argument("model: R must be |S| x |A|");
  return {std::move(alphabet), std::move(pi), std::move(P), std::move(R)};
}

ValidationReport validate(const HmmModel& model) {
  ValidationReport rep;
  const std::size_t S = model.state_count();
  const std::size_t A = model.alphabet->size();

  std::string msg;
  rep.stochastic_ok = vector_stochastic(model.pi, &msg, "pi") &&
                      rows_stochastic(model.P, &msg, "P") &&
                      rows_stochastic(model.R, &msg, "R");
  if (!rep.stochastic_ok) rep.messages.push_back("stochasticity: " + msg);

  const double res = stationary_residual(model.pi, model.P);
  rep.stationary_ok = res <= kStationaryTol;
  if (!rep.stationary_ok)
    rep.messages.push_back("stationarity: ||pi P - pi||_inf = " + format_value(res));

  rep.irreducible_ok = strongly_connected(model.P);
  if (!rep.irreducible_ok) {
    for (std::size_t s = 0; s < S; ++s) {
      auto missing = unreachable_from(model.P, s);
      if (!missing.empty()) {
        std::ostringstream os;
        os << "irreducibility: states {";
        for (std::size_t i = 0; i < missing.size(); ++i)
          os << (i ? "," : "") << missing[i];
        os << "} unreachable from state " << s;
        rep.messages.push_back(os.str());
        break;
      }
    }
  }

  // Support branching: from every start state, some length must carry at
  // least two positive-probability strings. The horizon |S|*|A| is a
  // heuristic search window, not part of the property itself.
  rep.support_horizon = S * A;
  std::size_t worst_first_branch = 0;
  bool all_branch = true;
  for (std::size_t s = 0; s < S && all_branch; ++s) {
    if (model.pi[s] == 0.0) {
      all_branch = false;
      rep.messages.push_back("nondegeneracy: state " + std::to_string(s) +
                             " has zero initial probability, no positive string from it");
      break;
    }
    bool branched = false;
    for (std::size_t n = 1; n <= rep.support_horizon; ++n) {
      if (count_positive_strings(model, s, n) >= 2) {
        worst_first_branch = std::max(worst_first_branch, n);
        branched = true;
        break;
      }
    }
    if (!branched) {
      all_branch = false;
      rep.messages.push_back("nondegeneracy: start state " + std::to_string(s) +
                             " emits a single positive string at every length <= " +
                             std::to_string(rep.support_horizon));
    }
  }
  rep.nondegenerate_ok = all_branch;
  if (all_branch) rep.witness_n = worst_first_branch;

  return rep;
}

std::vector<double> stationary_distribution(const Matrix& P) {
  const std::size_t n = P.rows();
  if (P.cols() != n) throw std::invalid_argument("stationary_distribution: P not square");

  for (std::size_t s = 0; s < n; ++s) {
    auto missing = unreachable_from(P, s);
    if (!missing.empty()) {
      std::ostringstream os;
      os << "stationary_distribution: reducible matrix, states {";
      for (std::size_t i = 0; i < missing.size(); ++i) os << (i ? "," : "") << missing[i];
      os << "} unreachable from state " << s;
      throw std::invalid_argument(os.str());
    }
  }

  // Solve (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
  Matrix a(n, n);
  std::vector<double> b(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = P(j, i) - (i == j ? 1.0 : 0.0);
  for (std::size_t j = 0; j < n; ++j) a(n - 1, j) = 1.0;
  b[n - 1] = 1.0;

  // Gaussian elimination with partial pivoting.
  std::vector<double> pi(n, 0.0);
  bool solved = true;
  for (std::size_t col = 0; col < n && solved; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) < 1e-300) {
      solved = false;
      break;
    }
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      b[r] -= f * b[col];
    }
  }
  if (solved) {
    for (std::size_t i = n; i-- > 0;) {
      double v = b[i];
      for (std::size_t j = i + 1; j < n; ++j) v -= a(i, j) * pi[j];
      pi[i] = v / a(i, i);
    }
    double sum = 0.0;
    for (double& v : pi) {
      if (v < 0.0 && v > -1e-12) v = 0.0;
      sum += v;
    }
    if (sum > 0.0)
      for (double& v : pi) v /= sum;
    if (stationary_residual(pi, P) <= 1e-12) return pi;
  }

  // Fallback: damped power iteration (converges for irreducible chains,
  // periodic ones included).
  pi.assign(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n, 0.0);
  for (int it = 0; it < 1000000; ++it) {
    for (std::size_t t = 0; t < n; ++t) {
      double v = 0.0;
      for (std::size_t s = 0; s < n; ++s) v += pi[s] * P(s, t);
      next[t] = 0.5 * (pi[t] + v);
    }
    double sum = 0.0;
    for (double v : next) sum += v;
    for (std::size_t t = 0; t < n; ++t) pi[t] = next[t] / sum;
    if (it % 16 == 0 && stationary_residual(pi, P) <= 1e-12) return pi;
  }
  if (stationary_residual(pi, P) <= 1e-12) return pi;
  throw std::runtime_error("stationary_distribution: did not reach residual 1e-12");
}

void require_sampleable(const HmmModel& model, const char* where) {
  std::string msg;
  if (!vector_stochastic(model.pi, &msg, "pi") || !rows_stochastic(model.P, &msg, "P") ||
      !rows_stochastic(model.R, &msg, "R"))
    throw std::invalid_argument(std::string(where) + ": invalid model: " + msg);
  if (stationary_residual(model.pi, model.P) > kStationaryTol)
    throw std::invalid_argument(std::string(where) + ": invalid model: pi is not stationary for P");
  if (!strongly_connected(model.P))
    throw std::invalid_argument(std::string(where) + ": invalid model: hidden chain is reducible");
}

namespace {

// Inverse-CDF draw along a probability row; the linear scan is exact and
// platform independent for the row sizes in play.
std::size_t draw_categorical(Rng& rng, std::span<const double> row) {
  const double u = rng.next_double();
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i] > 0.0) last_positive = i;
    acc += row[i];
    if (u < acc) return i;
  }
  return last_positive;  // guard against rounding in the partial sums
}

}  // namespace

SymbolSequence sample(const HmmModel& model, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample: n must be >= 1");
  require_sampleable(model, "sample");
  Rng rng(seed);
  std::vector<Symbol> out;
  out.reserve(n);
  std::size_t s = draw_categorical(rng, model.pi);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(static_cast<Symbol>(draw_categorical(rng, model.R.row(s))));
    if (i + 1 < n) s = draw_categorical(rng, model.P.row(s));
  }
  return {model.alphabet, std::move(out)};
}

double log_marginal(const HmmModel& model, const SymbolSequence& x) {
  require_same_alphabet(*model.alphabet, *x.alphabet, "log_marginal");
  if (x.empty()) return 0.0;
  const std::size_t S = model.state_count();

  std::vector<double> f(S), g(S);
  double log_prob = 0.0;
  for (std::size_t s = 0; s < S; ++s) f[s] = model.pi[s] * model.R(s, x[0]);
  for (std::size_t i = 1;; ++i) {
    double c = 0.0;
    for (double v : f) c += v;
    if (c <= 0.0) return -kInf;
    log_prob += std::log(c);
    if (i == x.size()) break;
    const double inv = 1.0 / c;
    for (std::size_t s = 0; s < S; ++s) f[s] *= inv;
    for (std::size_t t = 0; t < S; ++t) {
      double v = 0.0;
      for (std::size_t s = 0; s < S; ++s) v += f[s] * model.P(s, t);
      g[t] = v * model.R(t, x[i]);
    }
    std::swap(f, g);
  }
  return log_prob;
}

double cross_entropy_mc(const HmmModel& model_x, const HmmModel& model_y,
                        std::size_t n, std::uint64_t seed) {
  require_same_alphabet(*model_x.alphabet, *model_y.alphabet, "cross_entropy_mc");
  require_sampleable(model_x, "cross_entropy_mc");
  const SymbolSequence y = sample(model_y, n, seed);
  const double lm = log_marginal(model_x, y);
  if (lm == -kInf) return kInf;
  return -lm / static_cast<double>(n);
}

double analytic_cross_entropy_iid(std::span<const double> py, std::span<const double> px) {
  if (py.size() != px.size())
    throw std::invalid_argument("analytic_cross_entropy_iid: length mismatch");
  double acc = 0.0;
  for (std::size_t a = 0; a < py.size(); ++a) {
    if (py[a] == 0.0) continue;
    if (px[a] == 0.0) return kInf;
    acc -= py[a] * std::log(px[a]);
  }
  return acc;
}

double analytic_cross_entropy_markov(std::span<const double> pi_y, const Matrix& P_y,
                                     std::span<const double> pi_x, const Matrix& P_x) {
  const std::size_t n = pi_y.size();
  if (P_y.rows() != n || P_y.cols() != n || P_x.rows() != n || P_x.cols() != n ||
      pi_x.size() != n)
    throw std::invalid_argument("analytic_cross_entropy_markov: dimension mismatch");
  if (stationary_residual(pi_y, P_y) > kStationaryTol)
    throw std::invalid_argument("analytic_cross_entropy_markov: pi_y not stationary for P_y");
  if (!strongly_connected(P_y) || !strongly_connected(P_x))
    throw std::invalid_argument("analytic_cross_entropy_markov: chain not irreducible");
  double acc = 0.0;
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) {
      const double w = pi_y[s] * P_y(s, t);
      if (w == 0.0) continue;
      if (P_x(s, t) == 0.0) return kInf;
      acc -= w * std::log(P_x(s, t));
    }
  return acc;
}

}  // namespace zmest
