#include "zmest/pressure.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace zmest {

namespace {

// Streaming log-sum-exp accumulator; merge order is fixed by the caller.
struct LogSum {
  double max = -kInf;
  double sum = 0.0;

  void add(double term) {
    if (term == -kInf) return;
    if (term > max) {
      sum = (max == -kInf) ? 1.0 : sum * std::exp(max - term) + 1.0;
      max = term;
    } else {
      sum += std::exp(term - max);
    }
  }

  void merge(const LogSum& o) {
    if (o.max == -kInf) return;
    if (o.max > max) {
      sum = (max == -kInf) ? o.sum : sum * std::exp(max - o.max) + o.sum;
      max = o.max;
    } else {
      sum += o.sum * std::exp(o.max - max);
    }
  }

  double value() const { return max == -kInf ? -kInf : max + std::log(sum); }
};

// Forward state of one model along the current prefix: normalized state
// vector plus the accumulated log normalizers. `dead` marks a vanished
// marginal (the whole subtree below has probability zero).
struct Forward {
  std::vector<double> f;
  double log_prob = 0.0;
  bool dead = false;
};

Forward forward_root(const HmmModel& m) {
  return {std::vector<double>(m.state_count(), 0.0), 0.0, false};
}

// Predecessor half-step g(t) = sum_s f(s) P(s,t), shared by all symbol
// extensions below one node.
void half_step(const HmmModel& m, const std::vector<double>& f, std::vector<double>& g) {
  const std::size_t S = m.state_count();
  for (std::size_t t = 0; t < S; ++t) {
    double v = 0.0;
    for (std::size_t s = 0; s < S; ++s) v += f[s] * m.P(s, t);
    g[t] = v;
  }
}

// Completes the step with emission of symbol a from the half-step vector
// (or from pi at depth 0); renormalizes and accumulates the log weight.
bool emit(const HmmModel& m, const std::vector<double>& base, Symbol a, Forward& out) {
  const std::size_t S = m.state_count();
  double c = 0.0;
  for (std::size_t s = 0; s < S; ++s) {
    const double v = base[s] * m.R(s, a);
    out.f[s] = v;
    c += v;
  }
  if (c <= 0.0) return false;
  const double inv = 1.0 / c;
  for (std::size_t s = 0; s < S; ++s) out.f[s] *= inv;
  out.log_prob += std::log(c);
  return true;
}

struct SubtreeSum {
  LogSum ls;
  bool infinite = false;
};

struct Walker {
  const HmmModel& mx;
  const HmmModel& my;
  std::size_t A;
  int ell;
  double alpha;

  // Scratch: per-depth half-step vectors, reused across siblings.
  std::vector<std::vector<double>> gx, gy;

  Walker(const HmmModel& x, const HmmModel& y, int ell_, double alpha_)
      : mx(x), my(y), A(x.alphabet->size()), ell(ell_), alpha(alpha_) {
    gx.assign(ell + 1, std::vector<double>(mx.state_count(), 0.0));
    gy.assign(ell + 1, std::vector<double>(my.state_count(), 0.0));
  }

  void leaf(const Forward& fx, const Forward& fy, SubtreeSum& acc) const {
    // fy alive here; fx may be dead.
    if (fx.dead) {
      if (alpha > 0.0) acc.infinite = true;
      else if (alpha == 0.0) acc.ls.add(fy.log_prob);
      return;
    }
    acc.ls.add(alpha == 0.0 ? fy.log_prob : -alpha * fx.log_prob + fy.log_prob);
  }

  // Enumerates all extensions of the node at `depth` described by (fx, fy).
  void walk(int depth, const Forward& fx, const Forward& fy, SubtreeSum& acc) {
    if (depth == ell) {
      leaf(fx, fy, acc);
      return;
    }
    const std::vector<double>& bx = depth == 0 ? mx.pi : gx[depth];
    const std::vector<double>& by = depth == 0 ? my.pi : gy[depth];
    if (depth > 0) {
      if (!fx.dead) half_step(mx, fx.f, gx[depth]);
      half_step(my, fy.f, gy[depth]);
    }
    Forward cx{std::vector<double>(mx.state_count(), 0.0), 0.0, false};
    Forward cy{std::vector<double>(my.state_count(), 0.0), 0.0, false};
    for (Symbol a = 0; static_cast<std::size_t>(a) < A; ++a) {
      cy.log_prob = fy.log_prob;
      if (!emit(my, by, a, cy)) continue;  // dead Y subtree contributes nothing
      cx.dead = fx.dead;
      if (!fx.dead) {
        cx.log_prob = fx.log_prob;
        if (!emit(mx, bx, a, cx)) cx.dead = true;
      }
      if (cx.dead) {
        if (alpha > 0.0) {
          // Some Y-positive leaf exists below, so the sum is infinite.
          acc.infinite = true;
          continue;
        }
        if (alpha < 0.0) continue;  // zero factor kills the subtree
      }
      walk(depth + 1, cx, cy, acc);
    }
  }

  // Walks the subtree rooted at a fixed prefix; returns false when the
  // prefix itself has zero Y-probability.
  bool walk_prefix(const std::vector<Symbol>& prefix, SubtreeSum& acc) {
    Forward fx = forward_root(mx), fy = forward_root(my);
    std::vector<double> base_x = mx.pi, base_y = my.pi;
    for (std::size_t d = 0; d < prefix.size(); ++d) {
      if (d > 0) {
        if (!fx.dead) half_step(mx, fx.f, base_x);
        half_step(my, fy.f, base_y);
      }
      Forward nx{std::vector<double>(mx.state_count(), 0.0), fx.log_prob, fx.dead};
      Forward ny{std::vector<double>(my.state_count(), 0.0), fy.log_prob, false};
      if (!emit(my, base_y, prefix[d], ny)) return false;
      if (!fx.dead && !emit(mx, base_x, prefix[d], nx)) nx.dead = true;
      fx = std::move(nx);
      fy = std::move(ny);
      if (fx.dead) {
        if (alpha > 0.0) {
          acc.infinite = true;
          return true;
        }
        if (alpha < 0.0) return false;
      }
    }
    walk(static_cast<int>(prefix.size()), fx, fy, acc);
    return true;
  }
};

// Fixed split depth: enough subtrees for useful parallelism, independent
// of the runtime thread count so results are reproducible everywhere.
int split_depth(std::size_t alphabet, int ell) {
  int k = 0;
  std::size_t count = 1;
  while (k < ell && count < 256) {
    count *= alphabet;
    ++k;
  }
  return k;
}

}  // namespace

double q_ell(const HmmModel& model_x, const HmmModel& model_y, int ell, double alpha) {
  require_same_alphabet(*model_x.alphabet, *model_y.alphabet, "q_ell");
  if (ell < 1) throw std::invalid_argument("q_ell: ell must be >= 1");
  require_sampleable(model_x, "q_ell");
  require_sampleable(model_y, "q_ell");

  const std::size_t A = model_x.alphabet->size();
  double strings = 1.0;
  for (int i = 0; i < ell; ++i) {
    strings *= static_cast<double>(A);
    if (strings > static_cast<double>(kEnumerationBudget))
      throw budget_error("q_ell: |A|^ell exceeds the 2^24 string enumeration budget");
  }

  const int kd = split_depth(A, ell);
  std::size_t prefixes = 1;
  for (int i = 0; i < kd; ++i) prefixes *= A;

  std::vector<SubtreeSum> partial(prefixes);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::int64_t p = 0; p < static_cast<std::int64_t>(prefixes); ++p) {
    std::vector<Symbol> prefix(kd);
    std::size_t code = static_cast<std::size_t>(p);
    for (int d = kd; d-- > 0;) {
      prefix[d] = static_cast<Symbol>(code % A);
      code /= A;
    }
    Walker w(model_x, model_y, ell, alpha);
    w.walk_prefix(prefix, partial[p]);
  }

  SubtreeSum total;
  for (const SubtreeSum& s : partial) {
    total.infinite = total.infinite || s.infinite;
    total.ls.merge(s.ls);
  }
  if (total.infinite) return kInf;
  return total.ls.value();
}

PressureRow pressure_per_symbol(const HmmModel& model_x, const HmmModel& model_y,
                                double alpha, const std::vector<int>& lengths) {
  if (lengths.empty()) throw std::invalid_argument("pressure_per_symbol: no lengths");
  PressureRow row;
  row.alpha = alpha;
  row.lengths = lengths;
  for (int ell : lengths) {
    const double q = q_ell(model_x, model_y, ell, alpha);
    row.q.push_back(q);
    row.per_symbol.push_back(q / ell);
  }
  const int ell_max = lengths.back();
  if (ell_max >= 2) {
    double q_prev = kInf;
    for (std::size_t i = 0; i < lengths.size(); ++i)
      if (lengths[i] == ell_max - 1) q_prev = row.q[i];
    if (q_prev == kInf) q_prev = q_ell(model_x, model_y, ell_max - 1, alpha);
    row.drift = std::abs(row.q.back() / ell_max - q_prev / (ell_max - 1));
  } else {
    row.drift = std::numeric_limits<double>::quiet_NaN();
  }
  return row;
}

PressureCurve pressure_curve(const HmmModel& model_x, const HmmModel& model_y,
                             const std::vector<double>& alphas,
                             const std::vector<int>& lengths) {
  PressureCurve curve;
  curve.alphas = alphas;
  curve.lengths = lengths;
  curve.q.reserve(alphas.size() * lengths.size());
  for (double a : alphas)
    for (int ell : lengths) {
      const double q = q_ell(model_x, model_y, ell, a);
      curve.q.push_back(q);
      curve.per_symbol.push_back(q / ell);
    }
  return curve;
}

NondegeneracyResult nondegeneracy(const HmmModel& model_x, const HmmModel& model_y, int ell) {
  NondegeneracyResult res;
  res.ell = ell;
  res.per_symbol = q_ell(model_x, model_y, ell, -1.0) / ell;
  res.nondegenerate = res.per_symbol < -1e-6;
  return res;
}

double left_derivative_estimate(const HmmModel& model_x, const HmmModel& model_y,
                                double h, int ell) {
  if (!(h > 0.0) || h > 1.0)
    throw std::invalid_argument("left_derivative_estimate: need 0 < h <= 1");
  return -q_ell(model_x, model_y, ell, -h) / (h * ell);
}

}  // namespace zmest
