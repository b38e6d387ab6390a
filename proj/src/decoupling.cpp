#include "zmest/decoupling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "zmest/parse.hpp"
#include "zmest/pressure.hpp"
#include "zmest/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace zmest {

namespace {

void check_table_budget(std::size_t alphabet, int max_len) {
  double total = 0.0, level = 1.0;
  for (int m = 1; m <= max_len; ++m) {
    level *= static_cast<double>(alphabet);
    total += level;
    if (total > static_cast<double>(kEnumerationBudget))
      throw budget_error("decoupling: string table exceeds the 2^24 enumeration budget");
  }
}

struct FillWalker {
  const HmmModel& m;
  std::vector<std::vector<double>>& table;
  std::size_t A;
  int max_len;

  // Depth-first fill below a node at `depth` with code `code`, reusing the
  // parent's half-step vector.
  void walk(int depth, std::uint64_t code, const std::vector<double>& f) {
    if (depth == max_len) return;
    const std::size_t S = m.state_count();
    std::vector<double> g(S, 0.0);
    if (depth == 0) {
      g = m.pi;
    } else {
      for (std::size_t t = 0; t < S; ++t) {
        double v = 0.0;
        for (std::size_t s = 0; s < S; ++s) v += f[s] * m.P(s, t);
        g[t] = v;
      }
    }
    std::vector<double> child(S, 0.0);
    for (Symbol a = 0; static_cast<std::size_t>(a) < A; ++a) {
      double p = 0.0;
      for (std::size_t s = 0; s < S; ++s) {
        child[s] = g[s] * m.R(s, a);
        p += child[s];
      }
      const std::uint64_t child_code = code * A + a;
      table[depth + 1][child_code] = p;
      if (p > 0.0) walk(depth + 1, child_code, child);
      // zero-probability subtrees keep their pre-zeroed entries
    }
  }
};

}  // namespace

StringProbTable StringProbTable::build(const HmmModel& model, int max_len) {
  if (max_len < 1) throw std::invalid_argument("StringProbTable: max_len must be >= 1");
  require_sampleable(model, "StringProbTable");
  const std::size_t A = model.alphabet->size();
  check_table_budget(A, max_len);

  StringProbTable t;
  t.max_len_ = max_len;
  t.alphabet_size_ = A;
  t.pow_a_.resize(max_len + 1);
  t.pow_a_[0] = 1;
  for (int k = 1; k <= max_len; ++k) t.pow_a_[k] = t.pow_a_[k - 1] * A;
  t.by_len_.resize(max_len + 1);
  t.by_len_[0] = {1.0};
  for (int m = 1; m <= max_len; ++m) t.by_len_[m].assign(t.pow_a_[m], 0.0);

  // Parallel over depth-1 subtrees: each writes a disjoint code range.
  std::vector<double> roots(A, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::int64_t a = 0; a < static_cast<std::int64_t>(A); ++a) {
    const std::size_t S = model.state_count();
    std::vector<double> f(S, 0.0);
    double p = 0.0;
    for (std::size_t s = 0; s < S; ++s) {
      f[s] = model.pi[s] * model.R(s, static_cast<Symbol>(a));
      p += f[s];
    }
    roots[a] = p;
    if (p > 0.0) {
      FillWalker w{model, t.by_len_, A, max_len};
      w.walk(1, static_cast<std::uint64_t>(a), f);
    }
  }
  for (std::size_t a = 0; a < A; ++a) t.by_len_[1][a] = roots[a];
  return t;
}

namespace {

// Lexicographic-style deterministic tie-break across threads.
struct PairKey {
  int la = 0;
  std::uint64_t code_a = 0;
  int lb = 0;
  std::uint64_t code_b = 0;

  bool operator<(const PairKey& o) const {
    if (la != o.la) return la < o.la;
    if (code_a != o.code_a) return code_a < o.code_a;
    if (lb != o.lb) return lb < o.lb;
    return code_b < o.code_b;
  }
};

struct UpperScanBest {
  double ratio = -kInf;
  PairKey key;
  bool valid = false;

  // Keeps the largest ratio; ties resolve to the smallest key so the
  // witness does not depend on thread count or schedule.
  void consider(double ratio_, const PairKey& key_) {
    if (!valid || ratio_ > ratio || (ratio_ == ratio && key_ < key)) {
      ratio = ratio_;
      key = key_;
      valid = true;
    }
  }
};

struct LowerScanBest {
  double gap = kInf;
  PairKey key;
  bool valid = false;

  void consider(double gap_, const PairKey& key_) {
    if (!valid || gap_ < gap || (gap_ == gap && key_ < key)) {
      gap = gap_;
      key = key_;
      valid = true;
    }
  }
};

void require_covers(const StringProbTable& t, int needed, const char* where) {
  if (t.max_len() < needed)
    throw std::invalid_argument(std::string(where) + ": table shorter than the scan horizon");
}

}  // namespace

UpperCheckResult check_upper(const StringProbTable& table, double k, int L) {
  require_covers(table, L, "check_upper");
  if (L < 2) throw std::invalid_argument("check_upper: horizon must be >= 2");

  std::vector<UpperScanBest> by_la(L);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::int64_t la = 1; la < L; ++la) {
    UpperScanBest best;
    for (std::uint64_t ca = 0; ca < table.pow_alphabet(la); ++ca) {
      const double pa = table.prob(la, ca);
      if (pa <= 0.0) continue;
      for (int lb = 1; lb + la <= L; ++lb) {
        for (std::uint64_t cb = 0; cb < table.pow_alphabet(lb); ++cb) {
          const double pb = table.prob(lb, cb);
          if (pb <= 0.0) continue;
          const double pab = table.prob(la + lb, table.concat_code(ca, cb, lb));
          const double ratio = std::log(pab / (pa * pb));
          best.consider(ratio, {static_cast<int>(la), ca, lb, cb});
        }
      }
    }
    by_la[la] = best;
  }

  UpperScanBest total;
  for (int la = 1; la < L; ++la)
    if (by_la[la].valid) total.consider(by_la[la].ratio, by_la[la].key);

  UpperCheckResult res;
  res.worst_ratio = total.valid ? total.ratio : -kInf;
  res.ok = res.worst_ratio <= k + 1e-9;
  if (total.valid) {
    res.witness_a = {total.key.la, total.key.code_a};
    res.witness_b = {total.key.lb, total.key.code_b};
  }
  return res;
}

UpperCheckResult check_upper(const HmmModel& model, double k, int L) {
  return check_upper(StringProbTable::build(model, L), k, L);
}

LowerCheckResult check_lower(const StringProbTable& table, double k, int tau, int L) {
  if (tau < 0) throw std::invalid_argument("check_lower: tau must be >= 0");
  if (L < 2) throw std::invalid_argument("check_lower: horizon must be >= 2");
  require_covers(table, L + tau, "check_lower");

  std::vector<LowerScanBest> by_la(L);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::int64_t la = 1; la < L; ++la) {
    LowerScanBest best;
    for (std::uint64_t ca = 0; ca < table.pow_alphabet(la); ++ca) {
      const double pa = table.prob(la, ca);
      if (pa <= 0.0) continue;
      for (int lb = 1; lb + la <= L; ++lb) {
        for (std::uint64_t cb = 0; cb < table.pow_alphabet(lb); ++cb) {
          const double pb = table.prob(lb, cb);
          if (pb <= 0.0) continue;
          // best insertion xi over lengths 0..tau
          double p_best = 0.0;
          for (int j = 0; j <= tau; ++j) {
            const std::uint64_t axib_base = table.concat_code(ca, 0, j + lb);
            for (std::uint64_t cxi = 0; cxi < table.pow_alphabet(j); ++cxi) {
              const std::uint64_t code =
                  axib_base + cxi * table.pow_alphabet(lb) + cb;
              p_best = std::max(p_best, table.prob(la + j + lb, code));
            }
          }
          const double gap = p_best > 0.0 ? std::log(p_best / (pa * pb)) : -kInf;
          best.consider(gap, {static_cast<int>(la), ca, lb, cb});
        }
      }
    }
    by_la[la] = best;
  }

  LowerScanBest total;
  for (int la = 1; la < L; ++la)
    if (by_la[la].valid) total.consider(by_la[la].gap, by_la[la].key);

  LowerCheckResult res;
  res.worst_gap = total.valid ? total.gap : kInf;
  res.ok = res.worst_gap >= -k - 1e-9;
  if (total.valid) {
    res.witness_a = {total.key.la, total.key.code_a};
    res.witness_b = {total.key.lb, total.key.code_b};
  }
  return res;
}

LowerCheckResult check_lower(const HmmModel& model, double k, int tau, int L) {
  return check_lower(StringProbTable::build(model, L + tau), k, tau, L);
}

DecouplingCertificate fit_constants(const HmmModel& model, int L, int tau_max) {
  if (tau_max < 0) throw std::invalid_argument("fit_constants: tau_max must be >= 0");
  const StringProbTable table = StringProbTable::build(model, L + tau_max);

  const UpperCheckResult upper = check_upper(table, kInf, L);

  // tau is minimized first (it enters the waiting-time exponent), then k.
  std::optional<LowerCheckResult> lower;
  int tau = 0;
  for (; tau <= tau_max; ++tau) {
    LowerCheckResult r = check_lower(table, kInf, tau, L);
    if (r.worst_gap > -kInf) {
      lower = r;
      break;
    }
  }
  if (!lower)
    throw std::invalid_argument(
        "fit_constants: no insertion length <= " + std::to_string(tau_max) +
        " joins all string pairs (worst upper ratio " + format_value(upper.worst_ratio) + ")");

  const double k_req = std::max({upper.worst_ratio, -lower->worst_gap, 0.0});
  // Smallest multiple of 1e-3 passing both checks (with their 1e-9 slack).
  double k = std::ceil((k_req - 1e-9) * 1000.0) / 1000.0;
  if (k < 0.0 || k_req <= 0.0) k = 0.0;

  DecouplingCertificate cert;
  cert.k = k;
  cert.tau = tau;
  cert.horizon = L;
  cert.worst_upper_ratio = upper.worst_ratio;
  cert.worst_lower_gap = lower->worst_gap;
  cert.upper_ok = upper.worst_ratio <= k + 1e-9;
  cert.lower_ok = lower->worst_gap >= -k - 1e-9;
  return cert;
}

namespace {

nlohmann::json certificate_json(const DecouplingCertificate& c) {
  nlohmann::json j;
  j["k"] = c.k;
  j["tau"] = c.tau;
  j["horizon_L"] = c.horizon;
  j["upper_ok"] = c.upper_ok;
  j["lower_ok"] = c.lower_ok;
  j["worst_upper_ratio"] = format_value(c.worst_upper_ratio);
  j["worst_lower_gap"] = format_value(c.worst_lower_gap);
  j["note"] = "certificate at horizon L; evidence for strings up to length L, not a proof";
  return j;
}

}  // namespace

std::string DecouplingCertificate::to_json() const {
  return certificate_json(*this).dump(2);
}

std::string DecouplingCertificate::to_csv() const {
  std::string out = "k,tau,horizon_L,upper_ok,lower_ok,worst_upper_ratio,worst_lower_gap\n";
  out += format_value(k) + "," + std::to_string(tau) + "," + std::to_string(horizon) + "," +
         (upper_ok ? "1" : "0") + "," + (lower_ok ? "1" : "0") + "," +
         format_value(worst_upper_ratio) + "," + format_value(worst_lower_gap) + "\n";
  return out;
}

TailTable waiting_time_tail_test(const HmmModel& model_x, const SymbolSequence& a,
                                 double k, int tau, const std::vector<std::size_t>& r_grid,
                                 std::size_t trials, std::uint64_t seed) {
  if (a.empty()) throw std::invalid_argument("waiting_time_tail_test: empty string a");
  if (r_grid.empty() || trials == 0)
    throw std::invalid_argument("waiting_time_tail_test: empty grid or zero trials");
  require_same_alphabet(*model_x.alphabet, *a.alphabet, "waiting_time_tail_test");

  const double log_pa = log_marginal(model_x, a);
  if (log_pa == -kInf)
    throw std::invalid_argument("waiting_time_tail_test: P_X[a] = 0, the bound is vacuous");
  const double pa = std::exp(log_pa);

  std::vector<std::size_t> grid = r_grid;
  std::sort(grid.begin(), grid.end());
  if (grid.front() == 0)
    throw std::invalid_argument("waiting_time_tail_test: r values must be >= 1");
  const std::size_t max_r = grid.back();
  const std::size_t len = max_r + a.size();

  // One independent realization per trial; W = max_r + 1 encodes "not seen".
  std::vector<std::size_t> w(trials, 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t) {
    const SymbolSequence x = sample(model_x, len, substream(seed, static_cast<std::uint64_t>(t)));
    const auto hit = waiting_time(a, x);
    w[t] = hit.value_or(max_r + 1);
  }

  TailTable table;
  table.p_a = pa;
  table.trials = trials;
  const double q = 1.0 - std::exp(-k) * pa;
  double prev_bound = kInf;
  for (std::size_t r : grid) {
    TailRow row;
    row.r = r;
    std::size_t count = 0;
    for (std::size_t t = 0; t < trials; ++t)
      if (w[t] > r) ++count;
    row.survival = static_cast<double>(count) / static_cast<double>(trials);
    const auto exponent = static_cast<double>((r - 1) / (a.size() + static_cast<std::size_t>(tau)));
    row.bound = std::pow(q, exponent);
    row.sigma = std::sqrt(std::max(row.bound * (1.0 - row.bound), 0.0) /
                          static_cast<double>(trials));
    row.flagged = row.survival > row.bound + 3.0 * row.sigma;
    if (row.bound > prev_bound + 1e-15)
      throw std::logic_error("waiting_time_tail_test: bound not monotone over the grid");
    prev_bound = row.bound;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace zmest
