#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "zmest/decoupling.hpp"

using namespace zmest;
using namespace zmest::test;

namespace {
const double kLn2 = std::log(2.0);

// Independent route to the same ratios: three scaled-forward evaluations.
double ratio_via_log_marginal(const HmmModel& m, const SymbolSequence& a,
                              const SymbolSequence& b) {
  std::vector<Symbol> ab = a.data;
  ab.insert(ab.end(), b.data.begin(), b.data.end());
  return log_marginal(m, {a.alphabet, ab}) - log_marginal(m, a) - log_marginal(m, b);
}

}  // namespace

TEST_CASE("product models have exactly zero decoupling statistics") {
  for (auto probs : {std::vector<double>{0.5, 0.5}, std::vector<double>{0.25, 0.75}}) {
    const HmmModel m = iid_model(probs);
    for (int L : {4, 8, 12}) {
      const UpperCheckResult up = check_upper(m, 0.0, L);
      CHECK(up.ok);
      CHECK(up.worst_ratio == 0.0);
      const LowerCheckResult lo = check_lower(m, 0.0, 0, L);
      CHECK(lo.ok);
      CHECK(lo.worst_gap == 0.0);
    }
  }
}

TEST_CASE("chain closed forms: worst ratios are boundary terms") {
  // For an observed chain, P[ab]/(P[a]P[b]) = P(last(a), first(b)) / pi(first(b)),
  // so the extremes over any horizon are max/min over transitions.
  const Matrix p = Matrix::from_rows({{0.9, 0.1}, {0.2, 0.8}});
  const HmmModel m = chain_model(p);

  const UpperCheckResult up = check_upper(m, std::log(2.4), 8);
  CHECK(up.ok);
  CHECK(up.worst_ratio == doctest::Approx(std::log(2.4)).epsilon(1e-12));
  CHECK_FALSE(check_upper(m, 0.0, 8).ok);

  const LowerCheckResult lo = check_lower(m, -std::log(0.3), 0, 8);
  CHECK(lo.ok);
  CHECK(lo.worst_gap == doctest::Approx(std::log(0.3)).epsilon(1e-12));
}

TEST_CASE("periodic chain needs one insertion symbol") {
  const HmmModel m = chain_model(Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}));
  const LowerCheckResult lo0 = check_lower(m, 1000.0, 0, 6);
  CHECK_FALSE(lo0.ok);
  CHECK(lo0.worst_gap == -kInf);

  const LowerCheckResult lo1 = check_lower(m, kLn2, 1, 6);
  CHECK(lo1.ok);

  const DecouplingCertificate cert = fit_constants(m, 6, 4);
  CHECK(cert.tau == 1);
  CHECK(cert.k == doctest::Approx(kLn2).epsilon(2e-3));
}

TEST_CASE("fit_constants examples") {
  const DecouplingCertificate iid = fit_constants(iid_model({0.5, 0.5}), 8, 4);
  CHECK(iid.k == 0.0);
  CHECK(iid.tau == 0);
  CHECK(iid.upper_ok);
  CHECK(iid.lower_ok);

  const HmmModel m = chain_model(Matrix::from_rows({{0.9, 0.1}, {0.2, 0.8}}));
  const DecouplingCertificate cert = fit_constants(m, 10, 4);
  CHECK(cert.tau == 0);
  CHECK(std::abs(cert.k - std::max(std::log(2.4), -std::log(0.3))) <= 1e-3);
}

TEST_CASE("fitted k is monotone in the horizon") {
  const HmmModel m = chain_model(Matrix::from_rows({{0.9, 0.1}, {0.2, 0.8}}));
  double prev = -1.0;
  for (int L : {6, 8, 10}) {
    const DecouplingCertificate cert = fit_constants(m, L, 2);
    CHECK(cert.k >= prev);
    prev = cert.k;
  }
}

TEST_CASE("table ratios agree with the scaled-forward route") {
  Rng rng(1357);
  const HmmModel m = random_model(rng, 2, 2);
  const StringProbTable table = StringProbTable::build(m, 8);
  AlphabetPtr alpha = m.alphabet;
  for (int t = 0; t < 50; ++t) {
    const std::size_t la = 1 + rng.next_u64() % 4;
    const std::size_t lb = 1 + rng.next_u64() % 4;
    const SymbolSequence a = random_sequence(rng, alpha, la);
    const SymbolSequence b = random_sequence(rng, alpha, lb);
    std::uint64_t ca = 0, cb = 0;
    for (Symbol c : a.data) ca = ca * 2 + c;
    for (Symbol c : b.data) cb = cb * 2 + c;
    const double table_ratio =
        std::log(table.prob(la + lb, table.concat_code(ca, cb, lb)) /
                 (table.prob(la, ca) * table.prob(lb, cb)));
    CHECK(table_ratio == doctest::Approx(ratio_via_log_marginal(m, a, b)).epsilon(1e-11));
  }
}

TEST_CASE("check_lower explores insertions up to tau") {
  // On the periodic chain a one-symbol insertion realigns parity and
  // achieves P[a xi b] = 2 P[a] P[b].
  const HmmModel m = chain_model(Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}));
  const LowerCheckResult lo = check_lower(m, 0.0, 1, 4);
  CHECK(lo.worst_gap == doctest::Approx(kLn2).epsilon(1e-12));
}

TEST_CASE("budget guard") {
  const HmmModel m = iid_model({0.5, 0.5});
  CHECK_THROWS_AS(StringProbTable::build(m, 30), budget_error);
}

TEST_CASE("waiting-time tail bound: uniform i.i.d. case") {
  const HmmModel m = iid_model({0.5, 0.5});
  AlphabetPtr alpha = m.alphabet;
  const SymbolSequence a = seq(alpha, "01");
  const TailTable tab = waiting_time_tail_test(m, a, 0.0, 0, {1, 10, 20, 50}, 1000, 99);

  CHECK(tab.p_a == doctest::Approx(0.25).epsilon(1e-12));
  REQUIRE(tab.rows.size() == 4);
  // r = 1: floor term 0, vacuous bound 1
  CHECK(tab.rows[0].bound == 1.0);
  CHECK_FALSE(tab.rows[0].flagged);
  CHECK(tab.rows[1].bound == doctest::Approx(std::pow(0.75, 4)).epsilon(1e-12));
  CHECK(tab.rows[3].bound == doctest::Approx(std::pow(0.75, 24)).epsilon(1e-12));
  double prev = kInf;
  for (const TailRow& row : tab.rows) {
    CHECK_FALSE(row.flagged);
    CHECK(row.bound <= prev);
    prev = row.bound;
  }
}

TEST_CASE("waiting-time tail test rejects unsupported strings") {
  const HmmModel m = iid_model({1.0, 0.0});
  AlphabetPtr alpha = m.alphabet;
  CHECK_THROWS_AS(waiting_time_tail_test(m, seq(alpha, "1"), 0.0, 0, {10}, 100, 1),
                  std::invalid_argument);
}

TEST_CASE("certificate serialization carries the horizon caveat") {
  const DecouplingCertificate cert = fit_constants(iid_model({0.5, 0.5}), 6, 2);
  const std::string js = cert.to_json();
  CHECK(js.find("\"k\"") != std::string::npos);
  CHECK(js.find("horizon") != std::string::npos);
  const std::string csv = cert.to_csv();
  CHECK(csv.rfind("k,tau,horizon_L", 0) == 0);
}
