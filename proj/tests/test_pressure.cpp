#include <doctest.h>

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "helpers.hpp"
#include "zmest/decoupling.hpp"
#include "zmest/pressure.hpp"
#include "zmest/reference.hpp"

using namespace zmest;
using namespace zmest::test;

namespace {
const double kLn2 = std::log(2.0);
}

TEST_CASE("q_ell(0) vanishes for every valid pair") {
  const HmmModel mx = figure2_x();
  const HmmModel my = figure2_y();
  for (int ell : {1, 3, 7, 12})
    CHECK(std::abs(q_ell(mx, my, ell, 0.0)) < 1e-12);
  const HmmModel u = iid_model({0.5, 0.5});
  CHECK(std::abs(q_ell(u, u, 12, 0.0)) < 1e-12);
}

TEST_CASE("uniform i.i.d. pair closed forms") {
  const HmmModel u = iid_model({0.5, 0.5});
  // alpha = -1, ell = 3: ln sum over 8 strings of 2^-3 * 2^-3
  CHECK(q_ell(u, u, 3, -1.0) == doctest::Approx(-3 * kLn2).epsilon(1e-14));
  // P_X[a]^{-alpha} = 2^{alpha*ell}: at alpha = 0.5, ell = 4 the sum is 2 ln 2
  CHECK(q_ell(u, u, 4, 0.5) == doctest::Approx(2 * kLn2).epsilon(1e-14));
  // no ell dependence per symbol
  const PressureRow row = pressure_per_symbol(u, u, -1.0, {1, 2, 4, 8});
  for (double v : row.per_symbol) CHECK(v == doctest::Approx(-kLn2).epsilon(1e-13));
  CHECK(row.drift < 1e-13);
}

TEST_CASE("q_ell agrees with the string-enumeration reference") {
  Rng rng(4242);
  const HmmModel mx = random_model(rng, 2, 2);
  const HmmModel my = random_model(rng, 2, 2);
  for (double alpha : {-1.5, -1.0, -0.3, 0.0, 0.7})
    for (int ell : {1, 2, 5, 9}) {
      const double fast = q_ell(mx, my, ell, alpha);
      const double slow = reference::q_ell_naive(mx, my, ell, alpha);
      CHECK(fast == doctest::Approx(slow).epsilon(1e-10));
    }
}

TEST_CASE("q_ell support conventions") {
  // model_x cannot emit '1'; model_y can.
  const HmmModel mx = iid_model({1.0, 0.0});
  const HmmModel my = iid_model({0.5, 0.5});
  CHECK(q_ell(mx, my, 4, 0.5) == kInf);    // positive alpha blows up
  CHECK(std::abs(q_ell(mx, my, 4, 0.0)) < 1e-12);
  // negative alpha: only the all-zero string survives, P_Y = 2^-4
  CHECK(q_ell(mx, my, 4, -1.0) == doctest::Approx(-4 * kLn2).epsilon(1e-12));
}

TEST_CASE("budget is enforced") {
  const HmmModel u = iid_model({0.5, 0.5});
  CHECK_THROWS_AS(q_ell(u, u, 25, -1.0), budget_error);
}

TEST_CASE("pressure matches the transfer-matrix oracle for chain pairs") {
  const Matrix py = markov_py();
  const Matrix px = markov_px();
  const HmmModel my = chain_model(py);
  const HmmModel mx = chain_model(px);
  for (double alpha : {-1.0, -0.5}) {
    const double lnrho = std::log(spectral_radius(transfer_matrix(py, px, alpha)));
    const double q16 = q_ell(mx, my, 16, alpha) / 16.0;
    const double q8 = q_ell(mx, my, 8, alpha) / 8.0;
    CHECK(std::abs(q16 - lnrho) / std::abs(lnrho) < 0.01);
    // geometric drift: the longer horizon is strictly closer
    CHECK(std::abs(q16 - lnrho) < std::abs(q8 - lnrho));
  }
}

TEST_CASE("pressure rows are convex and nondecreasing in alpha") {
  const HmmModel mx = figure2_x();
  const HmmModel my = figure2_y();
  const int ell = 8;
  std::vector<double> alphas, values;
  for (double a = -2.0; a <= 0.0 + 1e-9; a += 0.25) {
    alphas.push_back(a);
    values.push_back(q_ell(mx, my, ell, a));
  }
  for (std::size_t i = 0; i + 2 < values.size(); ++i) {
    const double s1 = (values[i + 1] - values[i]) / (alphas[i + 1] - alphas[i]);
    const double s2 = (values[i + 2] - values[i + 1]) / (alphas[i + 2] - alphas[i + 1]);
    CHECK(s1 <= s2 + 1e-9);  // slopes nondecreasing
  }
  for (std::size_t i = 0; i + 1 < values.size(); ++i)
    CHECK(values[i] <= values[i + 1] + 1e-9);  // monotone (log-sum in alpha)
}

TEST_CASE("subadditivity with the decoupling constants of both laws") {
  const HmmModel mx = figure2_x();
  const HmmModel my = figure2_y();
  const double k_x = fit_constants(mx, 8, 2).k;
  const double k_y = fit_constants(my, 8, 2).k;
  for (int ell : {2, 4, 6, 8})
    for (int m : {2, 4, 8}) {
      const double lhs = q_ell(mx, my, ell + m, -1.0);
      const double rhs = q_ell(mx, my, ell, -1.0) + q_ell(mx, my, m, -1.0) + k_x + k_y;
      CHECK(lhs <= rhs + 1e-9);
    }
}

TEST_CASE("nondegeneracy verdicts") {
  const HmmModel u = iid_model({0.5, 0.5});
  const NondegeneracyResult nd = nondegeneracy(u, u, 10);
  CHECK(nd.per_symbol == doctest::Approx(-kLn2).epsilon(1e-12));
  CHECK(nd.nondegenerate);

  const HmmModel det = iid_model({1.0, 0.0});
  const NondegeneracyResult nd2 = nondegeneracy(det, det, 10);
  CHECK(nd2.per_symbol == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_FALSE(nd2.nondegenerate);

  // committed experiment pair: strictly negative (frozen via enumeration)
  const NondegeneracyResult nd3 = nondegeneracy(figure2_x(), figure2_y(), 12);
  CHECK(nd3.per_symbol == doctest::Approx(-0.6054015586967851).epsilon(1e-9));
  CHECK(nd3.nondegenerate);
}

TEST_CASE("left_derivative_estimate closed forms") {
  // i.i.d. pair Bern(0.5) under Bern(0.3): secant of the closed-form
  // pressure ln(0.5*0.3^-a + 0.5*0.7^-a); at h = 0.01 within 0.005 of the
  // analytic cross entropy.
  const HmmModel mx = iid_model({0.3, 0.7});
  const HmmModel my = iid_model({0.5, 0.5});
  const double target = 0.7803238741323343;
  for (int ell : {4, 10}) {
    const double est = left_derivative_estimate(mx, my, 0.01, ell);
    CHECK(std::abs(est - target) < 0.005);
    const double closed = -std::log(0.5 * std::pow(0.3, 0.01) + 0.5 * std::pow(0.7, 0.01)) / 0.01;
    CHECK(est == doctest::Approx(closed).epsilon(1e-10));
  }

  // identical uniform sources: the pressure is linear, every secant is ln 2
  const HmmModel u = iid_model({0.5, 0.5});
  for (double h : {0.01, 0.1, 1.0})
    CHECK(left_derivative_estimate(u, u, h, 6) == doctest::Approx(kLn2).epsilon(1e-12));

  // chain pair: within 5% of the analytic cross entropy
  const HmmModel my_c = chain_model(markov_py());
  const HmmModel mx_c = chain_model(markov_px());
  const double analytic = analytic_cross_entropy_markov(
      my_c.pi, markov_py(), mx_c.pi, markov_px());
  const double est = left_derivative_estimate(mx_c, my_c, 0.01, 14);
  CHECK(std::abs(est - analytic) / analytic < 0.05);
}

TEST_CASE("secant estimates are nonincreasing in h for convex pressure") {
  // Convexity makes the secant slope -q(-h)/h grow toward the left
  // derivative as h shrinks, so larger h never gives a larger estimate.
  const HmmModel mx = iid_model({0.3, 0.7});
  const HmmModel my = iid_model({0.5, 0.5});
  double prev = kInf;
  for (double h : {0.01, 0.1, 0.5, 1.0}) {
    const double est = left_derivative_estimate(mx, my, h, 6);
    CHECK(est <= prev + 1e-12);
    prev = est;
  }
}

#ifdef _OPENMP
TEST_CASE("q_ell is bit-identical across thread counts") {
  const HmmModel mx = figure2_x();
  const HmmModel my = figure2_y();
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const double serial = q_ell(mx, my, 12, -0.7);
  omp_set_num_threads(std::max(4, saved));
  const double parallel = q_ell(mx, my, 12, -0.7);
  omp_set_num_threads(saved);
  CHECK(serial == parallel);
}
#endif
