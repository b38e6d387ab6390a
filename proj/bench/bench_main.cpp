// Timing comparison of the optimized kernels against their serial
// references. Not part of ctest; run manually:
//   ./build/bench/zmest_bench [max_exponent]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "zmest/estimators.hpp"
#include "zmest/model_io.hpp"
#include "zmest/parse.hpp"
#include "zmest/pressure.hpp"
#include "zmest/reference.hpp"
#include "zmest/rng.hpp"

using namespace zmest;

namespace {

double now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

HmmModel bernoulli_half() {
  auto alpha = Alphabet::create({"0", "1"});
  Matrix r(1, 2, 0.5);
  return HmmModel::create(alpha, {1.0}, Matrix(1, 1, 1.0), r);
}

void bench_parse(int max_exp) {
  std::printf("\n== mZM parse: suffix automaton vs naive scan ==\n");
  std::printf("%10s %14s %14s %10s\n", "N", "automaton(s)", "naive(s)", "speedup");
  const HmmModel m = bernoulli_half();
  for (int e = 8; e <= max_exp; ++e) {
    const std::size_t n = std::size_t{1} << e;
    const SymbolSequence y = sample(m, n, 1);
    const SymbolSequence x = sample(m, n, 2);

    const double t0 = now();
    const ParseResult fast = mzm_parse(y, x);
    const double t1 = now();
    double t_naive = -1.0;
    if (e <= 12) {  // naive is O(N^2)-ish per query; keep it tractable
      const double t2 = now();
      const ParseResult slow = reference::mzm_parse_naive(y, x);
      t_naive = now() - t2;
      if (slow.word_count != fast.word_count) std::printf("  !! mismatch\n");
    }
    if (t_naive >= 0)
      std::printf("%10zu %14.6f %14.6f %9.1fx\n", n, t1 - t0, t_naive,
                  t_naive / (t1 - t0));
    else
      std::printf("%10zu %14.6f %14s %10s\n", n, t1 - t0, "-", "-");
  }
}

void bench_extend(int max_exp) {
  std::printf("\n== incremental extension throughput ==\n");
  const HmmModel m = bernoulli_half();
  const std::size_t n = std::size_t{1} << max_exp;
  const SymbolSequence x = sample(m, n, 3);
  const double tb0 = now();
  const SubstringIndex idx = SubstringIndex::build(x);
  const double tb1 = now();
  std::printf("build %zu symbols: %.3fs (%zu nodes)\n", n, tb1 - tb0, idx.node_count());

  Rng rng(4);
  auto st = idx.root_state();
  std::size_t found = 0;
  const double t0 = now();
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = idx.extend(st, static_cast<Symbol>(rng.next_u64() & 1));
    if (r.found) {
      st = r.state;
      ++found;
    } else {
      st = idx.root_state();
    }
  }
  const double t1 = now();
  std::printf("%zu random extensions: %.3fs (%.1f ns/op, %zu found)\n", n, t1 - t0,
              (t1 - t0) / n * 1e9, found);
}

void bench_pressure() {
  std::printf("\n== pressure enumeration: parallel vs single thread vs naive ==\n");
  const HmmModel mx = bernoulli_half();
  auto alpha = mx.alphabet;
  Matrix p = Matrix::from_rows({{0.9, 0.1}, {0.2, 0.8}});
  Matrix rx = Matrix::from_rows({{0.7, 0.3}, {0.1, 0.9}});
  Matrix ry = Matrix::from_rows({{0.85, 0.15}, {0.25, 0.75}});
  const HmmModel hx = HmmModel::create(alpha, stationary_distribution(p), p, rx);
  const HmmModel hy = HmmModel::create(alpha, stationary_distribution(p), p, ry);

  for (int ell : {12, 16, 20}) {
    const double t0 = now();
    const double q_par = q_ell(hx, hy, ell, -1.0);
    const double t1 = now();
#ifdef _OPENMP
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
#endif
    const double t2 = now();
    const double q_ser = q_ell(hx, hy, ell, -1.0);
    const double t3 = now();
#ifdef _OPENMP
    omp_set_num_threads(saved);
#endif
    double t_naive = -1.0;
    if (ell <= 12) {
      const double t4 = now();
      (void)reference::q_ell_naive(hx, hy, ell, -1.0);
      t_naive = now() - t4;
    }
    std::printf("ell=%2d: parallel %.4fs, 1-thread %.4fs", ell, t1 - t0, t3 - t2);
    if (t_naive >= 0) std::printf(", naive %.4fs", t_naive);
    std::printf("  (bit-identical: %s)\n", q_par == q_ser ? "yes" : "NO");
  }
}

void bench_sample(int max_exp) {
  std::printf("\n== sampling throughput ==\n");
  const HmmModel m = bernoulli_half();
  const std::size_t n = std::size_t{1} << max_exp;
  const double t0 = now();
  const SymbolSequence s = sample(m, n, 5);
  const double t1 = now();
  std::printf("%zu symbols in %.3fs (%.1f ns/symbol)\n", s.size(), t1 - t0,
              (t1 - t0) / n * 1e9);
}

}  // namespace

int main(int argc, char** argv) {
  const int max_exp = argc > 1 ? std::atoi(argv[1]) : 20;
#ifdef _OPENMP
  std::printf("OpenMP: up to %d threads\n", omp_get_max_threads());
#else
  std::printf("OpenMP: not enabled\n");
#endif
  bench_parse(max_exp);
  bench_extend(max_exp);
  bench_pressure();
  bench_sample(max_exp);
  return 0;
}
