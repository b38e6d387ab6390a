#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "zmest/hmm.hpp"
#include "zmest/model_io.hpp"
#include "zmest/rng.hpp"

namespace zmest::test {

inline AlphabetPtr letters(std::size_t k) {
  static const char* names[] = {"a", "b", "c", "d", "e", "f"};
  std::vector<std::string> syms(names, names + k);
  return Alphabet::create(std::move(syms));
}

inline AlphabetPtr binary_digits() { return Alphabet::create({"0", "1"}); }

inline SymbolSequence seq(const AlphabetPtr& alpha, std::string_view text) {
  return SymbolSequence::from_chars(alpha, text);
}

// Single-state model emitting i.i.d. symbols with the given probabilities.
inline HmmModel iid_model(std::vector<double> probs, AlphabetPtr alpha = nullptr) {
  if (!alpha) alpha = probs.size() == 2 ? binary_digits() : letters(probs.size());
  Matrix r(1, probs.size());
  for (std::size_t j = 0; j < probs.size(); ++j) r(0, j) = probs[j];
  return HmmModel::create(std::move(alpha), {1.0}, Matrix(1, 1, 1.0), std::move(r));
}

// Markov chain observed directly: states = symbols, R = identity.
inline HmmModel chain_model(const Matrix& P, AlphabetPtr alpha = nullptr) {
  const std::size_t n = P.rows();
  if (!alpha) alpha = n == 2 ? binary_digits() : letters(n);
  Matrix r(n, n, 0.0);
  for (std::size_t s = 0; s < n; ++s) r(s, s) = 1.0;
  return HmmModel::create(std::move(alpha), stationary_distribution(P), P, std::move(r));
}

// Random all-positive model (automatically irreducible and nondegenerate).
inline HmmModel random_model(Rng& rng, std::size_t states, std::size_t symbols) {
  auto random_row = [&](std::size_t len) {
    std::vector<double> row(len);
    double sum = 0.0;
    for (auto& v : row) {
      v = 0.05 + rng.next_double();
      sum += v;
    }
    for (auto& v : row) v /= sum;
    return row;
  };
  Matrix p(states, states), r(states, symbols);
  for (std::size_t s = 0; s < states; ++s) {
    const auto pr = random_row(states);
    const auto rr = random_row(symbols);
    for (std::size_t t = 0; t < states; ++t) p(s, t) = pr[t];
    for (std::size_t a = 0; a < symbols; ++a) r(s, a) = rr[a];
  }
  auto alpha = symbols == 2 ? binary_digits() : letters(symbols);
  auto pi = stationary_distribution(p);
  return HmmModel::create(std::move(alpha), std::move(pi), std::move(p), std::move(r));
}

inline SymbolSequence random_sequence(Rng& rng, const AlphabetPtr& alpha, std::size_t n) {
  std::vector<Symbol> data(n);
  for (auto& s : data)
    s = static_cast<Symbol>(rng.next_u64() % alpha->size());
  return {alpha, std::move(data)};
}

inline std::string models_dir() {
#ifdef ZMEST_MODELS_DIR
  return ZMEST_MODELS_DIR;
#else
  return "models";
#endif
}

inline HmmModel figure2_x() { return load_model(models_dir() + "/figure2_x.json").first; }
inline HmmModel figure2_y() { return load_model(models_dir() + "/figure2_y.json").first; }

// Committed Markov pair for the transfer-matrix and left-derivative
// checks; chosen all-positive and fast-mixing.
inline Matrix markov_py() { return Matrix::from_rows({{0.5, 0.5}, {0.55, 0.45}}); }
inline Matrix markov_px() { return Matrix::from_rows({{0.6, 0.4}, {0.65, 0.35}}); }

// Spectral radius of a nonnegative primitive matrix by power iteration.
inline double spectral_radius(const Matrix& m) {
  const std::size_t n = m.rows();
  std::vector<double> v(n, 1.0), w(n, 0.0);
  for (int it = 0; it < 20000; ++it) {
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += m(i, j) * v[j];
      w[i] = acc;
      norm += acc * acc;
    }
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
  }
  // one Rayleigh step for the final value
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += m(i, j) * v[j];
    num += v[i] * acc;
    den += v[i] * v[i];
  }
  return num / den;
}

// Transfer matrix M(alpha)_{s,t} = P_y(s,t) * P_x(s,t)^(-alpha) whose
// spectral radius gives the asymptotic pressure of a chain pair.
inline Matrix transfer_matrix(const Matrix& py, const Matrix& px, double alpha) {
  Matrix m(py.rows(), py.cols());
  for (std::size_t s = 0; s < py.rows(); ++s)
    for (std::size_t t = 0; t < py.cols(); ++t)
      m(s, t) = py(s, t) * std::pow(px(s, t), -alpha);
  return m;
}

}  // namespace zmest::test
