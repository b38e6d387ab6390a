#include "zmest/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "zmest/rng.hpp"

namespace zmest {

const char* to_string(Estimator e) {
  switch (e) {
    case Estimator::mZM: return "mZM";
    case Estimator::ZM: return "ZM";
    case Estimator::LM: return "LM";
    case Estimator::LZ78: return "LZ78";
    case Estimator::KL: return "KL";
  }
  return "?";
}

Estimator estimator_from_string(const std::string& name) {
  if (name == "mZM") return Estimator::mZM;
  if (name == "ZM") return Estimator::ZM;
  if (name == "LM") return Estimator::LM;
  if (name == "LZ78") return Estimator::LZ78;
  if (name == "KL") return Estimator::KL;
  throw std::invalid_argument("unknown estimator '" + name + "'");
}

namespace {

void require_min_length(const SymbolSequence& y, const char* where) {
  if (y.size() < 2)
    throw std::invalid_argument(std::string(where) + ": N must be >= 2");
}

double mzm_rate(std::uint64_t c, std::size_t n) {
  if (c == n) return kInf;
  return static_cast<double>(c) * std::log(static_cast<double>(n)) /
         static_cast<double>(n - c);
}

double zm_rate(std::uint64_t c, std::size_t n) {
  return static_cast<double>(c) * std::log(static_cast<double>(n)) /
         static_cast<double>(n);
}

double lm_rate(std::size_t lambda, std::size_t n) {
  if (lambda == 0) return kInf;
  return std::log(static_cast<double>(n)) / static_cast<double>(lambda);
}

double lz78_rate(std::uint64_t c, std::size_t n) {
  if (c <= 1) return 0.0;
  return static_cast<double>(c) * std::log(static_cast<double>(c)) /
         static_cast<double>(n);
}

double kl_rate(double mzm, double lz78) {
  if (mzm == kInf) return kInf;
  return mzm - lz78;
}

}  // namespace

double q_mzm(const SymbolSequence& y, const SymbolSequence& x) {
  require_min_length(y, "q_mzm");
  return mzm_rate(mzm_parse(y, x).word_count, y.size());
}

double q_zm(const SymbolSequence& y, const SymbolSequence& x) {
  require_min_length(y, "q_zm");
  return zm_rate(zm_parse(y, x).word_count, y.size());
}

double q_lm(const SymbolSequence& y, const SymbolSequence& x) {
  require_min_length(y, "q_lm");
  if (x.size() < y.size())
    throw std::invalid_argument("q_lm: database must be at least as long as y");
  return lm_rate(longest_match(y, x, y.size()), y.size());
}

double h_lz78(const SymbolSequence& y) {
  require_min_length(y, "h_lz78");
  return lz78_rate(lz78_parse(y).word_count, y.size());
}

double d_kl(const SymbolSequence& y, const SymbolSequence& x) {
  require_min_length(y, "d_kl");
  return kl_rate(q_mzm(y, x), h_lz78(y));
}

PointEstimates evaluate_point(const SymbolSequence& y, const SymbolSequence& x) {
  require_min_length(y, "evaluate_point");
  if (y.size() != x.size())
    throw std::invalid_argument("evaluate_point: sequences must have equal length");
  const std::size_t n = y.size();
  const SubstringIndex index = SubstringIndex::build(x);

  PointEstimates out;
  const ParseResult pm = mzm_parse(y, index);
  const ParseResult pz = zm_parse(y, index);
  const ParseResult pl = lz78_parse(y);
  out.c_mzm = pm.word_count;
  out.c_zm = pz.word_count;
  out.c_lz78 = pl.word_count;
  out.lambda = longest_match(y, index);
  out.max_mzm_word = pm.max_word_length();
  out.mzm = mzm_rate(out.c_mzm, n);
  out.zm = zm_rate(out.c_zm, n);
  out.lm = lm_rate(out.lambda, n);
  out.lz78 = lz78_rate(out.c_lz78, n);
  out.kl = kl_rate(out.mzm, out.lz78);
  return out;
}

EstimateTrace trace(const HmmModel& model_y, const HmmModel& model_x,
                    std::span<const std::size_t> grid, Estimator tag,
                    std::uint64_t seed) {
  if (grid.empty()) throw std::invalid_argument("trace: empty grid");
  if (!std::is_sorted(grid.begin(), grid.end()) ||
      std::adjacent_find(grid.begin(), grid.end()) != grid.end())
    throw std::invalid_argument("trace: grid must be strictly increasing");
  require_same_alphabet(*model_y.alphabet, *model_x.alphabet, "trace");

  const std::size_t n_max = grid.back();
  const SymbolSequence y = sample(model_y, n_max, substream(seed, 1));
  const SymbolSequence x = sample(model_x, n_max, substream(seed, 2));

  EstimateTrace tr;
  tr.tag = tag;
  tr.grid.assign(grid.begin(), grid.end());
  tr.values.reserve(grid.size());
  for (std::size_t n : grid) {
    const PointEstimates p = evaluate_point(y.prefix(n), x.prefix(n));
    switch (tag) {
      case Estimator::mZM: tr.values.push_back(p.mzm); break;
      case Estimator::ZM: tr.values.push_back(p.zm); break;
      case Estimator::LM: tr.values.push_back(p.lm); break;
      case Estimator::LZ78: tr.values.push_back(p.lz78); break;
      case Estimator::KL: tr.values.push_back(p.kl); break;
    }
  }
  return tr;
}

}  // namespace zmest
