#include "zmest/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "zmest/model_io.hpp"
#include "zmest/rng.hpp"
#include "zmest/svg_plot.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace zmest {

std::vector<std::size_t> ExperimentConfig::default_grid() {
  std::vector<std::size_t> g;
  for (int e = 10; e <= 17; ++e) g.push_back(std::size_t{1} << e);
  return g;
}

double ExperimentResult::value(std::size_t r, std::size_t g, Estimator est) const {
  const PointEstimates& p = points[r][g];
  switch (est) {
    case Estimator::mZM: return p.mzm;
    case Estimator::ZM: return p.zm;
    case Estimator::LM: return p.lm;
    case Estimator::LZ78: return p.lz78;
    case Estimator::KL: return p.kl;
  }
  return 0.0;
}

double ExperimentResult::rmse(std::size_t g, Estimator est) const {
  double acc = 0.0;
  for (std::size_t r = 0; r < points.size(); ++r) {
    const double d = value(r, g, est) - reference;
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(points.size()));
}

double ExperimentResult::mean(std::size_t g, Estimator est) const {
  double acc = 0.0;
  for (std::size_t r = 0; r < points.size(); ++r) acc += value(r, g, est);
  return acc / static_cast<double>(points.size());
}

double ExperimentResult::max_word_ratio(std::size_t g) const {
  double worst = 0.0;
  for (const auto& row : points)
    worst = std::max(worst, static_cast<double>(row[g].max_mzm_word));
  return worst / std::log(static_cast<double>(config.grid[g]));
}

double ExperimentResult::mean_word_ratio(std::size_t g) const {
  double acc = 0.0;
  for (const auto& row : points) acc += static_cast<double>(row[g].max_mzm_word);
  return acc / static_cast<double>(points.size()) /
         std::log(static_cast<double>(config.grid[g]));
}

ExperimentResult run_experiment(const HmmModel& model_x, const HmmModel& model_y,
                                const ExperimentConfig& config) {
  if (config.grid.empty()) throw std::invalid_argument("experiment: empty grid");
  if (!std::is_sorted(config.grid.begin(), config.grid.end()) ||
      std::adjacent_find(config.grid.begin(), config.grid.end()) != config.grid.end())
    throw std::invalid_argument("experiment: grid must be strictly increasing");
  if (config.realizations < 1)
    throw std::invalid_argument("experiment: need at least one realization");
  if (config.reference_n < config.grid.back())
    throw std::invalid_argument("experiment: reference_n must be >= max(grid)");
  require_same_alphabet(*model_x.alphabet, *model_y.alphabet, "experiment");

  ExperimentResult result;
  result.config = config;
  result.reference = cross_entropy_mc(model_x, model_y, config.reference_n, config.seed);

  const std::size_t n_max = config.grid.back();
  const auto R = static_cast<std::size_t>(config.realizations);
  result.points.assign(R, {});

#ifdef _OPENMP
  const int jobs = config.jobs > 0 ? config.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
#endif
  for (std::int64_t r = 0; r < static_cast<std::int64_t>(R); ++r) {
    const std::uint64_t rseed = config.seed + static_cast<std::uint64_t>(r) + 1;
    const SymbolSequence y = sample(model_y, n_max, substream(rseed, 1));
    const SymbolSequence x = sample(model_x, n_max, substream(rseed, 2));
    std::vector<PointEstimates> row;
    row.reserve(config.grid.size());
    for (std::size_t n : config.grid)
      row.push_back(evaluate_point(y.prefix(n), x.prefix(n)));
    result.points[r] = std::move(row);
  }
  return result;
}

std::string trace_csv(const ExperimentResult& r) {
  std::ostringstream os;
  os << "estimator,N,value\n";
  for (Estimator est : r.config.estimators)
    for (std::size_t g = 0; g < r.config.grid.size(); ++g)
      os << to_string(est) << "," << r.config.grid[g] << ","
         << format_value(r.value(0, g, est)) << "\n";
  return os.str();
}

std::string rmse_csv(const ExperimentResult& r) {
  std::ostringstream os;
  os << "estimator,N,rmse,mean\n";
  for (Estimator est : r.config.estimators)
    for (std::size_t g = 0; g < r.config.grid.size(); ++g)
      os << to_string(est) << "," << r.config.grid[g] << ","
         << format_value(r.rmse(g, est)) << "," << format_value(r.mean(g, est)) << "\n";
  return os.str();
}

std::string wordlens_csv(const ExperimentResult& r) {
  std::ostringstream os;
  os << "realization,N,max_mzm_word,ratio\n";
  for (std::size_t i = 0; i < r.points.size(); ++i)
    for (std::size_t g = 0; g < r.config.grid.size(); ++g) {
      const double ratio = static_cast<double>(r.points[i][g].max_mzm_word) /
                           std::log(static_cast<double>(r.config.grid[g]));
      os << (i + 1) << "," << r.config.grid[g] << "," << r.points[i][g].max_mzm_word << ","
         << format_value(ratio) << "\n";
    }
  return os.str();
}

std::string reference_csv(const ExperimentResult& r) {
  std::ostringstream os;
  os << "reference_n,seed,value\n";
  os << r.config.reference_n << "," << r.config.seed << "," << format_value(r.reference)
     << "\n";
  return os.str();
}

std::string trace_svg(const ExperimentResult& r) {
  SvgPlot plot("Estimator traces (single realization)", "N", "estimate (nats/symbol)");
  plot.set_log_x(true);
  std::vector<double> xs(r.config.grid.begin(), r.config.grid.end());
  for (Estimator est : r.config.estimators) {
    std::vector<double> ys;
    for (std::size_t g = 0; g < r.config.grid.size(); ++g) ys.push_back(r.value(0, g, est));
    plot.add_series(to_string(est), xs, std::move(ys));
  }
  plot.add_hline("reference", r.reference);
  return plot.render();
}

std::string rmse_svg(const ExperimentResult& r) {
  SvgPlot plot("RMSE vs N (" + std::to_string(r.points.size()) + " realizations)", "N",
               "RMSE");
  plot.set_log_x(true);
  plot.set_log_y(true);
  std::vector<double> xs(r.config.grid.begin(), r.config.grid.end());
  for (Estimator est : r.config.estimators) {
    std::vector<double> ys;
    for (std::size_t g = 0; g < r.config.grid.size(); ++g) ys.push_back(r.rmse(g, est));
    plot.add_series(to_string(est), xs, std::move(ys));
  }
  return plot.render();
}

void write_experiment_outputs(const ExperimentResult& r, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  write_file((dir / "trace.csv").string(), trace_csv(r));
  write_file((dir / "rmse.csv").string(), rmse_csv(r));
  write_file((dir / "wordlens.csv").string(), wordlens_csv(r));
  write_file((dir / "reference.csv").string(), reference_csv(r));
  write_file((dir / "trace.svg").string(), trace_svg(r));
  write_file((dir / "rmse.svg").string(), rmse_svg(r));
}

}  // namespace zmest
