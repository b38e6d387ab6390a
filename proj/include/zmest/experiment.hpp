#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zmest/estimators.hpp"

namespace zmest {

// Convergence / RMSE experiment over independent realization pairs.
// Realization r draws its sequences from substreams of seed base+r; the
// reference value is a Monte Carlo cross entropy at reference_n computed
// once from the base seed itself, which no realization reuses.
struct ExperimentConfig {
  std::vector<std::size_t> grid;  // strictly increasing prefix lengths
  int realizations = 32;
  std::size_t reference_n = std::size_t{1} << 20;
  std::vector<Estimator> estimators = {Estimator::mZM, Estimator::ZM, Estimator::LM,
                                       Estimator::LZ78, Estimator::KL};
  std::uint64_t seed = 0;
  int jobs = 0;  // OpenMP worker cap; 0 = runtime default

  static std::vector<std::size_t> default_grid();  // 2^10 .. 2^17
};

struct ExperimentResult {
  ExperimentConfig config;
  double reference = 0.0;
  // points[r][g]: estimates of realization r at grid[g].
  std::vector<std::vector<PointEstimates>> points;

  double value(std::size_t realization, std::size_t grid_index, Estimator est) const;
  double rmse(std::size_t grid_index, Estimator est) const;
  double mean(std::size_t grid_index, Estimator est) const;

  // Largest mZM word length over the realizations at one grid point,
  // divided by ln N; the boundedness statistic for parse word lengths.
  double max_word_ratio(std::size_t grid_index) const;
  double mean_word_ratio(std::size_t grid_index) const;
};

ExperimentResult run_experiment(const HmmModel& model_x, const HmmModel& model_y,
                                const ExperimentConfig& config);

// CSV renderings with pinned headers (documented in the README).
std::string trace_csv(const ExperimentResult& r);      // estimator,N,value
std::string rmse_csv(const ExperimentResult& r);       // estimator,N,rmse,mean
std::string wordlens_csv(const ExperimentResult& r);   // realization,N,max_mzm_word,ratio
std::string reference_csv(const ExperimentResult& r);  // reference_n,seed,value

std::string trace_svg(const ExperimentResult& r);
std::string rmse_svg(const ExperimentResult& r);

// Writes all of the above into out_dir.
void write_experiment_outputs(const ExperimentResult& r, const std::string& out_dir);

}  // namespace zmest
