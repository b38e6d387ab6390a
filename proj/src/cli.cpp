#include "zmest/cli.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "zmest/decoupling.hpp"
#include "zmest/experiment.hpp"
#include "zmest/model_io.hpp"
#include "zmest/parse.hpp"
#include "zmest/pressure.hpp"
#include "zmest/svg_plot.hpp"

namespace zmest {

namespace {

struct GlobalOpts {
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string out_dir = "zmest_out";
  std::string format = "csv";
};

HmmModel load_model_checked(const std::string& path, bool force, std::ostream& err) {
  auto [model, report] = load_model(path);
  if (!report.all_ok()) {
    if (!force) {
      std::string what = "model '" + path + "' failed validation";
      for (const auto& m : report.messages) what += "; " + m;
      what += " (use --force to proceed anyway)";
      throw std::invalid_argument(what);
    }
    err << "warning: proceeding with invalid model '" << path << "' (--force)\n";
  }
  return std::move(model);
}

std::vector<Estimator> parse_estimators(const std::vector<std::string>& names) {
  std::vector<Estimator> out;
  for (const auto& n : names) out.push_back(estimator_from_string(n));
  return out;
}

SymbolSequence sequence_from_cli_string(const AlphabetPtr& alphabet, const std::string& text) {
  if (alphabet->single_char()) return SymbolSequence::from_chars(alphabet, text);
  std::istringstream is(text);
  std::string tok;
  std::vector<Symbol> idx;
  while (is >> tok) {
    const auto i = alphabet->index_of(tok);
    if (!i) throw std::invalid_argument("symbol '" + tok + "' not in the model alphabet");
    idx.push_back(*i);
  }
  return SymbolSequence::from_indices(alphabet, std::move(idx));
}

int cmd_validate(const std::string& path, std::ostream& out) {
  auto [model, report] = load_model(path);
  (void)model;
  auto line = [&](const char* name, bool ok) {
    out << name << ": " << (ok ? "ok" : "FAIL") << "\n";
  };
  line("stochastic", report.stochastic_ok);
  line("stationary", report.stationary_ok);
  line("irreducible", report.irreducible_ok);
  out << "nondegenerate: " << (report.nondegenerate_ok ? "ok" : "FAIL");
  if (report.witness_n)
    out << " (witness_n=" << *report.witness_n << ", horizon=" << report.support_horizon << ")";
  else
    out << " (no branching length within horizon " << report.support_horizon << ")";
  out << "\n";
  for (const auto& m : report.messages) out << "  - " << m << "\n";
  return report.all_ok() ? 0 : 1;
}

int cmd_generate(const GlobalOpts& g, const std::string& model_path, std::size_t n,
                 const std::string& out_path, bool force, std::ostream& out,
                 std::ostream& err) {
  const HmmModel model = load_model_checked(model_path, force, err);
  save_sequence(sample(model, n, g.seed), out_path);
  out << "wrote " << n << " symbols to " << out_path << "\n";
  return 0;
}

int cmd_estimate(const std::string& y_path, const std::string& x_path,
                 const std::vector<Estimator>& estimators, bool unchecked,
                 const std::string& dump_parse, std::ostream& out) {
  const bool needs_x = std::any_of(estimators.begin(), estimators.end(), [](Estimator e) {
    return e != Estimator::LZ78;
  });
  if (needs_x && x_path.empty())
    throw std::invalid_argument("estimate: -x is required for cross estimators");

  SymbolSequence y{nullptr, {}}, x{nullptr, {}};
  if (!x_path.empty()) {
    std::tie(y, x) = load_sequence_pair(y_path, x_path);
  } else {
    std::tie(y, x) = load_sequence_pair(y_path, y_path);
  }
  const std::size_t n = y.size();
  if (n < 2) throw std::invalid_argument("estimate: sequences must have length >= 2");
  if (needs_x && !unchecked && x.size() != n)
    throw std::invalid_argument("estimate: length mismatch |y| = " + std::to_string(n) +
                                ", |x| = " + std::to_string(x.size()) +
                                " (pass --unchecked to allow)");

  const double log_n = std::log(static_cast<double>(n));
  std::optional<SubstringIndex> index;
  if (needs_x) index.emplace(SubstringIndex::build(x));

  std::optional<ParseResult> pm, pz, pl;
  auto ensure_mzm = [&]() -> const ParseResult& {
    if (!pm) pm = unchecked ? mzm_parse_unchecked(y, *index) : mzm_parse(y, *index);
    return *pm;
  };
  auto ensure_lz = [&]() -> const ParseResult& {
    if (!pl) pl = lz78_parse(y);
    return *pl;
  };

  out << "estimator,N,c,value\n";
  for (Estimator est : estimators) {
    std::string c_field;
    double value = 0.0;
    switch (est) {
      case Estimator::mZM: {
        const auto& p = ensure_mzm();
        c_field = std::to_string(p.word_count);
        value = p.word_count == n ? kInf
                                  : static_cast<double>(p.word_count) * log_n /
                                        static_cast<double>(n - p.word_count);
        break;
      }
      case Estimator::ZM: {
        if (!pz) pz = unchecked ? zm_parse_unchecked(y, *index) : zm_parse(y, *index);
        c_field = std::to_string(pz->word_count);
        value = static_cast<double>(pz->word_count) * log_n / static_cast<double>(n);
        break;
      }
      case Estimator::LM: {
        const std::size_t lambda = longest_match(y, *index);
        value = lambda == 0 ? kInf : log_n / static_cast<double>(lambda);
        break;
      }
      case Estimator::LZ78: {
        const auto& p = ensure_lz();
        c_field = std::to_string(p.word_count);
        value = p.word_count <= 1 ? 0.0
                                  : static_cast<double>(p.word_count) *
                                        std::log(static_cast<double>(p.word_count)) /
                                        static_cast<double>(n);
        break;
      }
      case Estimator::KL: {
        const auto& m = ensure_mzm();
        const auto& l = ensure_lz();
        const double q = m.word_count == n ? kInf
                                           : static_cast<double>(m.word_count) * log_n /
                                                 static_cast<double>(n - m.word_count);
        const double h = l.word_count <= 1 ? 0.0
                                           : static_cast<double>(l.word_count) *
                                                 std::log(static_cast<double>(l.word_count)) /
                                                 static_cast<double>(n);
        value = q == kInf ? kInf : q - h;
        break;
      }
    }
    out << to_string(est) << "," << n << "," << c_field << "," << format_value(value) << "\n";
  }

  if (!dump_parse.empty()) {
    nlohmann::json arr = nlohmann::json::array();
    if (pm) arr.push_back(nlohmann::json::parse(pm->to_json()));
    if (pz) arr.push_back(nlohmann::json::parse(pz->to_json()));
    if (pl) arr.push_back(nlohmann::json::parse(pl->to_json()));
    if (dump_parse == "-")
      out << arr.dump(2) << "\n";
    else
      write_file(dump_parse, arr.dump(2) + "\n");
  }
  return 0;
}

int cmd_experiment(const GlobalOpts& g, const std::string& model_x_path,
                   const std::string& model_y_path, ExperimentConfig config, bool force,
                   std::ostream& out, std::ostream& err) {
  const HmmModel mx = load_model_checked(model_x_path, force, err);
  const HmmModel my = load_model_checked(model_y_path, force, err);
  config.seed = g.seed;
  config.jobs = g.jobs;
  const ExperimentResult result = run_experiment(mx, my, config);
  write_experiment_outputs(result, g.out_dir);
  out << "reference (n=" << config.reference_n << "): " << format_value(result.reference)
      << "\n";
  out << "wrote trace.csv, rmse.csv, wordlens.csv, reference.csv, trace.svg, rmse.svg to "
      << g.out_dir << "\n";
  return 0;
}

int cmd_pressure(const GlobalOpts& g, const std::string& model_x_path,
                 const std::string& model_y_path, double alpha_min, double alpha_max,
                 double alpha_step, int ell_max, double h, std::size_t mc_n, bool force,
                 std::ostream& out, std::ostream& err) {
  const HmmModel mx = load_model_checked(model_x_path, force, err);
  const HmmModel my = load_model_checked(model_y_path, force, err);
  if (alpha_step <= 0 || alpha_max < alpha_min)
    throw std::invalid_argument("pressure: bad alpha grid");
  if (ell_max < 1) throw std::invalid_argument("pressure: ell-max must be >= 1");

  std::vector<double> alphas;
  for (double a = alpha_min; a <= alpha_max + 1e-12; a += alpha_step)
    alphas.push_back(std::abs(a) < 1e-12 ? 0.0 : a);
  std::vector<int> lengths;
  for (int ell = 1; ell <= ell_max; ++ell) lengths.push_back(ell);

  const PressureCurve curve = pressure_curve(mx, my, alphas, lengths);

  std::ostringstream csv;
  csv << "alpha,ell,q,q_per_symbol\n";
  for (std::size_t ia = 0; ia < alphas.size(); ++ia)
    for (std::size_t il = 0; il < lengths.size(); ++il)
      csv << format_value(alphas[ia]) << "," << lengths[il] << ","
          << format_value(curve.q[ia * lengths.size() + il]) << ","
          << format_value(curve.per_symbol[ia * lengths.size() + il]) << "\n";

  const double secant = left_derivative_estimate(mx, my, h, ell_max);
  const double mc = cross_entropy_mc(mx, my, mc_n, g.seed);
  const NondegeneracyResult nd = nondegeneracy(mx, my, ell_max);

  SvgPlot plot("Pressure per symbol (ell=" + std::to_string(ell_max) + ")", "alpha",
               "q_ell(alpha)/ell");
  std::vector<double> ys;
  for (std::size_t ia = 0; ia < alphas.size(); ++ia)
    ys.push_back(curve.per_symbol[ia * lengths.size() + (lengths.size() - 1)]);
  plot.add_series("q/ell", alphas, std::move(ys));
  plot.add_annotation("secant at 0 (h=" + format_value(h) + "): " + format_value(secant));
  plot.add_annotation("cross entropy (MC, n=" + std::to_string(mc_n) + "): " + format_value(mc));
  plot.add_annotation("q(-1)/ell: " + format_value(nd.per_symbol) +
                      (nd.nondegenerate ? " (nondegenerate)" : " (DEGENERATE)"));

  std::filesystem::create_directories(g.out_dir);
  const std::filesystem::path dir(g.out_dir);
  write_file((dir / "pressure.csv").string(), csv.str());
  write_file((dir / "pressure.svg").string(), plot.render());

  out << "left-derivative secant (h=" << format_value(h) << ", ell=" << ell_max
      << "): " << format_value(secant) << "\n";
  out << "cross entropy (MC, n=" << mc_n << "): " << format_value(mc) << "\n";
  out << "q_ell(-1)/ell = " << format_value(nd.per_symbol) << " -> "
      << (nd.nondegenerate ? "nondegenerate" : "DEGENERATE") << "\n";
  out << "wrote pressure.csv, pressure.svg to " << g.out_dir << "\n";
  return 0;
}

int cmd_decouple(const GlobalOpts& g, const std::string& model_path, int L, int tau_max,
                 bool force, std::ostream& out, std::ostream& err) {
  const HmmModel model = load_model_checked(model_path, force, err);
  const DecouplingCertificate cert = fit_constants(model, L, tau_max);
  if (g.format == "csv")
    out << cert.to_csv();
  else
    out << cert.to_json() << "\n";
  return 0;
}

int cmd_waiting_tail(const GlobalOpts& g, const std::string& model_path, const std::string& a,
                     double k, int tau, bool have_k, bool have_tau, int fit_L, int fit_tau_max,
                     const std::vector<std::size_t>& r_grid, std::size_t trials, bool force,
                     std::ostream& out, std::ostream& err) {
  const HmmModel model = load_model_checked(model_path, force, err);
  if (!have_k || !have_tau) {
    const DecouplingCertificate cert = fit_constants(model, fit_L, fit_tau_max);
    if (!have_k) k = cert.k;
    if (!have_tau) tau = cert.tau;
    err << "fitted decoupling constants at horizon " << fit_L << ": k=" << format_value(cert.k)
        << " tau=" << cert.tau << "\n";
  }
  const SymbolSequence target = sequence_from_cli_string(model.alphabet, a);
  const TailTable table =
      waiting_time_tail_test(model, target, k, tau, r_grid, trials, g.seed);

  if (g.format == "json") {
    nlohmann::json j;
    j["p_a"] = table.p_a;
    j["trials"] = table.trials;
    j["k"] = k;
    j["tau"] = tau;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : table.rows)
      j["rows"].push_back({{"r", row.r},
                           {"survival", row.survival},
                           {"bound", row.bound},
                           {"sigma", row.sigma},
                           {"flagged", row.flagged}});
    out << j.dump(2) << "\n";
  } else {
    out << "r,survival,bound,sigma,flagged\n";
    for (const auto& row : table.rows)
      out << row.r << "," << format_value(row.survival) << "," << format_value(row.bound)
          << "," << format_value(row.sigma) << "," << (row.flagged ? "1" : "0") << "\n";
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cross entropy and KL divergence rate estimation for finite-alphabet sources"};
  app.name("zmest");

  GlobalOpts g;
  app.add_option("--seed", g.seed, "base RNG seed (xoshiro256**)")->capture_default_str();
  app.add_option("--jobs", g.jobs, "max parallel workers (0 = auto)")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "output directory for file-producing commands")
      ->capture_default_str();
  app.add_option("--format", g.format, "output format for tables")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "check a model file");
  std::string validate_path;
  validate_cmd->add_option("model", validate_path, "model JSON file")->required();
  validate_cmd->fallthrough();

  // generate
  auto* generate_cmd = app.add_subcommand("generate", "sample a sequence from a model");
  std::string gen_model, gen_out;
  std::size_t gen_n = 0;
  bool gen_force = false;
  generate_cmd->add_option("--model", gen_model, "model JSON file")->required();
  generate_cmd->add_option("-n,--length", gen_n, "sequence length")->required();
  generate_cmd->add_option("-o,--output", gen_out, "output sequence file")->required();
  generate_cmd->add_flag("--force", gen_force, "accept models that fail validation");
  generate_cmd->fallthrough();

  // estimate
  auto* estimate_cmd = app.add_subcommand("estimate", "estimate rates from sequence files");
  std::string est_y, est_x, est_dump;
  std::vector<std::string> est_names = {"mZM", "ZM", "LM", "LZ78", "KL"};
  bool est_unchecked = false;
  estimate_cmd->add_option("-y", est_y, "sequence whose law is estimated")->required();
  estimate_cmd->add_option("-x", est_x, "database sequence");
  estimate_cmd->add_option("--estimators", est_names, "subset of mZM,ZM,LM,LZ78,KL")
      ->delimiter(',');
  estimate_cmd->add_flag("--unchecked", est_unchecked, "allow |y| != |x|");
  estimate_cmd->add_option("--dump-parse", est_dump, "write parse JSON here ('-' = stdout)");
  estimate_cmd->fallthrough();

  // experiment
  auto* experiment_cmd =
      app.add_subcommand("experiment", "convergence and RMSE experiment over realizations");
  std::string exp_mx, exp_my;
  ExperimentConfig exp_cfg;
  exp_cfg.grid = ExperimentConfig::default_grid();
  std::vector<std::string> exp_names = {"mZM", "ZM", "LM", "LZ78", "KL"};
  bool exp_force = false;
  experiment_cmd->add_option("--model-x", exp_mx, "database-law model JSON")->required();
  experiment_cmd->add_option("--model-y", exp_my, "target-law model JSON")->required();
  experiment_cmd->add_option("--grid", exp_cfg.grid, "prefix lengths N")->delimiter(',');
  experiment_cmd->add_option("--realizations", exp_cfg.realizations, "realization count")
      ->capture_default_str();
  experiment_cmd->add_option("--reference-n", exp_cfg.reference_n, "reference sample length")
      ->capture_default_str();
  experiment_cmd->add_option("--estimators", exp_names, "subset of mZM,ZM,LM,LZ78,KL")
      ->delimiter(',');
  experiment_cmd->add_flag("--force", exp_force, "accept models that fail validation");
  experiment_cmd->fallthrough();

  // pressure
  auto* pressure_cmd = app.add_subcommand("pressure", "tabulate the finite-size pressure");
  std::string prs_mx, prs_my;
  double prs_amin = -2.0, prs_amax = 0.0, prs_astep = 0.05, prs_h = 0.01;
  int prs_ellmax = 16;
  std::size_t prs_mcn = std::size_t{1} << 20;
  bool prs_force = false;
  pressure_cmd->add_option("--model-x", prs_mx, "database-law model JSON")->required();
  pressure_cmd->add_option("--model-y", prs_my, "target-law model JSON")->required();
  pressure_cmd->add_option("--alpha-min", prs_amin)->capture_default_str();
  pressure_cmd->add_option("--alpha-max", prs_amax)->capture_default_str();
  pressure_cmd->add_option("--alpha-step", prs_astep)->capture_default_str();
  pressure_cmd->add_option("--ell-max", prs_ellmax)->capture_default_str();
  pressure_cmd->add_option("--secant-h", prs_h, "secant step for the left derivative")
      ->capture_default_str();
  pressure_cmd->add_option("--mc-n", prs_mcn, "sample length for the MC annotation")
      ->capture_default_str();
  pressure_cmd->add_flag("--force", prs_force, "accept models that fail validation");
  pressure_cmd->fallthrough();

  // decouple
  auto* decouple_cmd = app.add_subcommand("decouple", "fit decoupling constants (k, tau)");
  std::string dec_model;
  int dec_L = 10, dec_tau_max = 4;
  bool dec_force = false;
  decouple_cmd->add_option("--model", dec_model, "model JSON file")->required();
  decouple_cmd->add_option("-L,--horizon", dec_L, "max total string length")
      ->capture_default_str();
  decouple_cmd->add_option("--tau-max", dec_tau_max, "max insertion length")
      ->capture_default_str();
  decouple_cmd->add_flag("--force", dec_force, "accept models that fail validation");
  decouple_cmd->fallthrough();

  // waiting-tail
  auto* tail_cmd =
      app.add_subcommand("waiting-tail", "empirical waiting-time tail vs decoupling bound");
  std::string tail_model, tail_a;
  double tail_k = 0.0;
  int tail_tau = 0, tail_fit_L = 10, tail_fit_tau_max = 4;
  std::vector<std::size_t> tail_r = {32, 64, 128, 256, 512, 1024};
  std::size_t tail_trials = 1000;
  bool tail_force = false;
  tail_cmd->add_option("--model", tail_model, "model JSON file")->required();
  tail_cmd->add_option("--a", tail_a, "target string over the model alphabet")->required();
  auto* tail_k_opt = tail_cmd->add_option("--k", tail_k, "decoupling constant k");
  auto* tail_tau_opt = tail_cmd->add_option("--tau", tail_tau, "decoupling constant tau");
  tail_cmd->add_option("--fit-L", tail_fit_L, "fit horizon when k/tau are omitted")
      ->capture_default_str();
  tail_cmd->add_option("--fit-tau-max", tail_fit_tau_max)->capture_default_str();
  tail_cmd->add_option("--r", tail_r, "r grid")->delimiter(',');
  tail_cmd->add_option("--trials", tail_trials, "Monte Carlo trials")->capture_default_str();
  tail_cmd->add_flag("--force", tail_force, "accept models that fail validation");
  tail_cmd->fallthrough();

  app.require_subcommand(0, 1);

  std::vector<std::string> argv_like = args;
  try {
    // CLI11 consumes the vector in reverse order.
    std::reverse(argv_like.begin(), argv_like.end());
    app.parse(argv_like);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate_cmd) return cmd_validate(validate_path, out);
    if (*generate_cmd) return cmd_generate(g, gen_model, gen_n, gen_out, gen_force, out, err);
    if (*estimate_cmd)
      return cmd_estimate(est_y, est_x, parse_estimators(est_names), est_unchecked, est_dump,
                          out);
    if (*experiment_cmd) {
      exp_cfg.estimators = parse_estimators(exp_names);
      return cmd_experiment(g, exp_mx, exp_my, exp_cfg, exp_force, out, err);
    }
    if (*pressure_cmd)
      return cmd_pressure(g, prs_mx, prs_my, prs_amin, prs_amax, prs_astep, prs_ellmax, prs_h,
                          prs_mcn, prs_force, out, err);
    if (*decouple_cmd) return cmd_decouple(g, dec_model, dec_L, dec_tau_max, dec_force, out, err);
    if (*tail_cmd)
      return cmd_waiting_tail(g, tail_model, tail_a, tail_k, tail_tau,
                              tail_k_opt->count() > 0, tail_tau_opt->count() > 0, tail_fit_L,
                              tail_fit_tau_max, tail_r, tail_trials, tail_force, out, err);
    out << app.help();
    return 0;
  } catch (const budget_error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace zmest
