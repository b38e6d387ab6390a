#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "zmest/cli.hpp"
#include "zmest/experiment.hpp"
#include "zmest/model_io.hpp"
#include "zmest/parse.hpp"

using namespace zmest;
using namespace zmest::test;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("zmest_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int cli(const std::vector<std::string>& args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("model JSON round trip") {
  TempDir dir;
  const HmmModel m = figure2_y();
  save_model(m, dir.file("m.json"));
  auto [loaded, report] = load_model(dir.file("m.json"));
  CHECK(report.all_ok());
  CHECK(loaded.pi == m.pi);
  CHECK(loaded.P == m.P);
  CHECK(loaded.R == m.R);
  CHECK(*loaded.alphabet == *m.alphabet);
}

TEST_CASE("sequence file round trip, single-char and token alphabets") {
  TempDir dir;
  AlphabetPtr compact = binary_digits();
  const SymbolSequence s1 = SymbolSequence::from_chars(compact, "0110100");
  save_sequence(s1, dir.file("s1.txt"));
  CHECK(load_sequence(dir.file("s1.txt"), compact) == s1);

  AlphabetPtr tokens = Alphabet::create({"lo", "hi"});
  const SymbolSequence s2{tokens, {0, 1, 1, 0}};
  save_sequence(s2, dir.file("s2.txt"));
  CHECK(load_sequence(dir.file("s2.txt"), tokens) == s2);

  auto [y, x] = load_sequence_pair(dir.file("s2.txt"), dir.file("s2.txt"));
  CHECK(y.size() == 4);
  CHECK(*y.alphabet == *x.alphabet);
}

TEST_CASE("cmd validate exit codes") {
  TempDir dir;
  std::string out;

  CHECK(cli({"validate", models_dir() + "/figure2_x.json"}, &out) == 0);
  CHECK(out.find("nondegenerate: ok") != std::string::npos);

  write_file(dir.file("bad.json"),
             R"({"alphabet":["0","1"],"pi":[1.0],"P":[[1.0]],"R":[[0.7,0.7]]})");
  CHECK(cli({"validate", dir.file("bad.json")}, &out) == 1);
  CHECK(out.find("FAIL") != std::string::npos);

  write_file(dir.file("broken.json"), "{ not json");
  CHECK(cli({"validate", dir.file("broken.json")}) == 2);

  CHECK(cli({"validate", dir.file("missing.json")}) == 2);
}

TEST_CASE("cmd generate is deterministic per seed") {
  TempDir dir;
  const std::string model = models_dir() + "/figure2_y.json";
  CHECK(cli({"--seed", "5", "generate", "--model", model, "-n", "64", "-o",
             dir.file("a.txt")}) == 0);
  CHECK(cli({"--seed", "5", "generate", "--model", model, "-n", "64", "-o",
             dir.file("b.txt")}) == 0);
  CHECK(read_file(dir.file("a.txt")) == read_file(dir.file("b.txt")));

  CHECK(cli({"--seed", "6", "generate", "--model", model, "-n", "64", "-o",
             dir.file("c.txt")}) == 0);
  CHECK(read_file(dir.file("a.txt")) != read_file(dir.file("c.txt")));
}

TEST_CASE("cmd generate refuses invalid models without --force") {
  TempDir dir;
  write_file(dir.file("invalid.json"),
             R"({"alphabet":["0","1"],"pi":[0.5,0.5],"P":[[0.9,0.1],[0.2,0.8]],"R":[[1,0],[0,1]]})");
  CHECK(cli({"generate", "--model", dir.file("invalid.json"), "-n", "8", "-o",
             dir.file("s.txt")}) == 1);
  // --force skips the refusal, but sampling still rejects the broken pi
  CHECK(cli({"generate", "--model", dir.file("invalid.json"), "-n", "8", "-o",
             dir.file("s.txt"), "--force"}) == 1);
}

TEST_CASE("cmd estimate matches the worked examples") {
  TempDir dir;
  write_file(dir.file("y.txt"), "abab\n");
  write_file(dir.file("x.txt"), "aaaa\n");

  std::string out;
  CHECK(cli({"estimate", "-y", dir.file("y.txt"), "-x", dir.file("x.txt"), "--estimators",
             "mZM"}, &out) == 0);
  CHECK(out == "estimator,N,c,value\nmZM,4,2,1.38629436112\n");

  write_file(dir.file("yb.txt"), "bbbb\n");
  CHECK(cli({"estimate", "-y", dir.file("yb.txt"), "-x", dir.file("x.txt"), "--estimators",
             "mZM"}, &out) == 0);
  CHECK(out == "estimator,N,c,value\nmZM,4,4,inf\n");

  CHECK(cli({"estimate", "-y", dir.file("x.txt"), "--estimators", "LZ78"}, &out) == 0);
  CHECK(out == "estimator,N,c,value\nLZ78,4,3,0.823959216501\n");
}

TEST_CASE("cmd estimate rejects mismatched lengths unless unchecked") {
  TempDir dir;
  write_file(dir.file("y.txt"), "abab\n");
  write_file(dir.file("x.txt"), "aaaaaa\n");
  std::string out, err;
  CHECK(cli({"estimate", "-y", dir.file("y.txt"), "-x", dir.file("x.txt")}, &out, &err) == 1);
  CHECK(err.find("length mismatch") != std::string::npos);
  CHECK(cli({"estimate", "-y", dir.file("y.txt"), "-x", dir.file("x.txt"), "--unchecked"},
            &out) == 0);
}

TEST_CASE("cmd estimate dump-parse emits the parse JSON") {
  TempDir dir;
  write_file(dir.file("y.txt"), "abab\n");
  write_file(dir.file("x.txt"), "aaaa\n");
  std::string out;
  CHECK(cli({"estimate", "-y", dir.file("y.txt"), "-x", dir.file("x.txt"), "--estimators",
             "mZM,ZM", "--dump-parse", dir.file("p.json")}, &out) == 0);
  const std::string dumped = read_file(dir.file("p.json"));
  CHECK(dumped.find("\"variant\": \"mZM\"") != std::string::npos);
  CHECK(dumped.find("\"variant\": \"ZM\"") != std::string::npos);
}

TEST_CASE("experiment output headers are pinned") {
  const HmmModel mx = figure2_x();
  const HmmModel my = figure2_y();
  ExperimentConfig cfg;
  cfg.grid = {64, 128};
  cfg.realizations = 2;
  cfg.reference_n = 256;
  cfg.seed = 1;
  const ExperimentResult res = run_experiment(mx, my, cfg);

  CHECK(trace_csv(res).rfind("estimator,N,value\n", 0) == 0);
  CHECK(rmse_csv(res).rfind("estimator,N,rmse,mean\n", 0) == 0);
  CHECK(wordlens_csv(res).rfind("realization,N,max_mzm_word,ratio\n", 0) == 0);
  CHECK(reference_csv(res).rfind("reference_n,seed,value\n", 0) == 0);
}

TEST_CASE("experiment is deterministic and counts one parse per grid point") {
  const HmmModel mx = figure2_x();
  const HmmModel my = figure2_y();
  ExperimentConfig cfg;
  cfg.grid = {32, 64, 128};
  cfg.realizations = 4;
  cfg.reference_n = 128;
  cfg.seed = 9;
  cfg.jobs = 2;

  const auto before_m = parse_counters().mzm.load();
  const auto before_z = parse_counters().zm.load();
  const auto before_l = parse_counters().lz78.load();
  const ExperimentResult a = run_experiment(mx, my, cfg);
  const auto expected = cfg.grid.size() * static_cast<std::size_t>(cfg.realizations);
  CHECK(parse_counters().mzm.load() - before_m == expected);
  CHECK(parse_counters().zm.load() - before_z == expected);
  CHECK(parse_counters().lz78.load() - before_l == expected);

  cfg.jobs = 1;
  const ExperimentResult b = run_experiment(mx, my, cfg);
  CHECK(trace_csv(a) == trace_csv(b));
  CHECK(rmse_csv(a) == rmse_csv(b));
  CHECK(wordlens_csv(a) == wordlens_csv(b));

  // single-realization RMSE equals |estimate - reference|
  ExperimentConfig one = cfg;
  one.realizations = 1;
  const ExperimentResult c = run_experiment(mx, my, one);
  for (std::size_t g = 0; g < one.grid.size(); ++g)
    CHECK(c.rmse(g, Estimator::mZM) ==
          doctest::Approx(std::abs(c.value(0, g, Estimator::mZM) - c.reference))
              .epsilon(1e-12));
}

TEST_CASE("trace matches the matching experiment realization") {
  const HmmModel mx = figure2_x();
  const HmmModel my = figure2_y();
  ExperimentConfig cfg;
  cfg.grid = {64, 256};
  cfg.realizations = 2;
  cfg.reference_n = 256;
  cfg.seed = 77;
  const ExperimentResult res = run_experiment(mx, my, cfg);
  const EstimateTrace tr = trace(my, mx, cfg.grid, Estimator::ZM, cfg.seed + 1);
  for (std::size_t g = 0; g < cfg.grid.size(); ++g)
    CHECK(tr.values[g] == res.value(0, g, Estimator::ZM));
}

TEST_CASE("cmd experiment writes byte-identical outputs for equal seeds") {
  TempDir d1, d2;
  const std::string mx = models_dir() + "/figure2_x.json";
  const std::string my = models_dir() + "/figure2_y.json";
  auto run = [&](const TempDir& d) {
    return cli({"--seed", "3", "--out-dir", d.path.string(), "--jobs", "2", "experiment",
                "--model-x", mx, "--model-y", my, "--grid", "32,64", "--realizations", "3",
                "--reference-n", "128"});
  };
  CHECK(run(d1) == 0);
  CHECK(run(d2) == 0);
  for (const char* name : {"trace.csv", "rmse.csv", "wordlens.csv", "reference.csv",
                           "trace.svg", "rmse.svg"})
    CHECK(read_file(d1.file(name)) == read_file(d2.file(name)));
}

TEST_CASE("cmd pressure writes the pinned CSV schema") {
  TempDir dir;
  std::string out;
  const int code = cli({"--out-dir", dir.path.string(), "pressure", "--model-x",
                        models_dir() + "/figure2_x.json", "--model-y",
                        models_dir() + "/figure2_y.json", "--ell-max", "6", "--alpha-min",
                        "-1", "--alpha-step", "0.5", "--mc-n", "4096"},
                       &out);
  CHECK(code == 0);
  const std::string csv = read_file(dir.file("pressure.csv"));
  CHECK(csv.rfind("alpha,ell,q,q_per_symbol\n", 0) == 0);
  CHECK(read_file(dir.file("pressure.svg")).find("<svg") == 0);
  CHECK(out.find("left-derivative secant") != std::string::npos);
}

TEST_CASE("cmd decouple prints a certificate") {
  std::string out;
  TempDir dir;
  save_model(iid_model({0.5, 0.5}), dir.file("u.json"));
  CHECK(cli({"--format", "json", "decouple", "--model", dir.file("u.json"), "-L", "6"},
            &out) == 0);
  CHECK(out.find("\"k\": 0.0") != std::string::npos);
  CHECK(out.find("\"tau\": 0") != std::string::npos);
}

TEST_CASE("cmd waiting-tail emits the tail table") {
  std::string out;
  TempDir dir;
  save_model(iid_model({0.5, 0.5}), dir.file("u.json"));
  CHECK(cli({"--seed", "4", "waiting-tail", "--model", dir.file("u.json"), "--a", "01",
             "--k", "0", "--tau", "0", "--r", "10,50", "--trials", "200"},
            &out) == 0);
  CHECK(out.rfind("r,survival,bound,sigma,flagged\n", 0) == 0);
  CHECK(out.find("\n10,") != std::string::npos);
}

TEST_CASE("budget errors exit with code 3") {
  std::string out, err;
  TempDir dir;
  save_model(iid_model({0.5, 0.5}), dir.file("u.json"));
  CHECK(cli({"decouple", "--model", dir.file("u.json"), "-L", "40"}, &out, &err) == 3);
  CHECK(err.find("budget") != std::string::npos);
}

TEST_CASE("unknown flags are parse errors") {
  std::string out, err;
  CHECK(cli({"estimate", "--nonsense"}, &out, &err) == 2);
}
