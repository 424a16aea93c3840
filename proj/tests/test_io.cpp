#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <Eigen/Dense>

#include "core/config.hpp"
#include "core/csv.hpp"
#include "core/runner.hpp"

using namespace difflab;
namespace fs = std::filesystem;

TEST_CASE("config: parse, defaults, and field-level errors") {
  const std::string text = R"(
# comment
[run]
kind = sample
seed = 7

[sampler]
steps = 100
alpha = 1.5
grid = 1, 2.5, 4
flag = true
)";
  Config c = Config::parse(text);
  CHECK(c.get_str("run", "kind") == "sample");
  CHECK(c.get_int("run", "seed") == 7);
  CHECK(c.get_num("sampler", "alpha") == 1.5);
  CHECK(c.get_bool("sampler", "flag", false));
  CHECK(c.get_list("sampler", "grid") == std::vector<double>{1.0, 2.5, 4.0});
  CHECK(c.get_num("sampler", "missing", 3.0) == 3.0);

  CHECK_THROWS_WITH_AS(c.get_str("sampler", "missing"),
                       "config: missing [sampler] missing", ConfigError);
  CHECK_THROWS_AS(c.get_int("run", "kind"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[broken\nkey = 1"), ConfigError);
  CHECK_THROWS_AS(Config::parse("keynovalue"), ConfigError);
}

TEST_CASE("csv: formatting, quoting, and read-back") {
  CsvWriter w({"a", "b,comma", "c"});
  w.add_row({1.0, 0.1, 1e-300});
  w.add_row(std::vector<std::string>{"x\"y", "plain", "1.5"});
  CHECK(w.text().find("\"b,comma\"") != std::string::npos);
  CHECK(w.text().find("\"x\"\"y\"") != std::string::npos);
  CHECK(w.text().find("\r\n") != std::string::npos);
  // 17 significant digits survive a round trip
  const double v = 0.12345678901234567;
  const std::string s = CsvWriter::format(v);
  CHECK(std::strtod(s.c_str(), nullptr) == v);

  Eigen::MatrixXd m(2, 3);
  m << 1.5, -2.25, 3.125, 0.1, 0.2, 0.3;
  const std::string path = "samples_roundtrip.csv";
  write_samples_csv(path, m);
  const Eigen::MatrixXd back = read_samples_csv(path);
  CHECK((m - back).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("runner: determinism and manifest reproducibility" * doctest::timeout(300)) {
  const std::string text = R"(
[run]
kind = sample
seed = 3
[score]
family = gauss1d
sigma0 = 0.5
[sampler]
scheme = em
steps = 200
batch = 512
alpha = 1
init = exact_pt
)";
  Config cfg = Config::parse(text);
  fs::path tmp = fs::temp_directory_path() / "difflab_run_a";
  fs::path tmp2 = fs::temp_directory_path() / "difflab_run_b";
  fs::remove_all(tmp);
  fs::remove_all(tmp2);
  run_config(cfg, tmp.string());
  run_config(cfg, tmp2.string());

  auto slurp = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  const std::string a = slurp(tmp / "samples.csv");
  const std::string b = slurp(tmp2 / "samples.csv");
  REQUIRE(!a.empty());
  CHECK(fnv1a64(a) == fnv1a64(b));
  CHECK(fs::exists(tmp / "manifest.json"));

  // worker count must not change results
  setenv("LAB_THREADS", "1", 1);
  fs::path tmp3 = fs::temp_directory_path() / "difflab_run_c";
  fs::remove_all(tmp3);
  run_config(cfg, tmp3.string());
  unsetenv("LAB_THREADS");
  CHECK(fnv1a64(slurp(tmp3 / "samples.csv")) == fnv1a64(a));

  fs::remove_all(tmp);
  fs::remove_all(tmp2);
  fs::remove_all(tmp3);
}

TEST_CASE("runner: const-unit-time h profile samples the rescaled problem" *
          doctest::timeout(300)) {
  const std::string text = R"(
[run]
kind = sample
seed = 9
[schedule]
beta0 = 0.1
beta1 = 20
T = 1
h_mode = const_unit_time
h_value = 1
[score]
family = gauss1d
sigma0 = 0.5
[sampler]
scheme = em
steps = 4000
batch = 20000
init = exact_pt
)";
  fs::path tmp = fs::temp_directory_path() / "difflab_run_unit";
  fs::remove_all(tmp);
  run_config(Config::parse(text), tmp.string());
  const Eigen::MatrixXd s = read_samples_csv((tmp / "samples.csv").string());
  REQUIRE(s.cols() == 20000);
  const double mean = s.row(0).mean();
  const double var = (s.row(0).array() - mean).square().sum() / (s.cols() - 1);
  CHECK(std::abs(var - 0.25) < 0.01);  // exact-score contract on the unit clock
  fs::remove_all(tmp);
}

TEST_CASE("runner: custom mixture spec from config keys") {
  const std::string text = R"(
[run]
kind = sample
seed = 2
[schedule]
T = 4
[score]
family = gmm
weights = 0.5, 0.5
means = -1, -1; 1, 1
vars = 0.01, 0.02; 0.01, 0.02
[sampler]
steps = 50
batch = 200
alpha = 1
init = exact_pt
)";
  fs::path tmp = fs::temp_directory_path() / "difflab_run_gmm";
  fs::remove_all(tmp);
  run_config(Config::parse(text), tmp.string());
  const Eigen::MatrixXd s = read_samples_csv((tmp / "samples.csv").string());
  CHECK(s.rows() == 2);
  CHECK(s.cols() == 200);
  CHECK(s.allFinite());
  fs::remove_all(tmp);

  Config bad = Config::parse(text);
  bad.set("score", "weights", "0.9, 0.9");
  CHECK_THROWS(run_config(bad, (tmp / "x").string()));
}

TEST_CASE("runner: schema violations carry field names") {
  Config empty = Config::parse("");
  CHECK_THROWS_WITH_AS(run_config(empty, "unused_dir"), "config: missing [run] kind",
                       ConfigError);
  Config bad = Config::parse("[run]\nkind = warp\n");
  CHECK_THROWS_AS(run_config(bad, "unused_dir"), ConfigError);
}
