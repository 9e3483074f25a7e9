#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "detcap/experiment.hpp"

// Contract tests against the built binary (path injected by the build).

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CommandResult run_cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() / "detcap_cli_tests";
  fs::create_directories(dir);
  const fs::path out = dir / ("out" + std::to_string(counter) + ".txt");
  const fs::path err = dir / ("err" + std::to_string(counter) + ".txt");
  ++counter;
  const std::string cmd = env + (env.empty() ? "" : " ") + DETCAP_BIN + " " +
                          args + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  CommandResult res;
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  res.out = slurp(out);
  res.err = slurp(err);
  return res;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "detcap_cli_tests";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream f(p, std::ios::binary);
  f << text;
  return p;
}

}  // namespace

TEST_CASE("exact --demo prints the bundled two-detector law") {
  const CommandResult res = run_cli("exact --demo");
  REQUIRE(res.exit_code == 0);
  const json j = json::parse(res.out);
  CHECK(j.at("pmf").at(0).get<double>() == doctest::Approx(0.5));
  CHECK(j.at("pmf").at(1).get<double>() == doctest::Approx(0.25));
  CHECK(j.at("mass_at_infinity").get<double>() == doctest::Approx(0.25));
  CHECK(j.at("expected_truncated_time").get<double>() == doctest::Approx(1.0));
  CHECK(j.at("success_probability").get<double>() == doctest::Approx(0.75));
}

TEST_CASE("exact reads scheme and configuration files") {
  const fs::path scheme =
      write_file("scheme.json", R"({"assignment": [3, 1, 2]})");
  const fs::path config =
      write_file("config.json", R"({"probs": [0.2, 0.5, 0.8]})");
  const CommandResult res = run_cli("exact --scheme-file " + scheme.string() +
                                    " --config-file " + config.string());
  REQUIRE(res.exit_code == 0);
  const json j = json::parse(res.out);
  CHECK(j.at("pmf").at(0).get<double>() == doctest::Approx(0.8));
  CHECK(j.at("pmf").at(1).get<double>() == doctest::Approx(0.04));
  CHECK(j.at("pmf").at(2).get<double>() == doctest::Approx(0.08));
}

TEST_CASE("usage errors exit with status 2") {
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("exact --no-such-flag").exit_code == 2);
  CHECK(run_cli("exact").exit_code == 2);  // missing inputs
  const CommandResult missing = run_cli("run missing.toml");
  CHECK(missing.exit_code == 2);
  CHECK(missing.err.find("config not found") != std::string::npos);
}

TEST_CASE("scheme-stats emits the pinned JSON shape") {
  const CommandResult res = run_cli(
      "scheme-stats --family uniform_injective --n 20 --r 10 --k 3 "
      "--method exact");
  REQUIRE(res.exit_code == 0);
  const json j = json::parse(res.out);
  CHECK(j.size() == 4);
  CHECK(j.at("k").get<int>() == 3);
  CHECK(j.at("a_k").get<double>() == doctest::Approx(1.0));
  CHECK(j.at("b_k").get<double>() == doctest::Approx(4080.0 / 6840.0));
  CHECK(j.at("stderr").get<double>() == doctest::Approx(0.0));

  const CommandResult mc = run_cli(
      "scheme-stats --family iid_uniform --n 20 --r 10 --k 3 --method mc "
      "--samples 20000 --seed 5");
  REQUIRE(mc.exit_code == 0);
  const json jm = json::parse(mc.out);
  CHECK(jm.at("stderr").get<double>() > 0.0);
  CHECK(std::abs(jm.at("a_k").get<double>() - 0.855) <
        4.0 * jm.at("stderr").get<double>() + 1e-9);
}

TEST_CASE("simulate is reproducible for a fixed seed") {
  const CommandResult a = run_cli("simulate --demo --seed 11 --replicates 1000");
  const CommandResult b = run_cli("simulate --demo --seed 11 --replicates 1000");
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  const json j = json::parse(a.out);
  CHECK(j.at("replicates").get<int>() == 1000);
  CHECK(std::abs(j.at("empirical_pmf").at(0).get<double>() - 0.5) < 0.07);
}

TEST_CASE("ensemble prints the documented CSV header") {
  const CommandResult res = run_cli(
      "ensemble --family uniform_injective --alphabet 0.2,0.8 --n 64 --r 8 "
      "--replicates 2000 --seed 4");
  REQUIRE(res.exit_code == 0);
  CHECK(res.out.rfind("n,r,mean_T,se_mean,var_T,se_var,mean_S,exact_mean_T\n",
                      0) == 0);
  const json report = json::parse(res.err);
  CHECK(report.at("bound_checks").at(0).at("pass_upper").get<bool>());
}

TEST_CASE("run produces byte-identical outputs across thread caps") {
  const fs::path cfg = write_file("exp.json", R"({
    "alphabet": {"values": [0.2, 0.8]},
    "family": {"kind": "uniform_injective"},
    "schedule": {"rule": "sqrt"},
    "grid": {"n": [64, 256]},
    "replicates": 400,
    "seed": 7
  })");
  const fs::path dir = fs::temp_directory_path() / "detcap_cli_tests";
  const CommandResult r1 = run_cli("run " + cfg.string() + " --out " +
                                       (dir / "run1").string(),
                                   "DETCAP_THREADS=1");
  const CommandResult r2 = run_cli("run " + cfg.string() + " --out " +
                                       (dir / "run2").string(),
                                   "DETCAP_THREADS=4");
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r2.exit_code == 0);
  CHECK(slurp(dir / "run1" / "sweep.csv") == slurp(dir / "run2" / "sweep.csv"));
  CHECK(slurp(dir / "run1" / "verdict.json") ==
        slurp(dir / "run2" / "verdict.json"));
  // seed override changes the outputs
  const CommandResult r3 = run_cli("run " + cfg.string() + " --out " +
                                   (dir / "run3").string() + " --seed 8");
  REQUIRE(r3.exit_code == 0);
  CHECK(slurp(dir / "run1" / "sweep.csv") != slurp(dir / "run3" / "sweep.csv"));
}

TEST_CASE("run rejects malformed configs with exit 2") {
  const fs::path bad1 = write_file("bad1.json", R"({"alphabet": {}})");
  CHECK(run_cli("run " + bad1.string()).exit_code == 2);
  const fs::path bad2 = write_file("bad2.json", R"({
    "alphabet": {"values": [0.2, 0.8]},
    "family": {"kind": "uniform_injective"},
    "grid": {"n": []},
    "replicates": 100
  })");
  CHECK(run_cli("run " + bad2.string()).exit_code == 2);
  const fs::path bad3 = write_file("bad3.json", "not json at all");
  CHECK(run_cli("run " + bad3.string()).exit_code == 2);
}

TEST_CASE("csv format flattens the JSON payload") {
  const CommandResult res = run_cli("exact --demo --format csv");
  REQUIRE(res.exit_code == 0);
  CHECK(res.out.rfind("key,value\n", 0) == 0);
  CHECK(res.out.find("pmf_1,0.5") != std::string::npos);
  CHECK(res.out.find("success_probability,0.75") != std::string::npos);
  CHECK(run_cli("exact --demo --format yaml").exit_code == 2);

  const fs::path target =
      fs::temp_directory_path() / "detcap_cli_tests" / "law.json";
  const CommandResult to_file =
      run_cli("exact --demo --out " + target.string());
  REQUIRE(to_file.exit_code == 0);
  CHECK(to_file.out.empty());
  const json j = json::parse(slurp(target));
  CHECK(j.at("mass_at_infinity").get<double>() == doctest::Approx(0.25));
}

TEST_CASE("bundled demo config parses into the three-family sweep") {
  const fs::path demo =
      fs::path(DETCAP_SOURCE_DIR) / "configs" / "theorem1_demo.json";
  REQUIRE(fs::exists(demo));
  const auto cfg = detcap::ExperimentConfig::from_json_file(demo.string());
  CHECK(cfg.families.size() == 3);
  CHECK(cfg.families[0].label() == "uniform_injective");
  CHECK(cfg.families[1].label() == "block_repeat(2,uniform_injective)");
  CHECK(cfg.families[2].label() == "hot_start(1,uniform_injective)");
  CHECK(cfg.n_grid == std::vector<int>({100, 1000, 10000}));
  CHECK(cfg.replicates == 10000);
}

TEST_CASE("verify --fast succeeds") {
  const CommandResult res = run_cli("verify --fast");
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("all checks passed") != std::string::npos);
  CHECK(res.out.find("[FAIL]") == std::string::npos);
}
