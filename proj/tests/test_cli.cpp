// End-to-end tests for the command-line tool.  The binary under test is
// located through the HTEV_BIN environment variable (set by the build), and
// every case drives it as a subprocess, checking exit codes, output schema,
// and byte-level determinism.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

using json = nlohmann::json;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const char* bin = std::getenv("HTEV_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "HTEV_BIN must point at the CLI binary");
  std::string cmd = env_prefix + std::string(bin) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string make_temp_dir() {
  char tmpl[] = "/tmp/htev_cli_XXXXXX";
  char* dir = ::mkdtemp(tmpl);
  REQUIRE(dir != nullptr);
  return dir;
}

constexpr const char* kBenchmark = "--n 2 --R 1 --V0 0.5 --nu 1";

}  // namespace

TEST_CASE("eigs emits a stable CSV with the first benchmark eigenvalue") {
  const std::string args = std::string("eigs ") + kBenchmark + " --lambda-max 120";
  const RunResult r = run_cli(args);
  REQUIRE(r.exit_code == 0);
  const auto lines = split_lines(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "index,lambda,sqrt_lambda,det_residual");
  const auto fields = split_csv(lines[1]);
  REQUIRE(fields.size() == 4);
  CHECK(std::stoi(fields[0]) == 1);
  const double lambda = std::stod(fields[1]);
  CHECK(std::abs(lambda - 108.775048055) < 1e-6 * 108.775048055);
  CHECK(std::stod(fields[2]) == doctest::Approx(std::sqrt(lambda)).epsilon(1e-12));
  CHECK(std::stod(fields[3]) < 1e-8);

  const RunResult again = run_cli(args);
  CHECK(again.exit_code == 0);
  CHECK(again.out == r.out);  // identical configuration, identical bytes
}

TEST_CASE("eigs finds every benchmark eigenvalue below 2000") {
  const RunResult r =
      run_cli(std::string("eigs ") + kBenchmark + " --lambda-max 2000");
  REQUIRE(r.exit_code == 0);
  const auto lines = split_lines(r.out);
  REQUIRE(lines.size() >= 4);  // header + at least three eigenvalue rows
  const double expected[] = {108.775048055, 485.143813794, 1036.30810191,
                             1790.18580778};
  REQUIRE(lines.size() == 5);
  for (int i = 0; i < 4; ++i) {
    const auto fields = split_csv(lines[static_cast<size_t>(i) + 1]);
    REQUIRE(fields.size() == 4);
    CHECK(std::stod(fields[1]) ==
          doctest::Approx(expected[i]).epsilon(1e-6));
  }
}

TEST_CASE("eigs JSON carries metadata, config echo, and root details") {
  const RunResult r = run_cli(std::string("eigs ") + kBenchmark +
                              " --lambda-max 120 --format json");
  REQUIRE(r.exit_code == 0);
  const json d = json::parse(r.out);
  CHECK(d["metadata"]["version"] == "0.1.0");
  CHECK(d["metadata"]["command"] == "eigs");
  CHECK(d["metadata"]["config"]["n"] == 2);
  CHECK(d["metadata"]["config"]["V0"] == 0.5);
  CHECK(d["metadata"]["config"]["lambda_max"] == 120.0);
  CHECK(d["metadata"]["config"]["scan_step"] == 1.0);
  REQUIRE(d["count"] == 1);
  REQUIRE(d["eigenvalues"].size() == 1);
  const json& root = d["eigenvalues"][0];
  CHECK(root["index"] == 1);
  CHECK(double(root["lambda"]) == doctest::Approx(108.775048055).epsilon(1e-6));
  CHECK(double(root["det_residual"]) < 1e-8);
  CHECK(double(root["bracket_lo"]) < double(root["lambda"]));
  CHECK(double(root["lambda"]) < double(root["bracket_hi"]));
}

TEST_CASE("invalid parameters and malformed invocations exit with code 2") {
  CHECK(run_cli(std::string("eigs ") + "--n 2 --R 1 --V0 1.5 --nu 1 --lambda-max 120")
            .exit_code == 2);
  CHECK(run_cli(std::string("eigs ") + "--n 2 --R 1 --V0 0 --nu 1 --lambda-max 120")
            .exit_code == 2);
  CHECK(run_cli("eigs --bogus-flag 1").exit_code == 2);
  CHECK(run_cli("eigs").exit_code == 2);  // missing required options
  CHECK(run_cli("corner --cone sector --n 3 --degree 2").exit_code == 2);
  CHECK(run_cli("curves --n 2 --R 1 --V0 0.5 --nu 1 --lambda-max 130 --grid 10")
            .exit_code == 2);  // grid below the assembler minimum
  CHECK(run_cli("").exit_code == 2);  // a subcommand is required
}

TEST_CASE("help requests succeed") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("eigs --help").exit_code == 0);
}

TEST_CASE("default output directory and explicit output file match stdout bytes") {
  const std::string args = std::string("eigs ") + kBenchmark + " --lambda-max 120";
  const RunResult to_stdout = run_cli(args);
  REQUIRE(to_stdout.exit_code == 0);

  const std::string dir = make_temp_dir();
  const RunResult via_env = run_cli(args, "env HTEV_OUTPUT_DIR=" + dir + " ");
  CHECK(via_env.exit_code == 0);
  CHECK(via_env.out.empty());  // routed to the file, stdout stays clean
  CHECK(read_file(dir + "/eigs.csv") == to_stdout.out);

  const std::string explicit_path = dir + "/explicit.csv";
  const RunResult via_flag = run_cli(args + " --output " + explicit_path);
  CHECK(via_flag.exit_code == 0);
  CHECK(read_file(explicit_path) == to_stdout.out);

  // --output wins over the environment variable
  const std::string override_path = dir + "/override.csv";
  const RunResult both = run_cli(args + " --output " + override_path,
                                 "env HTEV_OUTPUT_DIR=" + dir + " ");
  CHECK(both.exit_code == 0);
  CHECK(read_file(override_path) == to_stdout.out);
}

TEST_CASE("curves CSV tabulates the requested grid of eigencurves") {
  const RunResult r = run_cli(std::string("curves ") + kBenchmark +
                              " --grid 120 --lambda-max 130 --points 14 --curves 3");
  REQUIRE(r.exit_code == 0);
  const auto lines = split_lines(r.out);
  REQUIRE(lines.size() == 15);
  CHECK(lines[0] == "lambda,mu_1,mu_2,mu_3");
  double prev = -1.0;
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_csv(lines[i]);
    REQUIRE(fields.size() == 4);
    const double lambda = std::stod(fields[0]);
    CHECK(lambda > prev);
    prev = lambda;
    for (int c = 1; c < 4; ++c) CHECK(std::isfinite(std::stod(fields[c])));
  }
}

TEST_CASE("curves JSON reports a refined crossing near the determinant root") {
  const RunResult r = run_cli(std::string("curves ") + kBenchmark +
                              " --grid 120 --lambda-max 130 --points 6 --curves 2"
                              " --format json");
  REQUIRE(r.exit_code == 0);
  const json d = json::parse(r.out);
  CHECK(d["metadata"]["command"] == "curves");
  CHECK(d["metadata"]["config"]["grid"] == 120);
  REQUIRE(d["lambda"].size() == 6);
  REQUIRE(d["mu"].size() == 6);
  REQUIRE(d["mu"][0].size() == 2);
  for (const auto& s : d["solved"]) CHECK(s == 1);
  const json& crossings = d["crossings"];
  CHECK(crossings["count_mismatch"] == false);
  REQUIRE(crossings["published"].size() >= 1);
  const double first = crossings["published"][0];
  CHECK(std::abs(first - 108.775048055) < 1e-2 * 108.775048055);
  REQUIRE(crossings["fine"].size() >= 1);
  CHECK(crossings["fine"][0]["multiplicity"] == 1);
}

TEST_CASE("corner scans are deterministic in the seed and report nonvanishing") {
  const std::string args = "corner --cone orthant --n 2 --degree 3 --samples 100 --seed 7";
  const RunResult r = run_cli(args);
  REQUIRE(r.exit_code == 0);
  const json d = json::parse(r.out);
  CHECK(d["metadata"]["config"]["seed"] == 7);
  REQUIRE(d["reports"].size() == 2);  // planar harmonic space has dimension two
  for (const auto& rep : d["reports"]) {
    CHECK(rep["polynomial"]["degree"] == 3);
    CHECK(rep["nonvanishing"] == true);
    CHECK(double(rep["max_abs"]) > double(rep["threshold"]));
    CHECK(double(rep["witness_gamma"]) > 0.0);
    CHECK(rep["samples"] == 100);
    REQUIRE(rep["witness_re"].size() == 2);
    REQUIRE(rep["witness_im"].size() == 2);
  }
  CHECK(d["all_nonvanishing"] == true);

  const RunResult again = run_cli(args);
  CHECK(again.out == r.out);  // same seed, same bytes

  const RunResult other = run_cli(
      "corner --cone orthant --n 2 --degree 3 --samples 100 --seed 8");
  REQUIRE(other.exit_code == 0);
  CHECK(other.out != r.out);  // a different seed moves the witnesses
  CHECK(json::parse(other.out)["all_nonvanishing"] == true);
}

TEST_CASE("corner handles sector cones and space orthants") {
  const RunResult sector = run_cli(
      "corner --cone sector --theta1 0.3 --theta2 1.8 --degree 2 --samples 60");
  REQUIRE(sector.exit_code == 0);
  const json ds = json::parse(sector.out);
  CHECK(ds["metadata"]["config"]["cone"]["kind"] == "sector");
  CHECK(ds["reports"].size() == 2);
  CHECK(ds["all_nonvanishing"] == true);

  const RunResult space = run_cli("corner --cone orthant --n 3 --degree 2 --samples 40");
  REQUIRE(space.exit_code == 0);
  const json dv = json::parse(space.out);
  CHECK(dv["reports"].size() == 5);  // 2N+1 harmonics in three variables
  CHECK(dv["all_nonvanishing"] == true);
}

TEST_CASE("verify runs individual identity checks and reports residual ladders") {
  const RunResult green = run_cli("verify --identity green --n 2");
  REQUIRE(green.exit_code == 0);
  const json dg = json::parse(green.out);
  REQUIRE(dg["checks"].size() == 1);
  const json& g = dg["checks"][0];
  CHECK(g["identity"] == "green");
  CHECK(double(g["ratios"][0]) >= 8.0);
  CHECK(double(g["ratios"][1]) >= 8.0);
  CHECK(double(g["cancellation"]) < 1e-13);
  CHECK(double(g["compact_support"]) < 1e-4);
  CHECK(g["passed"] == true);
  CHECK(dg["all_passed"] == true);

  const RunResult conj = run_cli("verify --identity conjugation --K halfspace --n 3");
  REQUIRE(conj.exit_code == 0);
  const json dc = json::parse(conj.out);
  const json& c = dc["checks"][0];
  CHECK(c["model"] == "halfspace");
  CHECK(double(c["ratios"][0]) >= 3.5);
  CHECK(double(c["ratios"][1]) >= 3.5);
  CHECK(dc["all_passed"] == true);

  const RunResult sturm = run_cli("verify --identity sturm --n 2");
  REQUIRE(sturm.exit_code == 0);
  const json dsl = json::parse(sturm.out);
  CHECK(dsl["checks"][0]["identity"] == "sturm");
  CHECK(dsl["all_passed"] == true);
  for (const auto& s : dsl["checks"][0]["samples"]) CHECK(s["passed"] == true);
}
