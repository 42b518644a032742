#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "disca/cli.hpp"

using namespace disca;
namespace fs = std::filesystem;

namespace {
struct CliRun {
  int exit_code;
  std::string out;
  std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("disca_cli_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};
}  // namespace

TEST_CASE("usage errors exit with code 2") {
  REQUIRE(run_cli({"--definitely-not-a-flag"}).exit_code == 2);
  REQUIRE(run_cli({"matmul", "--rows", "-3"}).exit_code == 2);
  REQUIRE(run_cli({}).exit_code == 2);
  REQUIRE(run_cli({"--help"}).exit_code == 0);
}

TEST_CASE("codes derive then check round-trips through a file") {
  TempDir dir;
  fs::path table = dir.path / "table.json";
  CliRun derive = run_cli({"codes", "derive", "--seed", "0", "--out", table.string()});
  REQUIRE(derive.exit_code == 0);
  CliRun check = run_cli({"codes", "check", "--table", table.string()});
  REQUIRE(check.exit_code == 0);
  REQUIRE_THAT(check.out, Catch::Matchers::ContainsSubstring("table check passed"));

  SECTION("width 8 output keeps the implicit bits") {
    fs::path t8 = dir.path / "table8.json";
    REQUIRE(run_cli({"codes", "derive", "--width", "8", "--out", t8.string()}).exit_code == 0);
    REQUIRE(run_cli({"codes", "check", "--table", t8.string()}).exit_code == 0);
  }
}

TEST_CASE("codes check rejects a popcount-violating table naming the digit") {
  TempDir dir;
  fs::path table = dir.path / "broken.json";
  nlohmann::ordered_json j = table_to_json(default_code_table());
  j["left"][6] = "1110000000";  // three ones filed under digit 6
  std::ofstream(table) << j.dump(2);
  CliRun check = run_cli({"codes", "check", "--table", table.string()});
  REQUIRE(check.exit_code == 1);
  REQUIRE_THAT(check.err, Catch::Matchers::ContainsSubstring("digit 6"));
}

TEST_CASE("codes show prints the product grid with absorbing zero row and column") {
  CliRun show = run_cli({"codes", "show"});
  REQUIRE(show.exit_code == 0);
  REQUIRE_THAT(show.out, Catch::Matchers::ContainsSubstring("product popcounts"));
  // first grid row is all zeros
  auto pos = show.out.find("product popcounts");
  auto line_start = show.out.find('\n', pos) + 1;
  auto line_end = show.out.find('\n', line_start);
  REQUIRE(show.out.substr(line_start, line_end - line_start) == "  0 0 0 0 0 0 0 0 0 0");
}

TEST_CASE("encode prints the requested code") {
  CliRun enc = run_cli({"encode", "--digit", "5", "--bias", "left"});
  REQUIRE(enc.exit_code == 0);
  REQUIRE_THAT(enc.out, Catch::Matchers::ContainsSubstring(kDefaultLeftCodes[5]));
  CliRun enc8 = run_cli({"encode", "--digit", "9", "--bias", "right", "--width", "8"});
  REQUIRE(enc8.exit_code == 0);
  REQUIRE_THAT(enc8.out, Catch::Matchers::ContainsSubstring("implicit_left"));
}

TEST_CASE("the DISCA_TABLE environment variable supplies the default table") {
  TempDir dir;
  fs::path table = dir.path / "env_table.json";
  save_code_table(table.string(), thermometer_code_table());
  ::setenv(cli::kTableEnvVar, table.string().c_str(), 1);
  CliRun show = run_cli({"codes", "show"});
  ::unsetenv(cli::kTableEnvVar);
  REQUIRE(show.exit_code == 0);
  REQUIRE_THAT(show.out, Catch::Matchers::ContainsSubstring("thermometer baseline"));
}

TEST_CASE("the 64x64x64 seed-0 run matches its committed golden artifacts") {
  TempDir dir;
  CliRun r = run_cli({"matmul", "--rows", "64", "--inner", "64", "--cols", "64", "--seed", "0",
                      "--out", dir.path.string()});
  REQUIRE(r.exit_code == 0);
  fs::path golden = fs::path(DISCA_SOURCE_DIR) / "tests/golden/matmul_64_seed0";
  for (const char* name : {"O.csv", "O_int.csv", "report.txt"})
    REQUIRE(slurp(dir.path / name) == slurp(golden / name));
}

TEST_CASE("matmul runs are reproducible byte for byte") {
  TempDir dir;
  fs::path a = dir.path / "a", b = dir.path / "b";
  std::vector<std::string> base{"matmul", "--rows", "6",    "--inner", "40",
                                "--cols", "5",      "--seed", "3"};
  auto with_out = [&](const fs::path& p) {
    auto v = base;
    v.push_back("--out");
    v.push_back(p.string());
    return v;
  };
  REQUIRE(run_cli(with_out(a)).exit_code == 0);
  REQUIRE(run_cli(with_out(b)).exit_code == 0);
  REQUIRE(slurp(a / "O.csv") == slurp(b / "O.csv"));
  REQUIRE(slurp(a / "O_int.csv") == slurp(b / "O_int.csv"));
  REQUIRE(slurp(a / "report.txt") == slurp(b / "report.txt"));
}

TEST_CASE("matmul emits traces and csv reports on request") {
  TempDir dir;
  CliRun r = run_cli({"matmul", "--rows", "2", "--inner", "32", "--cols", "3", "--seed", "1",
                      "--out", dir.path.string(), "--format", "csv", "--trace"});
  REQUIRE(r.exit_code == 0);
  REQUIRE(fs::exists(dir.path / "report.csv"));
  std::string trace = slurp(dir.path / "trace.txt");
  REQUIRE_THAT(trace, Catch::Matchers::ContainsSubstring("LATCH 64"));
  REQUIRE_THAT(trace, Catch::Matchers::ContainsSubstring("AND 64 0"));
  std::string report = slurp(dir.path / "report.csv");
  REQUIRE_THAT(report, Catch::Matchers::ContainsSubstring("scmul,6"));
}

TEST_CASE("matmul with explicit digit matrices in a job file") {
  TempDir dir;
  fs::path job = dir.path / "job.json";
  std::ofstream(job) << R"({
    "lhs_digits": [[9,9],[0,9]],
    "rhs_digits": [[9,0],[9,9]],
    "scale_l": 1.0,
    "scale_u": 1.0
  })";
  CliRun r = run_cli({"matmul", "--job", job.string(), "--out", dir.path.string()});
  REQUIRE(r.exit_code == 0);
  // O_int[0][0] = two nine-by-nine products
  std::string oint = slurp(dir.path / "O_int.csv");
  int pair = mul_popcount(default_code_table().code(BPDigit(9), Bias::LeftBiased),
                          default_code_table().code(BPDigit(9), Bias::RightBiased));
  REQUIRE_THAT(oint, Catch::Matchers::StartsWith(std::to_string(2 * pair) + ","));
}

TEST_CASE("matmul with explicit real matrices quantizes at the given fixed scales") {
  TempDir dir;
  fs::path job = dir.path / "job.json";
  std::ofstream(job) << R"({
    "lhs": [[0.9, 0.2, 0.5]],
    "rhs": [[0.4], [0.8], [0.1]],
    "scale_l": 1.0,
    "scale_u": 1.0
  })";
  CliRun r = run_cli({"matmul", "--job", job.string(), "--out", dir.path.string()});
  REQUIRE(r.exit_code == 0);
  std::string report = slurp(dir.path / "report.txt");
  REQUIRE_THAT(report, Catch::Matchers::ContainsSubstring("scales: L=1 U=1"));
  // exact product is 0.57; a one-chunk BP8 job stays within the pair-error bound
  double approx = std::stod(slurp(dir.path / "O.csv"));
  REQUIRE(std::abs(approx - 0.57) <= 3 * 0.05);
}

TEST_CASE("degenerate matmul produces empty artifacts and zero energy") {
  TempDir dir;
  CliRun r = run_cli({"matmul", "--rows", "0", "--inner", "0", "--cols", "0", "--out",
                      dir.path.string()});
  REQUIRE(r.exit_code == 0);
  REQUIRE(slurp(dir.path / "O.csv").empty());
  REQUIRE_THAT(slurp(dir.path / "report.txt"),
               Catch::Matchers::ContainsSubstring("scmul=0"));
}

TEST_CASE("bench reproduces the headline figures") {
  CliRun r = run_cli({"bench", "--format", "csv"});
  REQUIRE(r.exit_code == 0);
  REQUIRE_THAT(r.out, Catch::Matchers::ContainsSubstring("mac_fj_per_bit,557.43"));
  REQUIRE_THAT(r.out, Catch::Matchers::ContainsSubstring("tops_per_watt_per_bit,3.58"));
  REQUIRE_THAT(r.out, Catch::Matchers::ContainsSubstring("ideal_tops_per_bit,8.192"));
  REQUIRE_THAT(r.out, Catch::Matchers::ContainsSubstring("effective_tops_per_bit,7.9"));

  SECTION("node scaling shows the two-orders gain") {
    CliRun n = run_cli({"bench", "--node", "22nm"});
    REQUIRE(n.exit_code == 0);
    REQUIRE_THAT(n.out, Catch::Matchers::ContainsSubstring("x vs 180nm"));
    CliRun bad = run_cli({"bench", "--node", "3nm"});
    REQUIRE(bad.exit_code == 1);
    REQUIRE_THAT(bad.err, Catch::Matchers::ContainsSubstring("unknown technology node"));
  }
  SECTION("subarray count scales throughput proportionally") {
    CliRun one = run_cli({"bench", "--subarrays", "1", "--format", "csv"});
    REQUIRE_THAT(one.out, Catch::Matchers::ContainsSubstring("ideal_tops_per_bit,0.256"));
  }
  SECTION("constant overrides feed the whole chain") {
    CliRun half = run_cli({"bench", "--scmul-fj", "150.5", "--format", "csv"});
    REQUIRE_THAT(half.out, Catch::Matchers::ContainsSubstring("scmul_fj_per_bit,150.5"));
  }
}

TEST_CASE("trace subcommand emits the figure-style sweep") {
  CliRun r = run_cli({"trace", "--mem-rows", "8", "--l-rows", "1", "--u-rows", "2"});
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out == "LATCH 4\nAND 4 0\nAND 4 1\n");
}

TEST_CASE("verify passes on a clean build and fails on perturbed inputs") {
  CliRun ok = run_cli({"verify"});
  REQUIRE(ok.exit_code == 0);
  REQUIRE_THAT(ok.out, Catch::Matchers::ContainsSubstring("verify passed"));

  SECTION("perturbed energy constants break the reproduction check") {
    TempDir dir;
    fs::path constants = dir.path / "constants.json";
    EnergyConstants c;
    c.scmul_fj_per_bit = 280.0;
    std::ofstream(constants) << constants_to_json(c).dump(2);
    CliRun bad = run_cli({"verify", "--constants", constants.string()});
    REQUIRE(bad.exit_code == 1);
    REQUIRE_THAT(bad.out, Catch::Matchers::ContainsSubstring("FAIL  energy figures reproduce"));
  }
  SECTION("a corrupted table file fails verification") {
    TempDir dir;
    fs::path table = dir.path / "corrupt.json";
    nlohmann::ordered_json j = table_to_json(default_code_table());
    j["right"][9] = "1111111100";  // eight ones filed under digit 9
    std::ofstream(table) << j.dump(2);
    CliRun bad = run_cli({"verify", "--table", table.string()});
    REQUIRE(bad.exit_code == 1);
    REQUIRE_THAT(bad.err, Catch::Matchers::ContainsSubstring("digit 9"));
  }
}
