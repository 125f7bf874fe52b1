#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "hdit/hdit.hpp"

using json = nlohmann::json;

namespace {

struct CliResult {
  int exit_code;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(HDIT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) {
    out.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, out};
}

void write_gaussian_csv(const std::string& path, int n, int p,
                        std::uint64_t seed, bool header = false,
                        bool degenerate_last_col = false) {
  hdit::Rng rng(seed);
  std::ofstream os(path);
  if (header) {
    for (int j = 0; j < p; ++j) os << (j ? ",x" : "x") << j;
    os << "\n";
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) {
      const double v = degenerate_last_col && j == p - 1
                           ? 1.0
                           : hdit::sample_normal(rng);
      os << (j ? "," : "") << v;
    }
    os << "\n";
  }
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

TEST_CASE("test subcommand emits one JSON report per method") {
  write_gaussian_csv("cli_data.csv", 30, 5, 11);
  const auto res = run_cli(
      "test --data cli_data.csv --groups 3,2 "
      "--methods bartlett,t0,alrt,t2,t3 --alpha 0.05");
  REQUIRE(res.exit_code == 0);
  const auto lines = lines_of(res.out);
  REQUIRE(lines.size() == 5);
  const std::vector<std::string> expect = {"bartlett", "clt_T0", "alrt_Zn",
                                           "trace_T2", "trace_T3"};
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const json j = json::parse(lines[i]);
    CHECK(j.at("name") == expect[i]);
    CHECK(j.contains("value"));
    CHECK(j.contains("p_value"));
    CHECK(j.at("alpha") == 0.05);
    CHECK(j.contains("reject_at_alpha"));
    CHECK(j.at("reference_law").contains("type"));
    const double p = j.at("p_value").get<double>();
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
  std::remove("cli_data.csv");
}

TEST_CASE("test subcommand handles a header row") {
  write_gaussian_csv("cli_header.csv", 25, 4, 12, true);
  const auto res =
      run_cli("test --data cli_header.csv --groups 2,2 --header");
  CHECK(res.exit_code == 0);
  const auto no_flag = run_cli("test --data cli_header.csv --groups 2,2");
  CHECK(no_flag.exit_code == 2);  // header row is non-numeric
  std::remove("cli_header.csv");
}

TEST_CASE("validation failures exit with code 2") {
  write_gaussian_csv("cli_val.csv", 20, 5, 13);
  CHECK(run_cli("test --data cli_val.csv --groups 3,3").exit_code == 2);
  CHECK(run_cli("test --data cli_val.csv --groups '3;2'").exit_code == 2);
  CHECK(run_cli("test --data cli_val.csv --groups 5").exit_code == 2);
  CHECK(run_cli("test --data missing.csv --groups 3,2").exit_code == 2);
  CHECK(run_cli("test --data cli_val.csv --groups 3,2 --methods nosuch")
            .exit_code == 2);
  // p >= n
  write_gaussian_csv("cli_wide.csv", 4, 5, 14);
  CHECK(run_cli("test --data cli_wide.csv --groups 3,2").exit_code == 2);
  std::remove("cli_val.csv");
  std::remove("cli_wide.csv");
}

TEST_CASE("numerical failures exit with code 3") {
  write_gaussian_csv("cli_degen.csv", 20, 5, 15, false, true);
  const auto res = run_cli("test --data cli_degen.csv --groups 3,2");
  CHECK(res.exit_code == 3);
  std::remove("cli_degen.csv");
}

TEST_CASE("oracle subcommand matches the in-process computation") {
  const auto res = run_cli("oracle --n 50 --groups 6,4 --h 1");
  REQUIRE(res.exit_code == 0);
  const json j = json::parse(res.out);
  const hdit::NullLawSpec spec(50, hdit::GroupPartition({6, 4}));
  CHECK(j.at("n") == 50);
  CHECK(j.at("groups") == "6,4");
  CHECK(std::fabs(j.at("log_moment").get<double>() -
                  hdit::exact_log_moment(spec, 1.0)) < 1e-12);

  const auto cmp = run_cli(
      "oracle --n 50 --groups 6,4 --h 1 --compare 20000 --seed 3");
  REQUIRE(cmp.exit_code == 0);
  const json jc = json::parse(cmp.out);
  CHECK(jc.at("reps") == 20000);
  CHECK(std::fabs(jc.at("z").get<double>()) < 5.0);
}

TEST_CASE("simulate subcommand writes the size/power CSV") {
  const auto res = run_cli(
      "simulate --model model1 --groups 6,4 --n 30 --c 0.2 --reps 200 "
      "--seed 5 --methods alrt,t2 --out cli_sim.csv");
  REQUIRE(res.exit_code == 0);
  std::ifstream is("cli_sim.csv");
  REQUIRE(is.good());
  std::string header;
  std::getline(is, header);
  CHECK(header == "model,q1,q2,n,c,alpha,method,reject_rate,se,reps,seed");
  std::vector<std::string> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty()) rows.push_back(line);
  }
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].rfind("model1,6,4,30,0.2,0.05,alrt_Zn,", 0) == 0);
  CHECK(rows[1].rfind("model1,6,4,30,0.2,0.05,trace_T2,", 0) == 0);
  std::remove("cli_sim.csv");

  CHECK(run_cli("simulate --model nosuch --groups 6,4 --n 30").exit_code == 2);
  CHECK(run_cli("simulate --model model1 --groups 2,2,2 --n 30").exit_code ==
        2);
}

TEST_CASE("nulldist subcommand writes bins and the overlay curve") {
  const auto res = run_cli(
      "nulldist --groups 3,2 --n 20 --stat bartlett --reps 500 --bins 20 "
      "--fast --seed 7 --out cli_hist.csv");
  REQUIRE(res.exit_code == 0);
  std::ifstream is("cli_hist.csv");
  REQUIRE(is.good());
  std::string header;
  std::getline(is, header);
  CHECK(header == "kind,x_left,x_right,density");
  int bin_rows = 0, curve_rows = 0;
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind("bin,", 0) == 0) ++bin_rows;
    if (line.rfind("curve,", 0) == 0) ++curve_rows;
  }
  CHECK(bin_rows == 20);
  CHECK(curve_rows == 201);
  std::remove("cli_hist.csv");

  CHECK(run_cli("nulldist --groups 3,2 --n 20 --stat t2 --reps 100")
            .exit_code == 2);
}
