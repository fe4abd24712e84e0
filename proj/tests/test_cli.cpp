#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd =
      std::string("\"") + RANDFLIGHT_CLI_PATH + "\" " + args + " 2>/dev/null";
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return res;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof(buf), pipe)) > 0)
    res.out.append(buf, got);
  const int status = pclose(pipe);
  if (WIFEXITED(status)) res.code = WEXITSTATUS(status);
  return res;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("two-step density grid is the uniform ball") {
  const auto res =
      run_cli("density --two-step --d 3 --a1 2 --b1 2 --grid 0:1:11");
  REQUIRE(res.code == 0);
  const auto lines = split(res.out, '\n');
  REQUIRE(lines.size() == 12);
  CHECK(lines[0] == "r,density");
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto cells = split(lines[k], ',');
    REQUIRE(cells.size() == 2);
    const double value = std::strtod(cells[1].c_str(), nullptr);
    CHECK(std::abs(value - 0.23873241463784300) < 1e-12);
  }
  // The endpoint r = ct is clamped just inside the ball.
  const auto last = split(lines.back(), ',');
  const double r_last = std::strtod(last[0].c_str(), nullptr);
  CHECK(r_last > 0.999);
  CHECK(r_last < 1.0);
}

TEST_CASE("simulate emits one csv row per sample and is reproducible") {
  const std::string cmd =
      "simulate --family Y --h 2 --i 1 --d 4 --n 3 --count 50 --seed 42";
  const auto res = run_cli(cmd);
  REQUIRE(res.code == 0);
  const auto lines = split(res.out, '\n');
  REQUIRE(lines.size() == 51);
  CHECK(lines[0] == "x_1,x_2,x_3,x_4,r,on_sphere,n_changes");
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto cells = split(lines[k], ',');
    REQUIRE(cells.size() == 7);
    const double r = std::strtod(cells[4].c_str(), nullptr);
    CHECK(r > 0.0);
    CHECK(r < 1.0);
    CHECK(cells[5] == "false");
    CHECK(cells[6] == "3");
  }
  const auto again = run_cli(cmd);
  CHECK(again.code == 0);
  CHECK(again.out == res.out);
}

TEST_CASE("unconditional simulation carries sphere atoms") {
  const auto res =
      run_cli("simulate --d 4 --lambda 1 --count 400 --seed 9");
  REQUIRE(res.code == 0);
  const auto lines = split(res.out, '\n');
  REQUIRE(lines.size() == 401);
  int atoms = 0;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto cells = split(lines[k], ',');
    if (cells[5] == "true") {
      ++atoms;
      CHECK(cells[6] == "0");
      const double r = std::strtod(cells[4].c_str(), nullptr);
      CHECK(std::abs(r - 1.0) < 1e-12);
    }
  }
  // P(atom) is about 0.582 at lambda t = 1; 400 draws stay within 5 sigma.
  CHECK(atoms > 180);
  CHECK(atoms < 290);
}

TEST_CASE("json output carries meta, columns and rows") {
  const auto res = run_cli(
      "density --family Y --h 2 --i 1 --d 4 --n 2 --grid 0:0.9:4 "
      "--format json");
  REQUIRE(res.code == 0);
  CHECK(res.out.rfind("{\"meta\":{", 0) == 0);
  CHECK(res.out.find("\"command\":\"density\"") != std::string::npos);
  CHECK(res.out.find("\"family\":\"Y\"") != std::string::npos);
  CHECK(res.out.find("\"columns\":[\"r\",\"density\"]") != std::string::npos);
  CHECK(res.out.find("\"rows\":[[") != std::string::npos);
  CHECK(res.out.back() == '\n');
}

TEST_CASE("output file matches stdout byte for byte") {
  const std::string path = "/tmp/randflight_cli_out.csv";
  std::remove(path.c_str());
  const std::string base =
      "cdf --family Y --h 2 --i 1 --d 4 --n 2 --grid 0:1:5";
  const auto to_stdout = run_cli(base);
  REQUIRE(to_stdout.code == 0);
  const auto to_file = run_cli(base + " --output " + path);
  REQUIRE(to_file.code == 0);
  CHECK(to_file.out.empty());
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == to_stdout.out);
  // CDF reaches 1 at z = ct.
  const auto lines = split(to_stdout.out, '\n');
  const auto last = split(lines.back(), ',');
  CHECK(std::strtod(last[1].c_str(), nullptr) == doctest::Approx(1.0));
  std::remove(path.c_str());
}

TEST_CASE("cf grid starts at one") {
  const auto res =
      run_cli("cf --family Z --h 2 --j 1 --d 4 --n 3 --grid 0:4:5");
  REQUIRE(res.code == 0);
  const auto lines = split(res.out, '\n');
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "rho,cf");
  const auto first = split(lines[1], ',');
  CHECK(std::strtod(first[1].c_str(), nullptr) == doctest::Approx(1.0));
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto cells = split(lines[k], ',');
    CHECK(std::abs(std::strtod(cells[1].c_str(), nullptr)) <= 1.0);
  }
}

TEST_CASE("moments agree with their monte carlo column") {
  const auto res =
      run_cli("moments --d 4 --lambda 1 --p 2 --count 20000 --seed 3");
  REQUIRE(res.code == 0);
  const auto lines = split(res.out, '\n');
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "p,analytic,monte_carlo,std_err");
  const auto cells = split(lines[1], ',');
  REQUIRE(cells.size() == 4);
  const double analytic = std::strtod(cells[1].c_str(), nullptr);
  const double mc = std::strtod(cells[2].c_str(), nullptr);
  const double se = std::strtod(cells[3].c_str(), nullptr);
  CHECK(std::abs(analytic - 0.83604658626134715) < 1e-12);
  CHECK(se > 0.0);
  CHECK(std::abs(mc - analytic) < 5.0 * se);
}

TEST_CASE("verify suite passes and reruns byte-identically") {
  const std::string cmd =
      "verify --suite gd-sampler --d 3 --n 2 --count 4000 --seed 7";
  const auto res = run_cli(cmd);
  REQUIRE(res.code == 0);
  CHECK(res.out.rfind("name,statistic,p_value,n_samples,verdict,level", 0) ==
        0);
  CHECK(res.out.find("false") == std::string::npos);
  const auto again = run_cli(cmd);
  CHECK(again.out == res.out);
}

TEST_CASE("exit codes distinguish failure classes") {
  // Validation problems exit 2.
  CHECK(run_cli("simulate --d 3 --n 2 --count 10").code == 2);
  CHECK(run_cli("density --family first --d 2 --n 2 --j 1 --grid 0:0.9:3")
            .code == 2);
  CHECK(run_cli("density --two-step --d 3 --a1 2 --b1 2 --grid 0:1:0")
            .code == 2);
  CHECK(run_cli("density --two-step --d 3 --a1 2 --b1 2 --grid 0:1:3 "
                "--format xml").code == 2);
  CHECK(run_cli("frobnicate").code == 2);
  // Numeric breakdown exits 3.
  CHECK(run_cli("moments --d 3 --lambda 1e5 --count 10 --seed 1").code == 3);
  // A failed statistical verification exits 4 but still writes the report.
  const auto failed = run_cli(
      "verify --suite solvable-second --h 2 --d 4 --n 2 --count 2000 "
      "--seed 5 --level 0.9999");
  CHECK(failed.code == 4);
  CHECK(failed.out.find("false") != std::string::npos);
}

}  // TEST_SUITE
