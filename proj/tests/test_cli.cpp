#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the installed CLI with the given argument string, capturing both
// streams and the exit code.
RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path base = fs::temp_directory_path() / ("alqes_cli_" + std::to_string(counter++));
  const fs::path out = base.string() + ".out";
  const fs::path err = base.string() + ".err";
  const std::string cmd =
      std::string(ALQES_CLI_PATH) + " " + args + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  fs::remove(out);
  fs::remove(err);
  return r;
}

double delta9(double m) { return std::sqrt(4.0 - 4.0 * m + 25.0 * m * m); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("solve emits the integer-case document as json") {
  const RunResult r = run_cli("solve --a 2 --b 1 --m 0.5 --shift paper");
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);

  CHECK(doc["params"]["a"] == "2");
  CHECK(doc["params"]["b"] == "1");
  CHECK(doc["params"]["m"] == 0.5);
  CHECK(doc["params"]["shift"] == -2.0);

  REQUIRE(doc["records"].size() == 4);
  CHECK(doc["records"][0]["set_id"] == 1);
  CHECK(doc["records"][0]["n"] == -1);
  CHECK(doc["records"][0]["admissible"] == false);
  CHECK(doc["records"][1]["admissible"] == true);
  CHECK(doc["records"][1]["li_count"] == 2);

  REQUIRE(doc["solutions"].size() == 5);
  const double m = 0.5;
  const double expected[] = {0.0, 5.0 - 3.0 * m - 2.0 * std::sqrt(4.0 - 3.0 * m),
                             5.0 - 2.0 * m - 2.0 * std::sqrt(m * m - 5.0 * m + 4.0),
                             5.0 - 2.0 * m + 2.0 * std::sqrt(m * m - 5.0 * m + 4.0),
                             5.0 - 3.0 * m + 2.0 * std::sqrt(4.0 - 3.0 * m)};
  for (size_t i = 0; i < 5; ++i) {
    CHECK(std::abs(doc["solutions"][i]["energy"].get<double>() - expected[i]) <=
          1e-10 * std::max(1.0, std::abs(expected[i])));
    CHECK(doc["solutions"][i]["degeneracy_group"].is_null());
  }
  CHECK(doc["solutions"][0]["eigenfunction"] == "dn(x)^{2} P0(sn x)");
  CHECK(doc["solutions"][0]["period_class"] == "2K");
  CHECK(doc["solutions"][1]["period_class"] == "4K");
  CHECK(!doc.contains("verification"));
}

TEST_CASE("solve reports the degenerate group in the half-integer case") {
  const RunResult r = run_cli("solve --a 7/2 --b 1/2 --m 0.5 --shift paper");
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  REQUIRE(doc["solutions"].size() == 5);
  for (size_t i = 0; i < 3; ++i) CHECK(doc["solutions"][i]["degeneracy_group"].is_null());
  CHECK(doc["solutions"][3]["degeneracy_group"] == 0);
  CHECK(doc["solutions"][4]["degeneracy_group"] == 0);

  const double m = 0.5;
  const double top = 14.0 - 7.0 * m + delta9(m);
  CHECK(std::abs(doc["solutions"][3]["energy"].get<double>() - top) <= 1e-9);
  CHECK(std::abs(doc["solutions"][4]["energy"].get<double>() - top) <= 1e-9);
  CHECK(std::abs(doc["solutions"][1]["energy"].get<double>() - (delta9(m) - m + 2.0)) <= 1e-9);

  // The degenerate pair consists of the two published distinct shapes.
  const std::string fa = doc["solutions"][3]["eigenfunction"].get<std::string>();
  const std::string fb = doc["solutions"][4]["eigenfunction"].get<std::string>();
  CHECK(fa != fb);
  CHECK((fa == "dn(x)^{-1/2} P4(sn x)" || fb == "dn(x)^{-1/2} P4(sn x)"));
  CHECK((fa == "cn(x) dn(x)^{-1/2} P3(sn x)" || fb == "cn(x) dn(x)^{-1/2} P3(sn x)"));
}

TEST_CASE("json output is byte-stable across runs") {
  const RunResult a = run_cli("solve --a 7/2 --b 1/2 --m 0.5 --shift paper");
  const RunResult b = run_cli("solve --a 7/2 --b 1/2 --m 0.5 --shift paper");
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
}

TEST_CASE("text and json modes agree on every energy") {
  const RunResult j = run_cli("solve --a 2 --b 1 --m 0.3 --shift paper");
  const RunResult t = run_cli("solve --a 2 --b 1 --m 0.3 --shift paper --format text");
  REQUIRE(j.code == 0);
  REQUIRE(t.code == 0);
  CHECK(t.out.find("band edges (5)") != std::string::npos);
  for (const auto& s : json::parse(j.out)["solutions"]) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", s["energy"].get<double>());
    CHECK(t.out.find(buf) != std::string::npos);
  }
}

TEST_CASE("solve text mode mirrors the published table layout") {
  const RunResult r = run_cli("solve --a 2 --b 1 --m 0.5 --shift paper --format text");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("residue sets") != std::string::npos);
  CHECK(r.out.find("V(x) = 6 m sn^2(x) + 2 m cn^2(x)/dn^2(x) + shift") != std::string::npos);
  // Set 1 terminates at n = -1 and is shown discarded.
  CHECK(r.out.find("1    3/4  5/4   -1  -") != std::string::npos);
  CHECK(r.out.find("cn(x) dn(x)^{-1} P2(sn x)") != std::string::npos);
}

TEST_CASE("verify passes both published cases and exits zero") {
  const RunResult a = run_cli("verify --a 2 --b 1 --m 0.5 --shift paper");
  CHECK(a.code == 0);
  CHECK(a.out.find("result: PASS (5/5 energies)") != std::string::npos);

  const RunResult b = run_cli("verify --a 7/2 --b 1/2 --m 0.5 --shift paper --format json");
  CHECK(b.code == 0);
  const json doc = json::parse(b.out);
  REQUIRE(doc.contains("verification"));
  CHECK(doc["verification"]["steps"] == 20000);
  CHECK(doc["verification"]["all_passed"] == true);
  REQUIRE(doc["verification"]["entries"].size() == 5);
  CHECK(doc["verification"]["entries"][3]["tangential"] == true);
  CHECK(doc["verification"]["entries"][4]["tangential"] == true);
  CHECK(doc["verification"]["entries"][0]["tangential"] == false);
  for (const auto& e : doc["verification"]["entries"]) {
    CHECK(e["passed"] == true);
    CHECK(e["edge_distance"].get<double>() <= 1e-6);
  }
}

TEST_CASE("verify tolerates deliberate under-resolution") {
  const RunResult r = run_cli("verify --a 2 --b 1 --m 0.5 --shift paper --steps 500");
  CHECK((r.code == 0 || r.code == 1));  // resolution-limited, never an input error
  CHECK(r.out.find("crosscheck (steps = 500)") != std::string::npos);
}

TEST_CASE("bands emits plot-ready csv") {
  const RunResult r = run_cli("bands --a 2 --b 1 --m 0.5 --shift paper --emin 0 --emax 1 --samples 5");
  REQUIRE(r.code == 0);
  CHECK(r.out.find('\r') == std::string::npos);
  std::istringstream lines(r.out);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "energy,delta");
  int rows = 0;
  double first_delta = 0.0;
  while (std::getline(lines, line)) {
    double e = 0.0, d = 0.0;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf", &e, &d) == 2);
    if (rows == 0) {
      CHECK(e == 0.0);
      first_delta = d;
    }
    ++rows;
  }
  CHECK(rows == 5);
  // E = 0 is a 2K-periodic band edge: delta = +2 there.
  CHECK(std::abs(first_delta - 2.0) <= 1e-6);
}

TEST_CASE("bands --out writes the same bytes as standard output") {
  const fs::path target = fs::temp_directory_path() / "alqes_bands_out.csv";
  const std::string span = "--a 2 --b 1 --m 0.5 --shift paper --emin -1 --emax 2 --samples 7";
  const RunResult direct = run_cli("bands " + span);
  const RunResult filed = run_cli("bands " + span + " --out " + target.string());
  REQUIRE(direct.code == 0);
  REQUIRE(filed.code == 0);
  CHECK(filed.out.empty());
  CHECK(slurp(target) == direct.out);
  fs::remove(target);
}

TEST_CASE("a span inside a forbidden region has |delta| > 2 throughout") {
  const RunResult r = run_cli("bands --a 2 --b 1 --m 0.5 --shift paper --emin 0.5 --emax 1.2 --samples 8");
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    double e = 0.0, d = 0.0;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf", &e, &d) == 2);
    CHECK(std::abs(d) > 2.0);
  }
}

TEST_CASE("tables reproduces the published layouts") {
  const RunResult t4 = run_cli("tables --which 4 --m 0.5");
  REQUIRE(t4.code == 0);
  CHECK(t4.out.find("5 - 3m - 2 sqrt(4-3m)") != std::string::npos);
  CHECK(t4.out.find("dn(x)^{2}") != std::string::npos);
  CHECK(t4.out.find("1    3/4  5/4   -1  -") != std::string::npos);  // discarded set 1

  const RunResult t5 = run_cli("tables --which 5 --m 0.5");
  REQUIRE(t5.code == 0);
  CHECK(t5.out.find("delta9 = sqrt(4 - 4m + 25 m^2) = 2.8722813232690143") != std::string::npos);
  CHECK(t5.out.find("dn(x)^{-1/2} (1 - 8 sn^2(x) cn^2(x))") != std::string::npos);
  CHECK(t5.out.find("14 - 7m + delta9") != std::string::npos);
  // Set 4 carries three band-edge eigenfunctions.
  const size_t set4 = t5.out.find("\n  4    1/4  0   4  3");
  REQUIRE(set4 != std::string::npos);
  CHECK(t5.out.find("2 delta9", set4) != std::string::npos);

  const RunResult j4 = run_cli("tables --which 4 --m 0.5 --format json");
  REQUIRE(j4.code == 0);
  const json doc = json::parse(j4.out);
  REQUIRE(doc["sets"].size() == 4);
  CHECK(doc["sets"][0]["admissible"] == false);
  CHECK(doc["sets"][3]["rows"].size() == 2);
}

TEST_CASE("invalid inputs exit with code 2 and a one-line reason") {
  struct Case {
    const char* args;
    const char* message;
  };
  const Case cases[] = {
      {"solve --a 2 --b 1/2 --m 0.5", "error: mixed integer/half-integer case unsupported"},
      {"solve --a 2 --b 1 --m 1.0", "error: elliptic parameter m must lie in [0, 1)"},
      {"solve --a 2.5 --b 1 --m 0.5",
       "error: --a must be a rational such as 2 or 7/2 (decimals rejected)"},
      {"solve --a 3 --b 1 --m 0.5 --shift paper",
       "error: --shift paper is only published for (a, b) = (2, 1) and (7/2, 1/2)"},
      {"solve --a 2 --b 1 --m 0.5 --shift abc",
       "error: --shift must be a real number or the literal 'paper'"},
      {"solve --a 1 --b 2 --m 0.5", "error:"},
      {"tables --which 3 --m 0.5", "error: no such table: 3 (supported: 4, 5)"},
      {"bands --a 2 --b 1 --m 0.5 --emin 0 --emax 1 --out /nonexistent-dir/x.csv",
       "error: cannot write /nonexistent-dir/x.csv"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.args);
    const RunResult r = run_cli(c.args);
    CHECK(r.code == 2);
    CHECK(r.err.find(c.message) != std::string::npos);
  }
  // Missing required flags are CLI parse errors, also exit code 2.
  CHECK(run_cli("solve --a 2 --m 0.5").code == 2);
  CHECK(run_cli("verify").code == 2);
}

}  // TEST_SUITE
