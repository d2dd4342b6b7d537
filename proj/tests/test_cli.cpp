#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = ouruin::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> rows(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    out.push_back(cells);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string exp_model = R"({"family":"exponential","params":{"eta":0.4,"delta":1}})";

}  // namespace

TEST_CASE("provenance header") {
  for (std::string cmd : {"ruin", "scale", "w-family", "oracle"}) {
    auto r = run({cmd, "--model", exp_model, "--seed", "5"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("# ou-ruin 0.1.0 cmd=" + cmd + " model=exponential seed=5\n", 0) == 0);
  }
}

TEST_CASE("strict validation and exit codes") {
  auto bad = run({"ruin", "--model", R"({"family":"exponential","params":{"eta":0.4,"dleta":1}})"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("dleta") != std::string::npos);
  CHECK(run({"ruin", "--model", R"({"family":"exponential","parms":{}})"}).code == 1);
  CHECK(run({"ruin", "--x", "abc"}).code == 1);
  CHECK(run({"ruin", "--no-such-flag"}).code == 1);
  CHECK(run({}).code == 1);
  CHECK(run({"ruin", "--model", "/nonexistent.json"}).code == 1);
  CHECK(run({"table1", "--model", R"({"family":"stable","params":{"alpha":0.5}})"}).code == 2);
  CHECK(run({"survival-series", "--t", "2"}).code == 2);
  CHECK(run({"survival-series", "--t", "2", "--N", "1", "--force-below-talpha"}).code == 0);
  CHECK(run({"oracle", "--model", R"({"family":"truncated_stable","params":{"C":1,"A":1,"alpha":0.5}})"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("ruin and exit trivial rows") {
  auto r = rows(run({"ruin", "--x", "1", "--c", "-1"}).out);
  REQUIRE(r.size() == 2);
  CHECK(r[1][3] == "1");
  auto e = rows(run({"exit", "--x", "3", "--a", "3", "--q", "0.2"}).out);
  REQUIRE(e.size() == 2);
  CHECK(e[1][3] == "1");
  CHECK(run({"exit", "--x", "1"}).code == 1);
}

TEST_CASE("probabilities lie in the unit interval") {
  for (auto args : std::vector<std::vector<std::string>>{{"ruin", "--x", "0.5,1,2,4", "--t", "1,5,inf"},
                                                         {"exit", "--x", "0.5,1,2", "--a", "3", "--q", "0.1"},
                                                         {"oracle", "--x", "0.5,2", "--t", "1,inf"}}) {
    auto r = rows(run(args).out);
    for (std::size_t i = 1; i < r.size(); ++i) {
      double v = std::stod(r[i][3 - (args[0] == "oracle" ? 1 : 0)]);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("table1 defaults") {
  auto r = run({"table1"});
  REQUIRE(r.code == 0);
  std::map<std::pair<int, double>, double> e;
  auto rs = rows(r.out);
  CHECK(rs[0] == std::vector<std::string>{"N", "t", "e"});
  for (std::size_t i = 1; i < rs.size(); ++i) e[{std::stoi(rs[i][0]), std::stod(rs[i][1])}] = std::stod(rs[i][2]);
  CHECK(e.size() == 45);
  CHECK(std::abs(e[{0, 3.0}] - 0.905) < 0.005);
  CHECK(std::abs(e[{9, 7.0}] - 0.033) <= 0.015);

  auto one = rows(run({"table1", "--t-values", "7"}).out);
  CHECK(one.size() == 10);
  for (std::size_t i = 1; i < one.size(); ++i) CHECK(one[i][1] == "7");
  auto table = run({"table1", "--format", "table", "--t-values", "7,10"}).out;
  CHECK(table.find("N \\ t") != std::string::npos);
}

TEST_CASE("figure1 data") {
  auto r = run({"figure1"});
  REQUIRE(r.code == 0);
  auto rs = rows(r.out);
  CHECK(rs[0] == std::vector<std::string>{"N", "x", "value", "partial_sum_raw"});
  std::map<std::string, std::vector<double>> x, raw;
  for (std::size_t i = 1; i < rs.size(); ++i) {
    x[rs[i][0]].push_back(std::stod(rs[i][1]));
    raw[rs[i][0]].push_back(std::stod(rs[i][3]));
  }
  for (std::string n : {"0", "1", "3", "6", "inf"}) {
    REQUIRE(x[n].size() == 126);
    CHECK(x[n].front() == 0.0);
    CHECK(std::abs(x[n].back() - 25.0) < 1e-12);
  }

  auto w = rows(run({"w-family", "--model", R"({"family":"truncated_stable","params":{"C":1,"A":1,"alpha":0.5}})"}).out);
  std::size_t k = 0;
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (std::stod(w[i][0]) < -1e-12) continue;
    REQUIRE(k < raw["0"].size());
    CHECK(std::abs(std::stod(w[i][1]) - raw["0"][k]) < 1e-9);
    ++k;
  }
  CHECK(k == 126);

  auto fine = rows(run({"figure1", "--grid-h", "0.1", "--grid-M", "250", "--N-values", "0"}).out);
  std::vector<double> ref_fine;
  for (std::size_t i = 1; i < fine.size(); ++i)
    if (fine[i][0] == "inf") ref_fine.push_back(std::stod(fine[i][3]));
  REQUIRE(ref_fine.size() == 251);
  double worst = 0.0;
  for (std::size_t i = 0; i < raw["inf"].size(); ++i) worst = std::max(worst, std::abs(raw["inf"][i] - ref_fine[2 * i]));
  CHECK(worst < 1e-3);
}

TEST_CASE("mc output is reproducible") {
  std::vector<std::string> args = {"mc", "--x", "1,2", "--t", "5", "--paths", "4000", "--seed", "17"};
  auto a = run(args), b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != run({"mc", "--x", "1,2", "--t", "5", "--paths", "4000", "--seed", "18"}).out);

  const std::string f1 = "cli_test_mc_1.csv", f2 = "cli_test_mc_2.csv", d = "cli_test_paths.csv";
  auto with_out = [&](const std::string& f) {
    auto v = args;
    v.insert(v.end(), {"--out", f, "--dump-paths", d});
    return run(v).code;
  };
  REQUIRE(with_out(f1) == 0);
  REQUIRE(with_out(f2) == 0);
  CHECK(read_file(f1) == read_file(f2));
  CHECK(read_file(f1) == a.out);
  CHECK(read_file(d).find("path_id,event_time,event_type,surplus_after") != std::string::npos);

  auto ex = rows(run({"mc", "--x", "1", "--a", "3", "--q", "0.1", "--paths", "4000"}).out);
  CHECK(ex[0][0] == "x");
  CHECK(ex[0][1] == "a");
  for (const auto& f : {f1, f2, d}) std::remove(f.c_str());
}
