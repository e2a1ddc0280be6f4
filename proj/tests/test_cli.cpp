#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

std::string cli_path() {
  const char* path = std::getenv("LORD_CLI");
  return path ? path : "";
}

int run(const std::string& args) {
  const std::string command = cli_path() + " " + args + " > cli_stdout.txt 2>&1";
  return std::system(command.c_str());
}

std::string slurp(const std::string& path) {
  std::ifstream file(path);
  std::stringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

std::vector<json> parse_jsonl(const std::string& path) {
  std::ifstream file(path);
  std::vector<json> records;
  std::string line;
  while (std::getline(file, line))
    if (!line.empty()) records.push_back(json::parse(line));
  return records;
}

}  // namespace

TEST_CASE("cli end-to-end pipeline" * doctest::skip(cli_path().empty())) {
  REQUIRE(run("synth --seed 11 --counts 30,30,30,30 --out cli_data.csv") == 0);

  SUBCASE("graph builds and reports its size") {
    REQUIRE(run("graph --input cli_data.csv --labels --out cli_graph.txt") ==
            0);
    const auto records = parse_jsonl("cli_stdout.txt");
    REQUIRE(records.size() == 2);
    CHECK(records[0]["record"] == "manifest");
    CHECK(records[1]["record"] == "graph");
    CHECK(records[1]["n"] == 120);
  }

  SUBCASE("cluster emits a full report and is byte-deterministic") {
    REQUIRE(run("graph --input cli_data.csv --labels --out cli_graph.txt") ==
            0);
    const std::string args =
        "cluster --graph cli_graph.txt --k 4 --seed 5 --inits 3 "
        "--tmax 400 --out cli_report.jsonl";
    REQUIRE(run(args) == 0);
    const std::string first = slurp("cli_report.jsonl");
    REQUIRE(run(args) == 0);
    CHECK(first == slurp("cli_report.jsonl"));

    const auto records = parse_jsonl("cli_report.jsonl");
    REQUIRE(records.size() >= 3);
    CHECK(records[0]["record"] == "manifest");
    CHECK(records[0]["config"]["seed"] == 5);
    CHECK(records[1]["record"] == "solve");
    bool saw_labels = false;
    for (const auto& record : records)
      if (record["record"] == "labels") {
        saw_labels = true;
        CHECK(record["labels"].size() == 120);
      }
    CHECK(saw_labels);
  }

  SUBCASE("cluster on the csv itself evaluates against the label column") {
    REQUIRE(run("cluster --input cli_data.csv --labels --k 4 --model blord "
                "--tau 0.5 --seed 5 --inits 3 --tmax 400 "
                "--out cli_report2.jsonl") == 0);
    bool saw_metrics = false;
    for (const auto& record : parse_jsonl("cli_report2.jsonl"))
      if (record["record"] == "metrics") {
        saw_metrics = true;
        CHECK(record["metrics"]["acc"].get<double>() > 0.25);
      }
    CHECK(saw_metrics);
  }

  SUBCASE("sweep-tau writes a csv with one row per grid point") {
    REQUIRE(run("sweep-tau --input cli_data.csv --labels --k 4 --seed 5 "
                "--inits 2 --grid 0.3,0.6,0.9 --out cli_sweep.csv") == 0);
    std::ifstream file("cli_sweep.csv");
    std::string line;
    std::getline(file, line);
    CHECK(line == "tau,objective,acc");
    int rows = 0;
    while (std::getline(file, line))
      if (!line.empty()) ++rows;
    CHECK(rows == 3);
  }

  SUBCASE("eval scores a prediction file against truth") {
    {
      std::ofstream pred("cli_pred.csv");
      std::ofstream truth("cli_truth.csv");
      for (int i = 0; i < 20; ++i) {
        pred << (i / 5 + 1) % 4 << "\n";  // permuted names, perfect match
        truth << i / 5 << "\n";
      }
    }
    REQUIRE(run("eval --pred cli_pred.csv --truth cli_truth.csv") == 0);
    const auto records = parse_jsonl("cli_stdout.txt");
    REQUIRE(records.size() == 1);
    CHECK(records[0]["acc"] == 1.0);
    CHECK(records[0]["nmi"] == 1.0);
  }

  SUBCASE("missing seed is a hard error") {
    CHECK(run("cluster --graph cli_graph.txt --k 4 --out x.jsonl") != 0);
  }

  SUBCASE("bad input reports a json error record") {
    CHECK(run("cluster --input no_such_file.csv --k 4 --seed 1") != 0);
    const auto records = parse_jsonl("cli_stdout.txt");
    bool saw_error = false;
    for (const auto& record : records)
      if (record.contains("record") && record["record"] == "error")
        saw_error = true;
    CHECK(saw_error);
  }
}
