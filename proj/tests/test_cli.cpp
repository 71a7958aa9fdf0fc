// Runs the built command-line tool and checks its files and exit status.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "reference_values.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(V2VLAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::current_path() / "cli_out" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string out_flag(const fs::path& dir) { return "--out " + dir.string(); }

}  // namespace

TEST_CASE("tables reproduce the published grid") {
  const auto dir = fresh_dir("tables");
  REQUIRE(run("tables " + out_flag(dir)) == 0);
  std::istringstream cap(slurp(dir / "capacity.csv"));
  std::string line;
  std::getline(cap, line);
  CHECK(line == "D_m,N=2,N=4,N=6,N=8");
  for (std::size_t i = 0; i < 6; ++i) {
    REQUIRE(std::getline(cap, line));
    char buf[128];
    std::snprintf(buf, sizeof buf, "%g,%.4f,%.4f,%.4f,%.4f", v2vlab::reference::kGaps[i],
                  v2vlab::reference::kCapacity[i][0], v2vlab::reference::kCapacity[i][1],
                  v2vlab::reference::kCapacity[i][2], v2vlab::reference::kCapacity[i][3]);
    CHECK(line == buf);
  }

  const auto single = fresh_dir("tables_single");
  REQUIRE(run("tables --gaps 6 --lanes 8 " + out_flag(single)) == 0);
  CHECK(slurp(single / "capacity.csv") == "D_m,N=8\n6,0.0151\n");
  CHECK(slurp(single / "delay.csv") == "D_m,N=8\n6,211.7531\n");

  const auto json_dir = fresh_dir("tables_json");
  REQUIRE(run("tables --format json " + out_flag(json_dir)) == 0);
  CHECK(fs::exists(json_dir / "tables.json"));
}

TEST_CASE("classify writes 26 rows") {
  const auto dir = fresh_dir("classify");
  REQUIRE(run("classify " + out_flag(dir)) == 0);
  std::istringstream csv(slurp(dir / "classification.csv"));
  std::string line;
  int rows = -1;
  bool pcs_v2v = false, rvs_cellular = false;
  while (std::getline(csv, line)) {
    ++rows;
    if (line.rfind("PCS,", 0) == 0) pcs_v2v = line.substr(line.rfind(',') + 1) == "V2V";
    if (line.rfind("RVS,", 0) == 0) rvs_cellular = line.substr(line.rfind(',') + 1) == "Cellular";
  }
  CHECK(rows == 26);
  CHECK(pcs_v2v);
  CHECK(rvs_cellular);
}

TEST_CASE("feasibility files and empty grid") {
  const auto dir = fresh_dir("feasibility");
  REQUIRE(run("feasibility " + out_flag(dir)) == 0);
  CHECK(slurp(dir / "feasibility.csv").find("EBL,6,8,") != std::string::npos);

  const auto empty = fresh_dir("feasibility_empty");
  std::ofstream(empty / "scenario.json") << R"({"sweep": {"gaps": []}})";
  REQUIRE(run("feasibility --scenario " + (empty / "scenario.json").string() + " " + out_flag(empty)) == 0);
  CHECK(slurp(empty / "feasibility.csv") ==
        "app,D,N,delay_ms,latency_bound_ms,latency_ok,capacity_mbps,demand_mbps,throughput_ok,verdict\n");
}

TEST_CASE("simulate is byte-identical across repeated runs") {
  for (const std::string mac : {"tdma", "contention"}) {
    const auto a = fresh_dir("sim_a_" + mac);
    const auto b = fresh_dir("sim_b_" + mac);
    const std::string args = "simulate --mac " + mac + " --gaps 100 --lanes 2 --seed 11 ";
    REQUIRE(run(args + out_flag(a)) == 0);
    REQUIRE(run(args + out_flag(b)) == 0);
    for (const char* f : {"sim_outcome.json", "sim_outcome.csv", "compare.json"})
      CHECK_MESSAGE(slurp(a / f) == slurp(b / f), f);
  }
}

TEST_CASE("exit status contract") {
  const auto dir = fresh_dir("errors");
  CHECK(run("tables --gaps -1 " + out_flag(dir)) == 2);
  CHECK(run("tables --scenario /nonexistent.json " + out_flag(dir)) == 2);  // rejected by the option check
  std::ofstream(dir / "bad.json") << R"({"unknown": 1})";
  CHECK(run("tables --scenario " + (dir / "bad.json").string() + " " + out_flag(dir)) == 2);
  std::ofstream(dir / "blocker") << "x";
  CHECK(run("tables --out " + (dir / "blocker" / "sub").string()) == 4);
  CHECK(run("nonsense") == 2);
  CHECK(run("simulate --gaps 6,20 " + out_flag(dir)) == 2);
}
