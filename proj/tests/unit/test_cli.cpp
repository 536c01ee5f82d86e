#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(PLANTSCHED_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("small pipeline") {
    const auto root = fs::temp_directory_path() / "plantsched_cli_test";
    fs::remove_all(root);
    fs::create_directories(root);
    const auto d = [&](const char* name) { return (root / name).string(); };

    REQUIRE(run("--out " + d("synth") + " --seed 4 synth --populations 25 --first-year 2012") == 0);
    const auto manifest = nlohmann::json::parse(slurp(root / "synth" / "manifest.json"));
    CHECK(manifest["seed"] == 4);
    CHECK(manifest["command"] == "synth");

    REQUIRE(run("--out " + d("model") + " forecast --history " + d("synth") + "/history.csv --epochs 1 --no-cv") == 0);
    CHECK(fs::exists(root / "model" / "model.bin"));
    REQUIRE(run("--out " + d("scen") + " scenarios --model " + d("model") + "/model.bin --history " + d("synth") +
                "/history.csv --count 3 --gp-points 100") == 0);
    CHECK(fs::exists(root / "scen" / "scenarios.csv"));

    const auto pops = d("synth") + "/populations.csv";
    REQUIRE(run("--out " + d("plan") + " schedule --populations " + pops + " --scenarios " + d("scen") +
                " --mode case2 --engine heuristic --iterations 20000") == 0);
    const auto report = nlohmann::json::parse(slurp(root / "plan" / "report.json"));
    CHECK(report["capacity_feasible"] == true);
    CHECK(report.contains("min_capacity"));
    CHECK(slurp(root / "plan" / "schedule.csv").rfind("population,site,plant_date,expected_harvest_week", 0) == 0);

    CHECK(run("--out " + d("eval") + " evaluate --populations " + pops + " --scenarios " + d("scen") + " --schedule " +
              d("plan") + "/schedule.csv --capacity 1000000") == 0);
    const auto eval = nlohmann::json::parse(slurp(root / "eval" / "report.json"));
    CHECK(eval["max_required_capacity"] == report["max_required_capacity"]);

    // infeasible capacity
    CHECK(run("--out " + d("tight") + " schedule --populations " + pops + " --scenarios " + d("scen") +
              " --mode case1 --engine heuristic --capacity 1 --iterations 2000") == 3);
    // renamed header plus integer planting indices
    {
      std::ofstream f(root / "renamed.csv");
      f << "name,site,early_plant,late_plant,required_gdu,quantity\nx,0,10,20,900,50\n";
      std::ofstream g(root / "renamed_plan.csv");
      g << "population,site,plant_date,expected_harvest_week\nx,0,2020-02-15,0\n";
    }
    const auto renamed_args = " evaluate --populations " + d("renamed.csv") + " --scenarios " + d("scen") +
                              " --schedule " + d("renamed_plan.csv");
    CHECK(run("--out " + d("renamed") + " --map name=id --epoch 2020-02-01" + renamed_args) == 0);
    CHECK(run("--out " + d("renamed") + " --epoch 2020-02-01" + renamed_args) == 2);
    CHECK(run("--out " + d("renamed") + " --map name=id" + renamed_args) == 2);
    fs::remove_all(root);
  }

  TEST_CASE("bad input exits with code 2") {
    CHECK(run("forecast --history /nonexistent/history.csv") == 2);
    CHECK(run("--threads 0 synth") == 2);
    CHECK(run("") == 2);
  }
}
