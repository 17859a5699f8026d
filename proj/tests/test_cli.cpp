#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include <doctest.h>

namespace {

namespace fs = std::filesystem;

const std::string kCli = TROLLEYLOC_CLI_PATH;

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = kCli + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) r.output += buf.data();
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("single scenario run prints one line per method") {
  const RunResult r = run_cli("--methods uwb");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("uwb") != std::string::npos);
  CHECK(r.output.find("gt=") != std::string::npos);
  std::size_t lines = 0;
  for (char c : r.output) lines += c == '\n' ? 1 : 0;
  CHECK(lines == 1);
}

TEST_CASE("missing config file exits with code 2") {
  const RunResult r = run_cli("--config /does/not/exist.json");
  CHECK(r.exit_code == 2);
}

TEST_CASE("unknown method exits with code 2") {
  const RunResult r = run_cli("--methods sonar");
  CHECK(r.exit_code == 2);
}

TEST_CASE("unknown flag is rejected") {
  const RunResult r = run_cli("--frobnicate");
  CHECK(r.exit_code != 0);
}

TEST_CASE("repeated seed reproduces identical output") {
  const RunResult a = run_cli("--seed 123");
  const RunResult b = run_cli("--seed 123");
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
  const RunResult c = run_cli("--seed 124");
  CHECK(a.output != c.output);
}

TEST_CASE("grid mode writes the report files") {
  const std::string config_path = "cli_test_grid.json";
  std::ofstream(config_path) <<
      R"({"grid": {"polar_angles_deg": [0, 15], "distances_m": [3.0], "yaw_steps_deg": [0, 90, 180, 270]}})";
  const std::string out_dir = "cli_test_out";
  fs::remove_all(out_dir);

  const RunResult r =
      run_cli("--grid --config " + config_path + " --methods uwb,reflectors --out " + out_dir);
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(fs::path(out_dir) / "trials.csv"));
  CHECK(fs::exists(fs::path(out_dir) / "summary.json"));

  std::ifstream csv(fs::path(out_dir) / "trials.csv");
  std::size_t rows = 0;
  std::string line;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 2 * 1 * 4 * 2 + 1);  // scenarios x methods + header

  SUBCASE("repeats multiply the trial rows") {
    fs::remove_all(out_dir);
    const RunResult r5 = run_cli("--grid --config " + config_path +
                                 " --methods uwb --repeats 5 --out " + out_dir);
    CHECK(r5.exit_code == 0);
    std::ifstream csv5(fs::path(out_dir) / "trials.csv");
    std::size_t rows5 = 0;
    while (std::getline(csv5, line)) ++rows5;
    CHECK(rows5 == 2 * 1 * 4 * 5 + 1);
  }

  fs::remove_all(out_dir);
  std::remove(config_path.c_str());
}

TEST_CASE("default grid run emits 1260 trial rows") {
  const std::string out_dir = "cli_test_out_default";
  fs::remove_all(out_dir);
  const RunResult r = run_cli("--grid --out " + out_dir);
  CHECK(r.exit_code == 0);
  std::ifstream csv(fs::path(out_dir) / "trials.csv");
  std::size_t rows = 0;
  std::string line;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 420 * 3 + 1);
  fs::remove_all(out_dir);
}

TEST_CASE("unwritable output directory exits with code 3") {
  const RunResult r = run_cli("--grid --out /proc/trolleyloc_cannot_write_here");
  CHECK(r.exit_code == 3);
}
