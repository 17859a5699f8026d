#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trolleyloc/config.hpp"
#include "trolleyloc/errors.hpp"
#include "trolleyloc/eval.hpp"

namespace {

using namespace trolleyloc;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

std::vector<Method> parse_methods(const std::string& list) {
  std::vector<Method> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = list.find(',', start);
    const std::string name = list.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!name.empty()) {
      const auto m = method_from_name(name);
      if (!m) throw ConfigParse("unknown method: " + name);
      out.push_back(*m);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw ConfigParse("method list is empty");
  return out;
}

void print_estimate_line(Method m, const EstimateResult& est, const Pose2D& gt,
                         bool success) {
  const double r2d = 180.0 / M_PI;
  std::printf("%-10s ", method_name(m).c_str());
  if (est.state) {
    if (est.yaw_defined) {
      std::printf("est=(%8.3f, %8.3f, %7.1f deg) ", est.state->x, est.state->y,
                  est.state->theta * r2d);
    } else {
      std::printf("est=(%8.3f, %8.3f,      -  ) ", est.state->x, est.state->y);
    }
  } else {
    std::printf("est=       none (n_points=%d)          ", est.diag.n_points_used);
  }
  std::printf("gt=(%8.3f, %8.3f, %7.1f deg) ", gt.x, gt.y, gt.theta * r2d);
  if (est.state) {
    std::printf("pos_err=%.3fm ", (est.state->position() - gt.position()).norm());
  } else {
    std::printf("pos_err=  -    ");
  }
  std::printf("success=%d\n", success ? 1 : 0);
}

int run(int argc, char** argv) {
  CLI::App app{"Multi-sensor trolley localization simulator and evaluator"};
  std::string config_path;
  std::string methods_arg = "keypoints,uwb,reflectors";
  std::string out_dir = "out";
  bool grid_mode = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int repeats = 1;

  app.add_option("--config", config_path, "Scenario/grid configuration file (JSON)");
  app.add_flag("--grid", grid_mode, "Run the full polar grid instead of one scenario");
  app.add_option("--methods", methods_arg,
                 "Comma-separated subset of rfid,keypoints,uwb,reflectors");
  app.add_option("--seed", seed, "Override the base RNG seed")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_option("--repeats", repeats, "Monte Carlo repeats per grid scenario")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "Report output directory (grid mode)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  FileConfig cfg;
  std::vector<Method> methods;
  try {
    if (!config_path.empty()) {
      cfg = load_config(config_path);
    } else {
      cfg.scenario = default_scenario();
    }
    if (seed_set) cfg.scenario.seed = seed;
    methods = parse_methods(methods_arg);
  } catch (const ConfigParse& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  }

  const SuccessCriterion criterion;
  if (!grid_mode) {
    for (Method m : methods) {
      const EstimateResult est = run_method(cfg.scenario, m);
      print_estimate_line(m, est, cfg.scenario.trolley_pose,
                          judge(est, cfg.scenario.trolley_pose, criterion));
    }
    return kExitOk;
  }

  try {
    const auto scenarios = generate_grid(cfg.grid, cfg.scenario);
    const GridResult result = run_grid(scenarios, cfg.grid, methods, criterion, repeats);
    emit_report(result, out_dir);
    std::printf("grid: %zu scenarios x %zu methods x %d repeats -> %s\n",
                scenarios.size(), methods.size(), repeats, out_dir.c_str());
    for (const auto& [m, stats] : result.error_stats) {
      std::printf("%-10s mae=%.4fm rmse=%.4fm over %zu common trials\n",
                  method_name(m).c_str(), stats.mae, stats.rmse, stats.n);
    }
  } catch (const EmptyGrid& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const IoFailure& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
