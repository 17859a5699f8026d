#include "trolleyloc/eval.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "trolleyloc/config.hpp"
#include "trolleyloc/errors.hpp"
#include "trolleyloc/rng.hpp"
#include "test_util.hpp"

using namespace trolleyloc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Scenario zero_noise_base() {
  Scenario s = default_scenario();
  s.sensors.camera.pixel_noise_sigma = 0.0;
  s.sensors.uwb.range_noise_sigma = 0.0;
  s.sensors.lidar.range_noise_sigma = 0.0;
  s.sensors.lidar.bearing_offset_sigma_deg = 0.0;
  return s;
}

}  // namespace

TEST_CASE("mae") {
  CHECK(mae({{{0.1, 0.2}, {0.0, 0.0}}}) == 0.1 + 0.2);
  CHECK_NEAR(mae({{{0.1, 0.2}, {0.0, 0.0}}}), 0.3, 1e-12);
  CHECK(mae({{{1.5, -2.0}, {1.5, -2.0}}}) == 0.0);
  // per-sample sums 0.2 and 0.6 average to 0.4
  CHECK_NEAR(mae({{{0.1, 0.1}, {0, 0}}, {{0.3, 0.3}, {0, 0}}}), 0.4, 1e-12);
  CHECK_THROWS_AS(mae({}), EmptySamples);
}

TEST_CASE("rmse") {
  CHECK_NEAR(rmse({{{0.1, 0.2}, {0.0, 0.0}}}), std::sqrt(0.05), 1e-12);
  CHECK(rmse({{{-3, 7}, {-3, 7}}}) == 0.0);
  CHECK_THROWS_AS(rmse({}), EmptySamples);
}

TEST_CASE("metric identities and scaling") {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.uniform_int(1, 40);
    std::vector<Sample> samples;
    long double sum_abs = 0.0L, sum_sq = 0.0L;
    for (int i = 0; i < n; ++i) {
      Sample s;
      s.gt = {rng.uniform(-10, 10), rng.uniform(-10, 10)};
      s.est = {s.gt.x + rng.uniform(-1, 1), s.gt.y + rng.uniform(-1, 1)};
      samples.push_back(s);
      sum_abs += std::abs((long double)s.est.x - s.gt.x) +
                 std::abs((long double)s.est.y - s.gt.y);
      const long double dx = (long double)s.est.x - s.gt.x;
      const long double dy = (long double)s.est.y - s.gt.y;
      sum_sq += dx * dx + dy * dy;
    }
    const double m = mae(samples);
    const double r = rmse(samples);
    CHECK_NEAR(m, (double)(sum_abs / n), 1e-12);
    CHECK_NEAR(r, std::sqrt((double)(sum_sq / n)), 1e-12);
    CHECK(m >= 0.0);
    CHECK_NEAR(r * r * n, (double)sum_sq, 1e-9);

    // scaling all errors by c scales both metrics by c
    const double c = 2.5;
    std::vector<Sample> scaled;
    for (const Sample& s : samples) {
      scaled.push_back({{s.gt.x + c * (s.est.x - s.gt.x), s.gt.y + c * (s.est.y - s.gt.y)},
                        s.gt});
    }
    CHECK_NEAR(mae(scaled), c * m, 1e-9);
    CHECK_NEAR(rmse(scaled), c * r, 1e-9);
  }
}

TEST_CASE("judge") {
  const Pose2D gt{1.0, 2.0, 0.5};
  const SuccessCriterion c;

  EstimateResult exact;
  exact.state = gt;
  CHECK(judge(exact, gt, c));

  EstimateResult absent;
  CHECK_FALSE(judge(absent, gt, c));

  EstimateResult off;
  off.state = Pose2D{1.12, 2.0, 0.5};
  CHECK_FALSE(judge(off, gt, c));  // 0.12 m > 0.10 m

  EstimateResult yaw_off;
  yaw_off.state = Pose2D{1.0, 2.0, 0.5 + 12.0 * M_PI / 180.0};
  CHECK_FALSE(judge(yaw_off, gt, c));

  EstimateResult no_heading;  // yaw-free pipelines skip the yaw gate
  no_heading.state = Pose2D{1.0, 2.0, -3.0};
  no_heading.yaw_defined = false;
  CHECK(judge(no_heading, gt, c));
}

TEST_CASE("run_grid on a reduced grid") {
  GridSpec spec;
  spec.polar_angles_deg = {0, 60};
  spec.distances_m = {3.0, 4.5};
  const Scenario base = zero_noise_base();
  const auto scenarios = generate_grid(spec, base);
  const std::vector<Method> methods = {Method::Keypoints, Method::Uwb};
  const GridResult result = run_grid(scenarios, spec, methods, SuccessCriterion{});

  SUBCASE("success fractions are twelfths") {
    for (Method m : methods) {
      for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t d = 0; d < 2; ++d) {
          const double f12 = result.success_at(m, a, d) * 12.0;
          CHECK_NEAR(f12, std::round(f12), 1e-9);
        }
      }
    }
  }

  SUBCASE("uwb succeeds everywhere at zero noise, keypoints not at 60 deg") {
    CHECK(result.success_at(Method::Uwb, 0, 0) == 1.0);
    CHECK(result.success_at(Method::Uwb, 1, 1) == 1.0);
    CHECK(result.success_at(Method::Keypoints, 1, 0) == 0.0);
    CHECK(result.success_at(Method::Keypoints, 1, 1) == 0.0);
  }

  SUBCASE("common-point rule holds") {
    // keypoints misses whole cells (60 deg) and some yaws; the sample counts
    // of every compared method match and only common trials contribute
    REQUIRE(result.error_stats.count(Method::Keypoints));
    REQUIRE(result.error_stats.count(Method::Uwb));
    const auto& sk = result.error_stats.at(Method::Keypoints);
    const auto& su = result.error_stats.at(Method::Uwb);
    CHECK(sk.n == su.n);
    CHECK(sk.n > 0);
    CHECK(sk.n < scenarios.size());

    std::size_t detected_both = 0;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
      const bool kp = result.trials[2 * i].estimate.state.has_value();
      const bool uw = result.trials[2 * i + 1].estimate.state.has_value();
      if (kp && uw) ++detected_both;
    }
    CHECK(detected_both == sk.n);
  }

  SUBCASE("trial records keep the scenario order") {
    REQUIRE(result.trials.size() == scenarios.size() * methods.size());
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
      CHECK(result.trials[2 * i].scenario_index == i);
      CHECK(result.trials[2 * i].method == Method::Keypoints);
      CHECK(result.trials[2 * i + 1].method == Method::Uwb);
    }
  }
}

TEST_CASE("run_grid rejects empty work") {
  GridSpec spec;
  const Scenario base = default_scenario();
  const auto scenarios = generate_grid(spec, base);
  CHECK_THROWS_AS(run_grid({}, spec, {Method::Uwb}, SuccessCriterion{}), EmptyGrid);
  CHECK_THROWS_AS(run_grid(scenarios, spec, {}, SuccessCriterion{}), EmptyGrid);
  CHECK_THROWS_AS(run_grid(scenarios, spec, {Method::Uwb}, SuccessCriterion{}, 0),
                  EmptyGrid);
}

TEST_CASE("rfid never enters error statistics") {
  GridSpec spec;
  spec.polar_angles_deg = {0};
  spec.distances_m = {3.0};
  const Scenario base = zero_noise_base();
  const auto scenarios = generate_grid(spec, base);
  const GridResult result =
      run_grid(scenarios, spec, {Method::Rfid, Method::Uwb}, SuccessCriterion{});
  CHECK(result.error_stats.count(Method::Rfid) == 0);
  CHECK(result.error_stats.count(Method::Uwb) == 1);
  CHECK(result.success.count(Method::Rfid) == 1);  // still in the success map
}

TEST_CASE("emit_report writes deterministic row-per-trial files") {
  GridSpec spec;
  spec.polar_angles_deg = {0, 15};
  spec.distances_m = {3.0};
  const Scenario base = zero_noise_base();
  const auto scenarios = generate_grid(spec, base);
  const std::vector<Method> methods = {Method::Keypoints, Method::Uwb, Method::Reflectors};
  const GridResult result = run_grid(scenarios, spec, methods, SuccessCriterion{});

  const fs::path dir_a = "eval_test_out_a";
  const fs::path dir_b = "eval_test_out_b";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
  emit_report(result, dir_a.string());
  emit_report(result, dir_b.string());

  const std::string csv = slurp(dir_a / "trials.csv");
  std::size_t rows = 0;
  for (char ch : csv) rows += ch == '\n' ? 1 : 0;
  CHECK(rows == scenarios.size() * methods.size() + 1);  // header included

  CHECK(csv == slurp(dir_b / "trials.csv"));
  CHECK(slurp(dir_a / "summary.json") == slurp(dir_b / "summary.json"));

  const auto summary = nlohmann::json::parse(slurp(dir_a / "summary.json"));
  CHECK(summary["methods"].contains("uwb"));
  CHECK(summary["qualitative_scorecard"].size() == 4);
  CHECK(summary["qualitative_scorecard"][0]["localization_accuracy"] == "1-4m");

  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}
