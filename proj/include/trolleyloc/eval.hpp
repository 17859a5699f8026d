#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "trolleyloc/estimators.hpp"
#include "trolleyloc/world.hpp"

namespace trolleyloc {

enum class Method { Rfid, Keypoints, Uwb, Reflectors };

std::string method_name(Method m);
std::optional<Method> method_from_name(const std::string& name);

struct Sample {
  Vec2 est;
  Vec2 gt;
};

/// Mean absolute error, (1/n) * sum(|dx| + |dy|). Throws EmptySamples.
double mae(const std::vector<Sample>& samples);

/// Root mean square error, sqrt((1/n) * sum(dx^2 + dy^2)). Throws EmptySamples.
double rmse(const std::vector<Sample>& samples);

struct ErrorStats {
  double mae = 0.0;
  double rmse = 0.0;
  std::size_t n = 0;
};

struct SuccessCriterion {
  double pos_tol = 0.10;                    // meters (microlocation)
  double yaw_tol = 10.0 * M_PI / 180.0;     // radians
  bool require_detection = true;
};

/// Success iff a state is present, position error <= pos_tol and, when the
/// pipeline defines a heading, |yaw error| <= yaw_tol. Absent states never pass.
bool judge(const EstimateResult& est, const Pose2D& gt, const SuccessCriterion& c);

/// simulate -> estimate for one scenario and method.
EstimateResult run_method(const Scenario& s, Method m);

struct TrialRecord {
  std::size_t scenario_index = 0;
  double angle_deg = 0.0;
  double distance_m = 0.0;
  double yaw_deg = 0.0;
  int repeat = 0;
  Method method = Method::Uwb;
  EstimateResult estimate;
  Pose2D gt;
  bool success = false;
};

struct GridResult {
  std::vector<double> angles_deg;
  std::vector<double> distances_m;
  int yaws_per_cell = 0;
  int repeats = 1;
  SuccessCriterion criterion;
  /// success fraction per method, indexed [angle][distance]
  std::map<Method, std::vector<std::vector<double>>> success;
  /// common-point error statistics (trials where every compared quantitative
  /// method produced a state); RFID never contributes
  std::map<Method, ErrorStats> error_stats;
  std::vector<TrialRecord> trials;

  double success_at(Method m, std::size_t angle_idx, std::size_t dist_idx) const {
    return success.at(m)[angle_idx][dist_idx];
  }
};

/// Runs every scenario x method x repeat, judges success and aggregates the
/// per-cell success map plus common-point error statistics. `scenarios` must
/// be generate_grid(spec, base) output. keep_trials = false drops the
/// per-trial records (large Monte Carlo runs). Throws EmptyGrid.
GridResult run_grid(const std::vector<Scenario>& scenarios, const GridSpec& spec,
                    const std::vector<Method>& methods, const SuccessCriterion& criterion,
                    int repeats = 1, bool keep_trials = true);

/// Writes trials.csv and summary.json under out_dir (write-then-rename, no
/// partial files). Throws IoFailure. Byte-identical output for equal inputs.
void emit_report(const GridResult& result, const std::string& out_dir);

/// Static qualitative scorecard (accuracy band, power, coverage, cost,
/// scalability per method).
nlohmann::json qualitative_scorecard();

}  // namespace trolleyloc
