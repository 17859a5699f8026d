#include "trolleyloc/eval.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "trolleyloc/errors.hpp"
#include "trolleyloc/rng.hpp"

namespace trolleyloc {

namespace fs = std::filesystem;
using nlohmann::json;

std::string method_name(Method m) {
  switch (m) {
    case Method::Rfid: return "rfid";
    case Method::Keypoints: return "keypoints";
    case Method::Uwb: return "uwb";
    case Method::Reflectors: return "reflectors";
  }
  return "?";
}

std::optional<Method> method_from_name(const std::string& name) {
  if (name == "rfid") return Method::Rfid;
  if (name == "keypoints") return Method::Keypoints;
  if (name == "uwb") return Method::Uwb;
  if (name == "reflectors") return Method::Reflectors;
  return std::nullopt;
}

double mae(const std::vector<Sample>& samples) {
  if (samples.empty()) throw EmptySamples("mae over zero samples");
  double sum = 0.0;
  for (const Sample& s : samples) {
    sum += std::abs(s.est.x - s.gt.x) + std::abs(s.est.y - s.gt.y);
  }
  return sum / static_cast<double>(samples.size());
}

double rmse(const std::vector<Sample>& samples) {
  if (samples.empty()) throw EmptySamples("rmse over zero samples");
  double sum = 0.0;
  for (const Sample& s : samples) {
    const double dx = s.est.x - s.gt.x;
    const double dy = s.est.y - s.gt.y;
    sum += dx * dx + dy * dy;
  }
  return std::sqrt(sum / static_cast<double>(samples.size()));
}

bool judge(const EstimateResult& est, const Pose2D& gt, const SuccessCriterion& c) {
  if (!est.state) return false;
  if ((est.state->position() - gt.position()).norm() > c.pos_tol) return false;
  if (est.yaw_defined &&
      std::abs(wrap_angle(est.state->theta - gt.theta)) > c.yaw_tol) {
    return false;
  }
  return true;
}

EstimateResult run_method(const Scenario& s, Method m) {
  switch (m) {
    case Method::Rfid:
      return rfid_pipeline(simulate_rfid(s), s.sensors.rfid);
    case Method::Keypoints:
      return keypoints_pipeline(simulate_camera(s), s.robot_pose, s.trolley,
                                s.sensors.camera);
    case Method::Uwb:
      return uwb_pipeline(simulate_uwb(s), s.sensors.uwb, s.trolley);
    case Method::Reflectors:
      return reflectors_pipeline(simulate_lidar(s), s.robot_pose,
                                 s.sensors.lidar.intensity_threshold, s.trolley);
  }
  return {};
}

GridResult run_grid(const std::vector<Scenario>& scenarios, const GridSpec& spec,
                    const std::vector<Method>& methods, const SuccessCriterion& criterion,
                    int repeats, bool keep_trials) {
  if (scenarios.empty() || methods.empty() || repeats < 1) {
    throw EmptyGrid("run_grid needs scenarios, methods and repeats >= 1");
  }
  if (scenarios.size() != spec.size()) {
    throw EmptyGrid("scenario list does not match the grid spec");
  }

  const std::size_t na = spec.polar_angles_deg.size();
  const std::size_t nd = spec.distances_m.size();
  const std::size_t ny = spec.yaw_steps_deg.size();

  GridResult out;
  out.angles_deg = spec.polar_angles_deg;
  out.distances_m = spec.distances_m;
  out.yaws_per_cell = static_cast<int>(ny);
  out.repeats = repeats;
  out.criterion = criterion;

  std::map<Method, std::vector<std::vector<int>>> success_counts;
  for (Method m : methods) {
    success_counts[m].assign(na, std::vector<int>(nd, 0));
    out.success[m].assign(na, std::vector<double>(nd, 0.0));
  }

  // Error statistics follow the common-point rule over the quantitative
  // methods: a trial contributes only when every one of them found a state.
  std::vector<Method> stat_methods;
  for (Method m : methods) {
    if (m != Method::Rfid) stat_methods.push_back(m);
  }
  std::map<Method, std::vector<Sample>> samples;

  if (keep_trials) out.trials.reserve(scenarios.size() * methods.size() * repeats);
  for (std::size_t idx = 0; idx < scenarios.size(); ++idx) {
    const std::size_t ai = idx / (nd * ny);
    const std::size_t di = (idx / ny) % nd;
    const std::size_t yi = idx % ny;
    for (int rep = 0; rep < repeats; ++rep) {
      Scenario s = scenarios[idx];
      if (rep > 0) s.seed = mix_seed(s.seed, static_cast<std::uint64_t>(rep));

      std::map<Method, EstimateResult> results;
      bool all_detected = !stat_methods.empty();
      for (Method m : methods) {
        results[m] = run_method(s, m);
        if (m != Method::Rfid && !results[m].state) all_detected = false;
      }

      for (Method m : methods) {
        const bool success = judge(results[m], s.trolley_pose, criterion);
        if (success) ++success_counts[m][ai][di];
        if (all_detected && m != Method::Rfid) {
          samples[m].push_back({results[m].state->position(), s.trolley_pose.position()});
        }
        if (!keep_trials) continue;
        TrialRecord rec;
        rec.scenario_index = idx;
        rec.angle_deg = spec.polar_angles_deg[ai];
        rec.distance_m = spec.distances_m[di];
        rec.yaw_deg = spec.yaw_steps_deg[yi];
        rec.repeat = rep;
        rec.method = m;
        rec.estimate = results[m];
        rec.gt = s.trolley_pose;
        rec.success = success;
        out.trials.push_back(std::move(rec));
      }
    }
  }

  const double trials_per_cell = static_cast<double>(ny) * repeats;
  for (Method m : methods) {
    for (std::size_t a = 0; a < na; ++a) {
      for (std::size_t d = 0; d < nd; ++d) {
        out.success[m][a][d] = success_counts[m][a][d] / trials_per_cell;
      }
    }
  }
  for (Method m : stat_methods) {
    if (samples[m].empty()) continue;
    out.error_stats[m] = {mae(samples[m]), rmse(samples[m]), samples[m].size()};
  }
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void write_atomically(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot open " + tmp.string());
    out << content;
    if (!out.good()) throw IoFailure("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoFailure("cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace

void emit_report(const GridResult& result, const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoFailure("cannot create " + out_dir + ": " + ec.message());

  std::string csv =
      "scenario,angle_deg,distance_m,yaw_deg,repeat,method,detected,"
      "est_x_m,est_y_m,est_yaw_deg,gt_x_m,gt_y_m,gt_yaw_deg,"
      "pos_error_m,yaw_error_deg,success\n";
  for (const TrialRecord& t : result.trials) {
    csv += std::to_string(t.scenario_index) + ',' + fmt(t.angle_deg) + ',' +
           fmt(t.distance_m) + ',' + fmt(t.yaw_deg) + ',' + std::to_string(t.repeat) +
           ',' + method_name(t.method) + ',';
    const auto& est = t.estimate;
    csv += est.state ? "1," : "0,";
    if (est.state) {
      csv += fmt(est.state->x) + ',' + fmt(est.state->y) + ',';
      csv += est.yaw_defined ? fmt(est.state->theta * 180.0 / M_PI) + "," : ",";
    } else {
      csv += ",,,";
    }
    csv += fmt(t.gt.x) + ',' + fmt(t.gt.y) + ',' + fmt(t.gt.theta * 180.0 / M_PI) + ',';
    if (est.state) {
      csv += fmt((est.state->position() - t.gt.position()).norm()) + ',';
      csv += est.yaw_defined
                 ? fmt(std::abs(wrap_angle(est.state->theta - t.gt.theta)) * 180.0 / M_PI) + ","
                 : ",";
    } else {
      csv += ",,";
    }
    csv += t.success ? "1\n" : "0\n";
  }
  write_atomically(fs::path(out_dir) / "trials.csv", csv);

  json summary;
  summary["schema_version"] = 1;
  summary["angles_deg"] = result.angles_deg;
  summary["distances_m"] = result.distances_m;
  summary["yaws_per_cell"] = result.yaws_per_cell;
  summary["repeats"] = result.repeats;
  summary["criterion"] = {{"pos_tol_m", result.criterion.pos_tol},
                          {"yaw_tol_deg", result.criterion.yaw_tol * 180.0 / M_PI},
                          {"require_detection", result.criterion.require_detection}};
  json methods = json::object();
  for (const auto& [m, grid] : result.success) {
    json entry;
    entry["success_fraction"] = grid;
    if (auto it = result.error_stats.find(m); it != result.error_stats.end()) {
      entry["mae_m"] = it->second.mae;
      entry["rmse_m"] = it->second.rmse;
      entry["n_common_trials"] = it->second.n;
    }
    methods[method_name(m)] = entry;
  }
  summary["methods"] = methods;
  summary["qualitative_scorecard"] = qualitative_scorecard();
  write_atomically(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");
}

json qualitative_scorecard() {
  return json::array(
      {{{"method", "rfid"},
        {"localization_accuracy", "1-4m"},
        {"mobile_power_supplies", "no"},
        {"coverage_area_m2", 222},
        {"cost", "high"},
        {"scalability", "low"}},
       {{"method", "keypoints"},
        {"localization_accuracy", "1-10cm"},
        {"mobile_power_supplies", "no"},
        {"coverage_area_m2", 48},
        {"cost", "middle"},
        {"scalability", "high"}},
       {{"method", "uwb"},
        {"localization_accuracy", "1-10cm"},
        {"mobile_power_supplies", "yes"},
        {"coverage_area_m2", 1600},
        {"cost", "high"},
        {"scalability", "low"}},
       {{"method", "reflectors"},
        {"localization_accuracy", "1-10cm"},
        {"mobile_power_supplies", "no"},
        {"coverage_area_m2", 118},
        {"cost", "low"},
        {"scalability", "middle"}}});
}

}  // namespace trolleyloc
