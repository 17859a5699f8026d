#include "trolleyloc/config.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "trolleyloc/errors.hpp"

namespace trolleyloc {

using nlohmann::json;

namespace {

constexpr double kDeg2Rad = M_PI / 180.0;

json pose_to_json(const Pose2D& p) {
  return {{"x", p.x}, {"y", p.y}, {"theta_deg", p.theta / kDeg2Rad}};
}

Pose2D pose_from_json(const json& j, const Pose2D& fallback) {
  return Pose2D(j.value("x", fallback.x), j.value("y", fallback.y),
                j.value("theta_deg", fallback.theta / kDeg2Rad) * kDeg2Rad);
}

json vec2_to_json(const Vec2& v) { return json::array({v.x, v.y}); }

Vec2 vec2_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigParse("expected [x, y] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

json trolley_to_json(const TrolleyModel& t) {
  json kps = json::array();
  for (const auto& k : t.keypoints_local) kps.push_back({k.x(), k.y(), k.z()});
  return {{"keypoints", kps},
          {"tag_offsets", {vec2_to_json(t.tag_offsets[0]), vec2_to_json(t.tag_offsets[1])}},
          {"reflector_offsets",
           {vec2_to_json(t.reflector_offsets[0]), vec2_to_json(t.reflector_offsets[1])}},
          {"offset_d", t.offset_d},
          {"body_radius", t.body_radius},
          {"body_height", t.body_height}};
}

TrolleyModel trolley_from_json(const json& j, const TrolleyModel& fallback) {
  TrolleyModel t = fallback;
  if (j.contains("keypoints")) {
    const json& kps = j["keypoints"];
    if (!kps.is_array() || kps.size() != 6) {
      throw ConfigParse("trolley.keypoints must list exactly 6 points");
    }
    for (std::size_t k = 0; k < 6; ++k) {
      if (!kps[k].is_array() || kps[k].size() != 3) {
        throw ConfigParse("trolley.keypoints entries must be [x, y, z]");
      }
      t.keypoints_local[k] = Eigen::Vector3d(
          kps[k][0].get<double>(), kps[k][1].get<double>(), kps[k][2].get<double>());
    }
  }
  for (const char* key : {"tag_offsets", "reflector_offsets"}) {
    if (!j.contains(key)) continue;
    const json& pair = j[key];
    if (!pair.is_array() || pair.size() != 2) {
      throw ConfigParse(std::string("trolley.") + key + " must list exactly 2 points");
    }
    auto& dst = std::string(key) == "tag_offsets" ? t.tag_offsets : t.reflector_offsets;
    dst = {vec2_from_json(pair[0]), vec2_from_json(pair[1])};
    if ((dst[0] - dst[1]).norm() <= kDegeneratePairEps) {
      throw ConfigParse(std::string("trolley.") + key + " points must be distinct");
    }
  }
  t.offset_d = j.value("offset_d", fallback.offset_d);
  t.body_radius = j.value("body_radius", fallback.body_radius);
  t.body_height = j.value("body_height", fallback.body_height);
  if (!std::isfinite(t.offset_d)) throw ConfigParse("trolley.offset_d must be finite");
  return t;
}

json sensors_to_json(const SensorSuiteConfig& s) {
  json cam = {{"hfov_deg", s.camera.hfov_deg},
              {"max_range_m", s.camera.max_range},
              {"pixel_noise_sigma_px", s.camera.pixel_noise_sigma},
              {"focal_px", {s.camera.intrinsics.fx, s.camera.intrinsics.fy}},
              {"principal_px", {s.camera.intrinsics.cx, s.camera.intrinsics.cy}},
              {"image_size_px", {s.camera.image_width, s.camera.image_height}},
              {"mount_height_m", s.camera.mount.translation.z()}};
  json uwb = {{"anchors", json::array()},
              {"range_noise_sigma_m", s.uwb.range_noise_sigma},
              {"coverage_half_extent_m", s.uwb.coverage_half_extent}};
  for (const Vec2& a : s.uwb.anchors) uwb["anchors"].push_back(vec2_to_json(a));
  json lidar = {{"max_reflector_range_m", s.lidar.max_reflector_range},
                {"angular_resolution_deg", s.lidar.angular_resolution_deg},
                {"range_noise_sigma_m", s.lidar.range_noise_sigma},
                {"bearing_offset_sigma_deg", s.lidar.bearing_offset_sigma_deg},
                {"intensity_threshold", s.lidar.intensity_threshold},
                {"rear_visibility_half_angle_deg", s.lidar.rear_visibility_half_angle_deg},
                {"reflector_width_m", s.lidar.reflector_width}};
  json rfid = {{"antennas", json::array()}};
  for (const RfidAntenna& a : s.rfid.antennas) {
    rfid["antennas"].push_back(
        {{"id", a.id}, {"position", vec2_to_json(a.position)}, {"radius_m", a.radius}});
  }
  return {{"camera", cam}, {"uwb", uwb}, {"lidar", lidar}, {"rfid", rfid}};
}

SensorSuiteConfig sensors_from_json(const json& j, const SensorSuiteConfig& fallback) {
  SensorSuiteConfig s = fallback;
  if (j.contains("camera")) {
    const json& c = j["camera"];
    s.camera.hfov_deg = c.value("hfov_deg", fallback.camera.hfov_deg);
    s.camera.max_range = c.value("max_range_m", fallback.camera.max_range);
    s.camera.pixel_noise_sigma =
        c.value("pixel_noise_sigma_px", fallback.camera.pixel_noise_sigma);
    if (c.contains("image_size_px")) {
      s.camera.image_width = c["image_size_px"][0].get<int>();
      s.camera.image_height = c["image_size_px"][1].get<int>();
    }
    if (c.contains("focal_px")) {
      s.camera.intrinsics.fx = c["focal_px"][0].get<double>();
      s.camera.intrinsics.fy = c["focal_px"][1].get<double>();
    }
    if (c.contains("principal_px")) {
      s.camera.intrinsics.cx = c["principal_px"][0].get<double>();
      s.camera.intrinsics.cy = c["principal_px"][1].get<double>();
    }
    if (c.contains("mount_height_m")) {
      s.camera.mount = CameraConfig::forward_mount(c["mount_height_m"].get<double>());
    }
    if (s.camera.hfov_deg <= 0.0 || s.camera.hfov_deg >= 180.0) {
      throw ConfigParse("camera.hfov_deg must be in (0, 180)");
    }
    if (s.camera.pixel_noise_sigma < 0.0) {
      throw ConfigParse("camera.pixel_noise_sigma_px must be >= 0");
    }
    if (s.camera.intrinsics.fx <= 0.0 || s.camera.intrinsics.fy <= 0.0) {
      throw ConfigParse("camera.focal_px must be positive");
    }
  }
  if (j.contains("uwb")) {
    const json& u = j["uwb"];
    if (u.contains("anchors")) {
      s.uwb.anchors.clear();
      for (const json& a : u["anchors"]) s.uwb.anchors.push_back(vec2_from_json(a));
    }
    s.uwb.range_noise_sigma = u.value("range_noise_sigma_m", fallback.uwb.range_noise_sigma);
    s.uwb.coverage_half_extent =
        u.value("coverage_half_extent_m", fallback.uwb.coverage_half_extent);
    if (s.uwb.anchors.size() < 3) throw ConfigParse("uwb.anchors needs >= 3 entries");
    if (s.uwb.range_noise_sigma < 0.0) {
      throw ConfigParse("uwb.range_noise_sigma_m must be >= 0");
    }
  }
  if (j.contains("lidar")) {
    const json& l = j["lidar"];
    s.lidar.max_reflector_range =
        l.value("max_reflector_range_m", fallback.lidar.max_reflector_range);
    s.lidar.angular_resolution_deg =
        l.value("angular_resolution_deg", fallback.lidar.angular_resolution_deg);
    s.lidar.range_noise_sigma =
        l.value("range_noise_sigma_m", fallback.lidar.range_noise_sigma);
    s.lidar.bearing_offset_sigma_deg =
        l.value("bearing_offset_sigma_deg", fallback.lidar.bearing_offset_sigma_deg);
    s.lidar.intensity_threshold =
        l.value("intensity_threshold", fallback.lidar.intensity_threshold);
    s.lidar.rear_visibility_half_angle_deg = l.value(
        "rear_visibility_half_angle_deg", fallback.lidar.rear_visibility_half_angle_deg);
    s.lidar.reflector_width = l.value("reflector_width_m", fallback.lidar.reflector_width);
    if (s.lidar.range_noise_sigma < 0.0 || s.lidar.bearing_offset_sigma_deg < 0.0) {
      throw ConfigParse("lidar noise sigmas must be >= 0");
    }
    if (s.lidar.intensity_threshold < 0.0 || s.lidar.intensity_threshold > 1.0) {
      throw ConfigParse("lidar.intensity_threshold must be in [0, 1]");
    }
  }
  if (j.contains("rfid")) {
    const json& r = j["rfid"];
    if (r.contains("antennas")) {
      s.rfid.antennas.clear();
      for (const json& a : r["antennas"]) {
        RfidAntenna ant;
        ant.id = a.at("id").get<int>();
        ant.position = vec2_from_json(a.at("position"));
        ant.radius = a.value("radius_m", 4.2);
        s.rfid.antennas.push_back(ant);
      }
    }
    if (s.rfid.antennas.empty()) throw ConfigParse("rfid.antennas must not be empty");
  }
  return s;
}

}  // namespace

Scenario default_scenario() {
  Scenario s;
  s.robot_pose = Pose2D(0, 0, 0);
  s.trolley_pose = Pose2D(3, 0, 0);
  s.trolley = TrolleyModel::defaults();
  s.sensors = SensorSuiteConfig::defaults();
  s.seed = 42;
  return s;
}

json scenario_to_json(const Scenario& s) {
  return {{"seed", s.seed},
          {"robot_pose", pose_to_json(s.robot_pose)},
          {"trolley_pose", pose_to_json(s.trolley_pose)},
          {"trolley", trolley_to_json(s.trolley)},
          {"sensors", sensors_to_json(s.sensors)}};
}

Scenario scenario_from_json(const json& j) {
  const Scenario base = default_scenario();
  Scenario s = base;
  try {
    s.seed = j.value("seed", base.seed);
    if (j.contains("robot_pose")) s.robot_pose = pose_from_json(j["robot_pose"], base.robot_pose);
    if (j.contains("trolley_pose")) {
      s.trolley_pose = pose_from_json(j["trolley_pose"], base.trolley_pose);
    }
    if (j.contains("trolley")) s.trolley = trolley_from_json(j["trolley"], base.trolley);
    if (j.contains("sensors")) s.sensors = sensors_from_json(j["sensors"], base.sensors);
  } catch (const json::exception& e) {
    throw ConfigParse(std::string("scenario: ") + e.what());
  }
  return s;
}

json gridspec_to_json(const GridSpec& g) {
  return {{"polar_angles_deg", g.polar_angles_deg},
          {"distances_m", g.distances_m},
          {"yaw_steps_deg", g.yaw_steps_deg}};
}

GridSpec gridspec_from_json(const json& j) {
  GridSpec g;
  try {
    if (j.contains("polar_angles_deg")) {
      g.polar_angles_deg = j["polar_angles_deg"].get<std::vector<double>>();
    }
    if (j.contains("distances_m")) g.distances_m = j["distances_m"].get<std::vector<double>>();
    if (j.contains("yaw_steps_deg")) {
      g.yaw_steps_deg = j["yaw_steps_deg"].get<std::vector<double>>();
    }
  } catch (const json::exception& e) {
    throw ConfigParse(std::string("grid: ") + e.what());
  }
  return g;
}

json config_to_json(const FileConfig& c) {
  return {{"scenario", scenario_to_json(c.scenario)}, {"grid", gridspec_to_json(c.grid)}};
}

FileConfig config_from_json(const json& j) {
  FileConfig c;
  c.scenario = j.contains("scenario") ? scenario_from_json(j["scenario"]) : default_scenario();
  if (j.contains("grid")) c.grid = gridspec_from_json(j["grid"]);
  return c;
}

FileConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParse("cannot read config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigParse(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigParse("config root must be a JSON object");
  return config_from_json(j);
}

}  // namespace trolleyloc
