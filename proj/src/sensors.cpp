#include "trolleyloc/sensors.hpp"

#include <algorithm>

#include "trolleyloc/rng.hpp"
#include "trolleyloc/world.hpp"

namespace trolleyloc {

namespace {

// Independent draw streams per channel; gating one element must not shift
// the draws of another (keeps coverage gates monotone).
constexpr std::uint64_t kStreamCamera = 0x01;
constexpr std::uint64_t kStreamUwbTag0 = 0x10;
constexpr std::uint64_t kStreamLidarScan = 0x20;
constexpr std::uint64_t kStreamReflector0 = 0x21;
constexpr std::uint64_t kStreamClutter = 0x28;

// A keypoint whose ray enters the body cylinder deeper than this before
// reaching it counts as self-occluded.
constexpr double kOcclusionDepthMargin = 0.03;

double deg2rad(double d) { return d * M_PI / 180.0; }

/// First parameter s in (0,1) at which the segment p(s) = s * w (from the
/// origin) enters the circle of radius r around c, or a negative value when
/// it never does before the endpoint.
double segment_circle_entry(const Vec2& w, const Vec2& c, double r) {
  const double ww = w.squared_norm();
  if (ww <= 0.0 || r <= 0.0) return -1.0;
  const double t_closest = w.dot(c) / ww;
  const double d_line_sq =
      std::max(0.0, c.squared_norm() - t_closest * t_closest * ww);
  const double r_sq = r * r;
  if (d_line_sq >= r_sq) return -1.0;
  const double s1 = t_closest - std::sqrt((r_sq - d_line_sq) / ww);
  return (s1 > 0.0 && s1 < 1.0) ? s1 : -1.0;
}

}  // namespace

Pose6D CameraConfig::forward_mount(double height_m) {
  Pose6D m;
  // optical axes: camera z -> robot +x, camera x -> robot -y, camera y -> robot -z
  m.rotation << 0, 0, 1, -1, 0, 0, 0, -1, 0;
  m.translation << 0.0, 0.0, height_m;
  return m;
}

CameraConfig CameraConfig::defaults() {
  CameraConfig c;
  c.mount = forward_mount(0.5);
  const double half = std::tan(deg2rad(c.hfov_deg) / 2.0);
  c.intrinsics.fx = (c.image_width / 2.0) / half;
  c.intrinsics.fy = c.intrinsics.fx;
  c.intrinsics.cx = c.image_width / 2.0;
  c.intrinsics.cy = c.image_height / 2.0;
  return c;
}

UwbConfig UwbConfig::defaults() {
  UwbConfig u;
  u.anchors = {Vec2{-20, -20}, Vec2{20, -20}, Vec2{20, 20}, Vec2{-20, 20}};
  return u;
}

LidarConfig LidarConfig::defaults() { return {}; }

RfidConfig RfidConfig::defaults() {
  RfidConfig r;
  r.antennas = {RfidAntenna{0, Vec2{3.75, 0.0}, 4.2},
                RfidAntenna{1, Vec2{2.652, 2.652}, 4.2},
                RfidAntenna{2, Vec2{0.0, 3.75}, 4.2},
                RfidAntenna{3, Vec2{4.773, 4.773}, 4.2}};
  return r;
}

SensorSuiteConfig SensorSuiteConfig::defaults() {
  return {CameraConfig::defaults(), UwbConfig::defaults(),
          LidarConfig::defaults(), RfidConfig::defaults()};
}

KeypointObservation simulate_camera(const Scenario& s) {
  KeypointObservation obs;
  const CameraConfig& cam = s.sensors.camera;
  const Pose6D robot = lift_to_3d(s.robot_pose);

  const Eigen::Vector3d cam_pos_w =
      robot.rotation * cam.mount.translation + robot.translation;
  const Vec2 cam_xy{cam_pos_w.x(), cam_pos_w.y()};
  const Vec2 center_xy = s.trolley_pose.position();

  // Detection gates on the target center: the whole trolley has to be inside
  // the field of view and close enough before any keypoint can be reported.
  if ((center_xy - cam_xy).norm() > cam.max_range) return obs;
  Eigen::Vector3d center_c =
      cam.mount.rotation.transpose() *
      (robot.rotation.transpose() *
           (Eigen::Vector3d(center_xy.x, center_xy.y, 0.0) - robot.translation) -
       cam.mount.translation);
  if (center_c.z() <= 0.0) return obs;
  const double bearing = std::atan2(std::abs(center_c.x()), center_c.z());
  if (bearing > deg2rad(cam.hfov_deg) / 2.0) return obs;

  const auto kps_w = ground_truth_keypoints(s);
  Rng rng(mix_seed(s.seed, kStreamCamera));
  for (std::size_t k = 0; k < 6; ++k) {
    const Eigen::Vector3d p_c =
        cam.mount.rotation.transpose() *
        (robot.rotation.transpose() * (kps_w[k] - robot.translation) -
         cam.mount.translation);
    if (p_c.z() <= 0.05) continue;
    double u = cam.intrinsics.fx * p_c.x() / p_c.z() + cam.intrinsics.cx;
    double v = cam.intrinsics.fy * p_c.y() / p_c.z() + cam.intrinsics.cy;
    if (u < 0.0 || u > cam.image_width - 1 || v < 0.0 || v > cam.image_height - 1)
      continue;

    // Self-occlusion: vertical body cylinder between camera and keypoint.
    const Vec2 w{kps_w[k].x() - cam_xy.x, kps_w[k].y() - cam_xy.y};
    const double s1 = segment_circle_entry(w, center_xy - cam_xy, s.trolley.body_radius);
    if (s1 >= 0.0) {
      const double depth_behind = (1.0 - s1) * w.norm();
      const double z_at_entry =
          cam_pos_w.z() + s1 * (kps_w[k].z() - cam_pos_w.z());
      if (depth_behind > kOcclusionDepthMargin &&
          z_at_entry <= s.trolley.body_height) {
        continue;
      }
    }

    // Draws consumed in keypoint order; only visible keypoints consume.
    u += rng.gaussian(cam.pixel_noise_sigma);
    v += rng.gaussian(cam.pixel_noise_sigma);
    obs.visibility[k] = true;
    obs.pixels[k] = {std::clamp(u, 0.0, cam.image_width - 1.0),
                     std::clamp(v, 0.0, cam.image_height - 1.0)};
  }
  return obs;
}

UwbObservation simulate_uwb(const Scenario& s) {
  UwbObservation obs;
  const UwbConfig& uwb = s.sensors.uwb;
  const auto tags = ground_truth_markers(s, MarkerKind::Tags);
  for (std::size_t t = 0; t < 2; ++t) {
    if (std::abs(tags[t].x) > uwb.coverage_half_extent ||
        std::abs(tags[t].y) > uwb.coverage_half_extent) {
      continue;
    }
    Rng rng(mix_seed(s.seed, kStreamUwbTag0 + t));
    std::vector<double> ranges;
    ranges.reserve(uwb.anchors.size());
    for (const Vec2& a : uwb.anchors) {
      ranges.push_back(
          std::max(0.0, (tags[t] - a).norm() + rng.gaussian(uwb.range_noise_sigma)));
    }
    obs.tag_ranges[t] = std::move(ranges);
  }
  return obs;
}

LidarObservation simulate_lidar(const Scenario& s) {
  LidarObservation obs;
  const LidarConfig& lidar = s.sensors.lidar;
  const Vec2 sensor_xy = s.robot_pose.position();

  // Shared per-scan bearing offset (always drawn, gate-independent).
  Rng scan_rng(mix_seed(s.seed, kStreamLidarScan));
  const double scan_offset =
      scan_rng.gaussian(deg2rad(lidar.bearing_offset_sigma_deg));

  // The reflectors sit on the rear pole; they return only when the sensor is
  // inside the rear visibility cone.
  const Vec2 rear_normal = transform_point(
      Pose2D(0, 0, s.trolley_pose.theta), Vec2{-1.0, 0.0});
  const Vec2 to_robot = sensor_xy - s.trolley_pose.position();
  bool rear_visible = false;
  if (to_robot.norm() > 1e-12) {
    const Vec2 dir = to_robot / to_robot.norm();
    const double cos_angle = rear_normal.dot(dir);
    rear_visible =
        cos_angle >= std::cos(deg2rad(lidar.rear_visibility_half_angle_deg));
  }

  const auto reflectors = ground_truth_markers(s, MarkerKind::Reflectors);
  const Vec2 pole_dir = transform_point(Pose2D(0, 0, s.trolley_pose.theta),
                                        Vec2{0.0, 1.0});
  const double res = deg2rad(lidar.angular_resolution_deg);
  for (std::size_t r = 0; r < 2; ++r) {
    const double range_center = (reflectors[r] - sensor_xy).norm();
    if (!rear_visible || range_center > lidar.max_reflector_range) continue;

    Rng rng(mix_seed(s.seed, kStreamReflector0 + r));
    const double ang_width =
        2.0 * std::atan(lidar.reflector_width / 2.0 / range_center);
    const int n_pts = std::clamp(1 + static_cast<int>(ang_width / res), 3, 7);
    for (int i = 0; i < n_pts; ++i) {
      // Samples symmetric about the reflector center along its face.
      const double off =
          lidar.reflector_width * (static_cast<double>(i) / (n_pts - 1) - 0.5);
      const Vec2 q = reflectors[r] + off * pole_dir;
      const Vec2 d = q - sensor_xy;
      LidarReturn ret;
      ret.bearing =
          wrap_angle(std::atan2(d.y, d.x) - s.robot_pose.theta + scan_offset);
      ret.range = std::max(0.0, d.norm() + rng.gaussian(lidar.range_noise_sigma));
      ret.intensity = lidar.intensity_threshold +
                      (1.0 - lidar.intensity_threshold) * (0.25 + 0.75 * rng.uniform());
      obs.returns.push_back(ret);
    }
  }

  // Low-intensity background clutter, below the reflector threshold.
  Rng clutter_rng(mix_seed(s.seed, kStreamClutter));
  const int n_clutter = clutter_rng.uniform_int(6, 14);
  for (int i = 0; i < n_clutter; ++i) {
    LidarReturn ret;
    ret.bearing = wrap_angle(clutter_rng.uniform(-M_PI, M_PI));
    ret.range = clutter_rng.uniform(0.5, 12.0);
    ret.intensity = clutter_rng.uniform(0.0, 0.95 * lidar.intensity_threshold);
    obs.returns.push_back(ret);
  }

  std::sort(obs.returns.begin(), obs.returns.end(),
            [](const LidarReturn& a, const LidarReturn& b) {
              if (a.bearing != b.bearing) return a.bearing < b.bearing;
              return a.range < b.range;
            });
  return obs;
}

RfidObservation simulate_rfid(const Scenario& s) {
  RfidObservation obs;
  const Vec2 tag = s.trolley_pose.position();
  for (const RfidAntenna& a : s.sensors.rfid.antennas) {
    const double strength = std::max(0.0, 1.0 - (tag - a.position).norm() / a.radius);
    if (strength <= 0.0) continue;
    const bool wins = !obs.antenna_id || strength > obs.strength ||
                      (strength == obs.strength && a.id < *obs.antenna_id);
    if (wins) {
      obs.strength = strength;
      obs.antenna_id = a.id;
    }
  }
  return obs;
}

}  // namespace trolleyloc
