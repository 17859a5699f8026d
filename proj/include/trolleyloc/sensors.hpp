#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "trolleyloc/geometry.hpp"

namespace trolleyloc {

struct Scenario;  // world.hpp

/// Pinhole intrinsics, pixels.
struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
};

struct CameraConfig {
  double hfov_deg = 87.0;
  double max_range = 8.0;          // meters, gate on the target center
  double pixel_noise_sigma = 1.0;  // px
  CameraIntrinsics intrinsics;     // defaulted from hfov + image size
  int image_width = 1920;
  int image_height = 1080;
  Pose6D mount;  // camera in robot frame; rotation fixed forward-looking

  /// Forward-looking optical mount (camera z along robot +x, x right, y down)
  /// at the given height above the robot origin.
  static Pose6D forward_mount(double height_m);

  static CameraConfig defaults();
};

struct UwbConfig {
  std::vector<Vec2> anchors;        // base station positions, world frame
  double range_noise_sigma = 0.10;  // meters
  double coverage_half_extent = 20.0;

  static UwbConfig defaults();
};

struct LidarConfig {
  double max_reflector_range = 6.0;        // meters
  double angular_resolution_deg = 0.25;
  double range_noise_sigma = 0.02;         // meters, per return
  double bearing_offset_sigma_deg = 0.75;  // per-scan shared offset
  double intensity_threshold = 0.8;
  double rear_visibility_half_angle_deg = 75.0;
  double reflector_width = 0.08;           // meters, face seen by the beam

  static LidarConfig defaults();
};

struct RfidAntenna {
  int id = 0;
  Vec2 position;
  double radius = 4.2;  // meters, activation range
};

struct RfidConfig {
  std::vector<RfidAntenna> antennas;

  static RfidConfig defaults();
};

struct SensorSuiteConfig {
  CameraConfig camera;
  UwbConfig uwb;
  LidarConfig lidar;
  RfidConfig rfid;

  static SensorSuiteConfig defaults();
};

/// Pixel coordinates of the detected keypoints; pixels[k] is meaningful iff
/// visibility[k] is set.
struct KeypointObservation {
  std::array<bool, 6> visibility{};
  std::array<Vec2, 6> pixels{};  // (u, v) px

  int visible_count() const {
    int n = 0;
    for (bool v : visibility) n += v ? 1 : 0;
    return n;
  }
};

/// Per-tag anchor ranges; a tag outside coverage has no entry.
struct UwbObservation {
  std::array<std::optional<std::vector<double>>, 2> tag_ranges;
};

struct LidarReturn {
  double bearing = 0.0;  // radians, sensor frame
  double range = 0.0;    // meters
  double intensity = 0.0;
};

/// Scan returns sorted by bearing.
struct LidarObservation {
  std::vector<LidarReturn> returns;
};

struct RfidObservation {
  std::optional<int> antenna_id;
  double strength = 0.0;  // > 0 iff antenna_id present
};

KeypointObservation simulate_camera(const Scenario& s);
UwbObservation simulate_uwb(const Scenario& s);
LidarObservation simulate_lidar(const Scenario& s);
RfidObservation simulate_rfid(const Scenario& s);

}  // namespace trolleyloc
