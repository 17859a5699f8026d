#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "trolleyloc/geometry.hpp"
#include "trolleyloc/sensors.hpp"

namespace trolleyloc {

/// Rigid target geometry, everything in the trolley frame (+x forward).
/// The marker pairs are placed so that pair_to_state(pair, offset_d) lands on
/// the frame origin with heading +x; body_radius/body_height form the
/// cylinder used as the self-occlusion proxy.
struct TrolleyModel {
  std::array<Eigen::Vector3d, 6> keypoints_local;
  std::array<Vec2, 2> tag_offsets;        // UWB labels, one per side
  std::array<Vec2, 2> reflector_offsets;  // rear pole
  double offset_d = 0.3;                  // meters, marker line -> center
  double body_radius = 0.265;             // meters, occlusion proxy
  double body_height = 0.85;              // meters, occlusion proxy

  static TrolleyModel defaults();
};

/// One simulated trial; seed fully determines every stochastic draw.
struct Scenario {
  Pose2D robot_pose;
  Pose2D trolley_pose;
  TrolleyModel trolley;
  SensorSuiteConfig sensors;
  std::uint64_t seed = 0;
};

/// Polar experiment grid: angle x distance rings around the robot, with a
/// full turn of trolley yaws at each ring point.
struct GridSpec {
  std::vector<double> polar_angles_deg = {0, 15, 30, 45, 60, 75, 90};
  std::vector<double> distances_m = {3.0, 4.5, 6.0, 7.5, 9.0};
  std::vector<double> yaw_steps_deg = {0,   30,  60,  90,  120, 150,
                                       180, 210, 240, 270, 300, 330};

  std::size_t size() const {
    return polar_angles_deg.size() * distances_m.size() * yaw_steps_deg.size();
  }
};

/// One scenario per (angle, distance, yaw) triple in lexicographic order.
/// Robot pose, trolley model and sensor configs come from `base`; per-scenario
/// seeds are mix_seed(base.seed, triple_index). Throws EmptyGrid on empty axes.
std::vector<Scenario> generate_grid(const GridSpec& spec, const Scenario& base);

/// Keypoints placed by the trolley planar pose (lifted to SE(3), z preserved).
std::array<Eigen::Vector3d, 6> ground_truth_keypoints(const Scenario& s);

enum class MarkerKind { Tags, Reflectors };

/// Tag or reflector pair in the world frame.
std::array<Vec2, 2> ground_truth_markers(const Scenario& s, MarkerKind which);

}  // namespace trolleyloc
