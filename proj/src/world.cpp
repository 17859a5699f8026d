#include "trolleyloc/world.hpp"

#include "trolleyloc/errors.hpp"
#include "trolleyloc/rng.hpp"

namespace trolleyloc {

TrolleyModel TrolleyModel::defaults() {
  TrolleyModel m;
  // Six frame corners spanning a 0.5 x 0.5 x 1.0 m box, split over the front
  // (+x) and rear (-x) planes so the set is non-planar.
  m.keypoints_local = {
      Eigen::Vector3d(0.25, 0.25, 0.05),  Eigen::Vector3d(0.25, -0.25, 0.05),
      Eigen::Vector3d(-0.25, 0.25, 0.35), Eigen::Vector3d(-0.25, -0.25, 0.35),
      Eigen::Vector3d(0.25, 0.00, 0.45),  Eigen::Vector3d(-0.25, 0.00, 1.00)};
  // Tag line and reflector pole both sit offset_d behind the center, so the
  // dual-marker construction returns the frame origin with heading +x.
  m.tag_offsets = {Vec2{-0.3, -0.25}, Vec2{-0.3, 0.25}};
  m.reflector_offsets = {Vec2{-0.3, -0.15}, Vec2{-0.3, 0.15}};
  m.offset_d = 0.3;
  m.body_radius = 0.265;
  m.body_height = 0.85;
  return m;
}

std::vector<Scenario> generate_grid(const GridSpec& spec, const Scenario& base) {
  if (spec.polar_angles_deg.empty() || spec.distances_m.empty() ||
      spec.yaw_steps_deg.empty()) {
    throw EmptyGrid("grid spec has an empty axis");
  }
  std::vector<Scenario> out;
  out.reserve(spec.size());
  std::uint64_t index = 0;
  for (double angle_deg : spec.polar_angles_deg) {
    for (double dist : spec.distances_m) {
      for (double yaw_deg : spec.yaw_steps_deg) {
        Scenario s = base;
        const double a = angle_deg * M_PI / 180.0;
        s.trolley_pose = Pose2D(base.robot_pose.x + dist * std::cos(a),
                                base.robot_pose.y + dist * std::sin(a),
                                yaw_deg * M_PI / 180.0);
        s.seed = mix_seed(base.seed, index);
        out.push_back(s);
        ++index;
      }
    }
  }
  return out;
}

std::array<Eigen::Vector3d, 6> ground_truth_keypoints(const Scenario& s) {
  const Pose6D t = lift_to_3d(s.trolley_pose);
  std::array<Eigen::Vector3d, 6> out;
  for (std::size_t k = 0; k < 6; ++k) {
    out[k] = t.rotation * s.trolley.keypoints_local[k] + t.translation;
  }
  return out;
}

std::array<Vec2, 2> ground_truth_markers(const Scenario& s, MarkerKind which) {
  const auto& offsets = which == MarkerKind::Tags ? s.trolley.tag_offsets
                                                  : s.trolley.reflector_offsets;
  return {transform_point(s.trolley_pose, offsets[0]),
          transform_point(s.trolley_pose, offsets[1])};
}

}  // namespace trolleyloc
