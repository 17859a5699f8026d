#include "trolleyloc/geometry.hpp"

#include "trolleyloc/errors.hpp"

namespace trolleyloc {

double wrap_angle(double theta) {
  double t = std::fmod(theta + M_PI, 2.0 * M_PI);
  if (t <= 0.0) t += 2.0 * M_PI;
  return t - M_PI;
}

bool is_proper_rotation(const Eigen::Matrix3d& r, double tol) {
  const Eigen::Matrix3d rtr = r.transpose() * r;
  return (rtr - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= tol &&
         std::abs(r.determinant() - 1.0) <= tol;
}

Vec2 midpoint(const Vec2& a, const Vec2& b) { return (a + b) / 2.0; }

Vec2 unit_between(const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  const double n = d.norm();
  if (n <= kDegeneratePairEps) {
    throw DegeneratePair("marker pair coincides (|b - a| <= 1e-9 m)");
  }
  return d / n;
}

Vec2 perp(const Vec2& u) { return {u.y, -u.x}; }

Vec2 offset_point(const Vec2& a, const Vec2& b, double d) {
  return midpoint(a, b) + d * perp(unit_between(a, b));
}

Pose2D pair_to_state(const Vec2& a, const Vec2& b, double d) {
  const Vec2 v = perp(unit_between(a, b));
  const Vec2 c = midpoint(a, b) + d * v;
  return {c.x, c.y, std::atan2(v.y, v.x)};
}

Pose2D compose(const Pose2D& p, const Pose2D& q) {
  const double c = std::cos(p.theta), s = std::sin(p.theta);
  return {p.x + c * q.x - s * q.y, p.y + s * q.x + c * q.y, p.theta + q.theta};
}

Pose2D invert(const Pose2D& p) {
  const double c = std::cos(p.theta), s = std::sin(p.theta);
  return {-(c * p.x + s * p.y), -(-s * p.x + c * p.y), -p.theta};
}

Vec2 transform_point(const Pose2D& p, const Vec2& v) {
  const double c = std::cos(p.theta), s = std::sin(p.theta);
  return {p.x + c * v.x - s * v.y, p.y + s * v.x + c * v.y};
}

Pose6D lift_to_3d(const Pose2D& p) {
  Pose6D out;
  const double c = std::cos(p.theta), s = std::sin(p.theta);
  out.rotation << c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0;
  out.translation << p.x, p.y, 0.0;
  return out;
}

double yaw_of(const Eigen::Matrix3d& r) { return std::atan2(r(1, 0), r(0, 0)); }

Pose2D camera_to_world(const Pose6D& pose_in_camera, const Pose2D& robot_pose,
                       const Pose6D& camera_mount) {
  const Pose6D robot = lift_to_3d(robot_pose);
  const Eigen::Matrix3d r_world =
      robot.rotation * camera_mount.rotation * pose_in_camera.rotation;
  const Eigen::Vector3d t_world =
      robot.rotation * (camera_mount.rotation * pose_in_camera.translation +
                        camera_mount.translation) +
      robot.translation;
  return {t_world.x(), t_world.y(), yaw_of(r_world)};
}

}  // namespace trolleyloc
