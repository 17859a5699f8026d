#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace trolleyloc {

/// Planar point / vector, meters.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double squared_norm() const { return x * x + y * y; }
  double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// Normalizes an angle into (-pi, pi].
double wrap_angle(double theta);

/// Planar pose (x, y, theta); theta is kept normalized to (-pi, pi].
struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Pose2D() = default;
  Pose2D(double x_, double y_, double theta_) : x(x_), y(y_), theta(wrap_angle(theta_)) {}

  Vec2 position() const { return {x, y}; }
};

/// Rigid transform in 3D: p_out = rotation * p_in + translation.
struct Pose6D {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
};

/// Proper orthonormal check (R^T R = I, det = +1) at the given tolerance.
bool is_proper_rotation(const Eigen::Matrix3d& r, double tol = 1e-9);

/// Two points closer than this are treated as a coincident (degenerate) pair.
inline constexpr double kDegeneratePairEps = 1e-9;

/// Midpoint of the two marker points.
Vec2 midpoint(const Vec2& a, const Vec2& b);

/// Unit vector from a to b. Throws DegeneratePair when the points coincide
/// within kDegeneratePairEps.
Vec2 unit_between(const Vec2& a, const Vec2& b);

/// Marker-line normal (y_u, -x_u). Expects a unit vector.
Vec2 perp(const Vec2& u);

/// Point at signed distance d from the midpoint of (a, b) along perp(unit_between(a, b)).
Vec2 offset_point(const Vec2& a, const Vec2& b, double d);

/// Planar state from a marker pair: position = offset_point(a, b, d), heading
/// along the offset direction (theta = atan2 of the perp vector).
Pose2D pair_to_state(const Vec2& a, const Vec2& b, double d);

// SE(2) group operations.
Pose2D compose(const Pose2D& p, const Pose2D& q);
Pose2D invert(const Pose2D& p);
Vec2 transform_point(const Pose2D& p, const Vec2& v);

/// Lifts a planar pose to SE(3): rotation about z, translation (x, y, 0).
Pose6D lift_to_3d(const Pose2D& p);

/// Yaw (rotation about the world vertical) extracted from a 3D rotation.
double yaw_of(const Eigen::Matrix3d& r);

/// Chains target-in-camera -> camera-in-robot (mount) -> robot-in-world and
/// projects down to the planar state.
Pose2D camera_to_world(const Pose6D& pose_in_camera, const Pose2D& robot_pose,
                       const Pose6D& camera_mount);

}  // namespace trolleyloc
