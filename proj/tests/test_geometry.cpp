#include "trolleyloc/geometry.hpp"

#include <Eigen/Dense>

#include "trolleyloc/errors.hpp"
#include "trolleyloc/rng.hpp"
#include "trolleyloc/sensors.hpp"
#include "test_util.hpp"

using namespace trolleyloc;

namespace {

Eigen::Matrix3d se2_matrix(const Pose2D& p) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m(0, 0) = std::cos(p.theta);
  m(0, 1) = -std::sin(p.theta);
  m(1, 0) = std::sin(p.theta);
  m(1, 1) = std::cos(p.theta);
  m(0, 2) = p.x;
  m(1, 2) = p.y;
  return m;
}

Pose2D random_pose(Rng& rng) {
  return {rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-M_PI, M_PI)};
}

}  // namespace

TEST_CASE("midpoint") {
  CHECK_VEC2_NEAR(midpoint({0, 0}, {2, 0}), 1.0, 0.0, 0.0);
  CHECK_VEC2_NEAR(midpoint({1, 1}, {3, 5}), 2.0, 3.0, 0.0);
  CHECK_VEC2_NEAR(midpoint({2, 2}, {2, 2}), 2.0, 2.0, 0.0);
}

TEST_CASE("unit_between") {
  CHECK_VEC2_NEAR(unit_between({0, 0}, {2, 0}), 1.0, 0.0, 1e-15);
  CHECK_VEC2_NEAR(unit_between({0, 0}, {0, -3}), 0.0, -1.0, 1e-15);
  CHECK_THROWS_AS(unit_between({1, 1}, {1, 1}), DegeneratePair);

  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const Vec2 a{rng.uniform(-10, 10), rng.uniform(-10, 10)};
    const Vec2 b{rng.uniform(-10, 10), rng.uniform(-10, 10)};
    if ((b - a).norm() <= kDegeneratePairEps) continue;
    CHECK_NEAR(unit_between(a, b).norm(), 1.0, 1e-12);
  }
}

TEST_CASE("perp follows the stated formula") {
  CHECK_VEC2_NEAR(perp({1, 0}), 0.0, -1.0, 0.0);
  CHECK_VEC2_NEAR(perp({0, 1}), 1.0, 0.0, 0.0);

  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const double t = rng.uniform(-M_PI, M_PI);
    const Vec2 u{std::cos(t), std::sin(t)};
    CHECK_NEAR(perp(u).norm(), 1.0, 1e-12);
    const Vec2 pp = perp(perp(u));
    CHECK_VEC2_NEAR(pp, -u.x, -u.y, 1e-15);
  }
}

TEST_CASE("offset_point") {
  CHECK_VEC2_NEAR(offset_point({0, 0}, {2, 0}, 1.0), 1.0, -1.0, 1e-15);
  CHECK_VEC2_NEAR(offset_point({0, 0}, {2, 0}, 0.0), 1.0, 0.0, 1e-15);
  // hand-evaluated chain: U = (0,-1), V = (-1,0), O = (0,1) -> C = (-2,1)
  CHECK_VEC2_NEAR(offset_point({0, 2}, {0, 0}, 2.0), -2.0, 1.0, 1e-15);
  CHECK_THROWS_AS(offset_point({3, 3}, {3, 3}, 1.0), DegeneratePair);

  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const Vec2 a{rng.uniform(-10, 10), rng.uniform(-10, 10)};
    const Vec2 b{rng.uniform(-10, 10), rng.uniform(-10, 10)};
    const double d = rng.uniform(-3, 3);
    if ((b - a).norm() < 1e-6) continue;
    const Vec2 c = offset_point(a, b, d);
    CHECK_NEAR((c - midpoint(a, b)).norm(), std::abs(d), 1e-9);
    const double half = (b - a).norm() / 2.0;
    CHECK_NEAR((c - a).norm(), std::sqrt(half * half + d * d), 1e-9);
  }
}

TEST_CASE("pair_to_state heading convention") {
  Pose2D s = pair_to_state({0, 0}, {2, 0}, 1.0);
  CHECK_NEAR(s.x, 1.0, 1e-15);
  CHECK_NEAR(s.y, -1.0, 1e-15);
  CHECK_NEAR(s.theta, -M_PI / 2.0, 1e-15);

  s = pair_to_state({0, 2}, {0, 0}, 2.0);
  CHECK_NEAR(s.x, -2.0, 1e-15);
  CHECK_NEAR(s.y, 1.0, 1e-15);
  CHECK_NEAR(std::abs(s.theta), M_PI, 1e-15);

  // swapping the pair while negating d keeps the position
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const Vec2 a{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const Vec2 b{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const double d = rng.uniform(-2, 2);
    if ((b - a).norm() < 1e-6) continue;
    const Pose2D p1 = pair_to_state(a, b, d);
    const Pose2D p2 = pair_to_state(b, a, -d);
    CHECK_NEAR(p1.x, p2.x, 1e-12);
    CHECK_NEAR(p1.y, p2.y, 1e-12);
  }
}

TEST_CASE("pair_to_state is translation invariant") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const Vec2 a{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const Vec2 b{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const Vec2 t{rng.uniform(-20, 20), rng.uniform(-20, 20)};
    const double d = rng.uniform(-2, 2);
    if ((b - a).norm() < 1e-6) continue;
    const Pose2D p = pair_to_state(a, b, d);
    const Pose2D pt = pair_to_state(a + t, b + t, d);
    CHECK_NEAR(pt.x, p.x + t.x, 1e-9);
    CHECK_NEAR(pt.y, p.y + t.y, 1e-9);
    CHECK_NEAR(pt.theta, p.theta, 1e-12);
  }
}

TEST_CASE("se2 operations") {
  const Pose2D q{2.5, -1.0, 0.7};
  const Pose2D c = compose(Pose2D{0, 0, 0}, q);
  CHECK_NEAR(c.x, q.x, 0.0);
  CHECK_NEAR(c.y, q.y, 0.0);
  CHECK_NEAR(c.theta, q.theta, 0.0);

  const Pose2D inv = invert(Pose2D{1, 2, M_PI / 2});
  CHECK_NEAR(inv.x, -2.0, 1e-15);
  CHECK_NEAR(inv.y, 1.0, 1e-15);
  CHECK_NEAR(inv.theta, -M_PI / 2, 1e-15);

  CHECK_VEC2_NEAR(transform_point(Pose2D{0, 0, M_PI / 2}, {1, 0}), 0.0, 1.0, 1e-15);
}

TEST_CASE("se2 group axioms against the matrix oracle") {
  Rng rng(6);
  for (int i = 0; i < 300; ++i) {
    const Pose2D p = random_pose(rng), q = random_pose(rng), r = random_pose(rng);

    const Eigen::Matrix3d mpq = se2_matrix(p) * se2_matrix(q);
    const Pose2D pq = compose(p, q);
    CHECK_NEAR(pq.x, mpq(0, 2), 1e-9);
    CHECK_NEAR(pq.y, mpq(1, 2), 1e-9);
    CHECK_NEAR(std::cos(pq.theta), mpq(0, 0), 1e-9);
    CHECK_NEAR(std::sin(pq.theta), mpq(1, 0), 1e-9);

    const Pose2D assoc1 = compose(compose(p, q), r);
    const Pose2D assoc2 = compose(p, compose(q, r));
    CHECK_NEAR(assoc1.x, assoc2.x, 1e-9);
    CHECK_NEAR(assoc1.y, assoc2.y, 1e-9);
    CHECK_NEAR(wrap_angle(assoc1.theta - assoc2.theta), 0.0, 1e-9);

    const Pose2D ident = compose(p, invert(p));
    CHECK_NEAR(ident.x, 0.0, 1e-9);
    CHECK_NEAR(ident.y, 0.0, 1e-9);
    CHECK_NEAR(ident.theta, 0.0, 1e-9);

    const Vec2 v{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const Vec2 round = transform_point(invert(p), transform_point(p, v));
    CHECK_VEC2_NEAR(round, v.x, v.y, 1e-9);
  }
}

TEST_CASE("wrap_angle lands in (-pi, pi]") {
  CHECK_NEAR(wrap_angle(M_PI), M_PI, 0.0);
  CHECK_NEAR(wrap_angle(-M_PI), M_PI, 0.0);
  CHECK_NEAR(wrap_angle(3 * M_PI), M_PI, 1e-12);
  CHECK_NEAR(wrap_angle(0.0), 0.0, 0.0);
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const double t = wrap_angle(rng.uniform(-50, 50));
    CHECK(t > -M_PI);
    CHECK(t <= M_PI);
  }
}

TEST_CASE("camera_to_world") {
  const Pose6D identity_mount;

  SUBCASE("identity everywhere") {
    const Pose2D out = camera_to_world(Pose6D{}, Pose2D{0, 0, 0}, identity_mount);
    CHECK_NEAR(out.x, 0.0, 1e-15);
    CHECK_NEAR(out.y, 0.0, 1e-15);
    CHECK_NEAR(out.theta, 0.0, 1e-15);
  }

  SUBCASE("forward mount, target straight ahead") {
    const Pose6D mount = CameraConfig::forward_mount(0.5);
    Pose6D in_camera;
    in_camera.translation = Eigen::Vector3d(0, 0, 2);  // 2 m along the optical axis
    const Pose2D out = camera_to_world(in_camera, Pose2D{1, 0, 0}, mount);
    CHECK_NEAR(out.x, 3.0, 1e-12);
    CHECK_NEAR(out.y, 0.0, 1e-12);
  }

  SUBCASE("frame-chain oracle") {
    const Pose6D mount = CameraConfig::forward_mount(0.4);
    Rng rng(8);
    for (int i = 0; i < 100; ++i) {
      const Pose2D robot = random_pose(rng);
      Pose6D in_camera;
      in_camera.rotation =
          Eigen::AngleAxisd(rng.uniform(-M_PI, M_PI), Eigen::Vector3d::UnitY())
              .toRotationMatrix();
      in_camera.translation =
          Eigen::Vector3d(rng.uniform(-2, 2), rng.uniform(-1, 1), rng.uniform(1, 6));

      Eigen::Matrix4d t_wr = Eigen::Matrix4d::Identity();
      t_wr.block<3, 3>(0, 0) = lift_to_3d(robot).rotation;
      t_wr.block<3, 1>(0, 3) = lift_to_3d(robot).translation;
      Eigen::Matrix4d t_rc = Eigen::Matrix4d::Identity();
      t_rc.block<3, 3>(0, 0) = mount.rotation;
      t_rc.block<3, 1>(0, 3) = mount.translation;
      Eigen::Matrix4d t_ct = Eigen::Matrix4d::Identity();
      t_ct.block<3, 3>(0, 0) = in_camera.rotation;
      t_ct.block<3, 1>(0, 3) = in_camera.translation;
      const Eigen::Matrix4d t_wt = t_wr * t_rc * t_ct;

      const Pose2D out = camera_to_world(in_camera, robot, mount);
      CHECK_NEAR(out.x, t_wt(0, 3), 1e-9);
      CHECK_NEAR(out.y, t_wt(1, 3), 1e-9);
      CHECK_NEAR(wrap_angle(out.theta - std::atan2(t_wt(1, 0), t_wt(0, 0))), 0.0, 1e-9);
    }
  }

  SUBCASE("pure yaw adds") {
    const Pose6D mount = CameraConfig::forward_mount(0.5);
    Rng rng(9);
    for (int i = 0; i < 100; ++i) {
      const double psi = rng.uniform(-M_PI, M_PI);
      const double phi = rng.uniform(-M_PI, M_PI);
      Pose6D in_camera;
      // target yawed by phi relative to the robot, expressed in the camera frame
      in_camera.rotation = mount.rotation.transpose() *
                           Eigen::AngleAxisd(phi, Eigen::Vector3d::UnitZ()).toRotationMatrix();
      in_camera.translation = Eigen::Vector3d(0, 0, 3);
      const Pose2D out = camera_to_world(in_camera, Pose2D{0, 0, psi}, mount);
      CHECK_NEAR(wrap_angle(out.theta - wrap_angle(psi + phi)), 0.0, 1e-9);
    }
  }
}

TEST_CASE("rotation validity check") {
  CHECK(is_proper_rotation(Eigen::Matrix3d::Identity()));
  Eigen::Matrix3d reflection = Eigen::Matrix3d::Identity();
  reflection(2, 2) = -1.0;
  CHECK_FALSE(is_proper_rotation(reflection));
  Eigen::Matrix3d scaled = 1.001 * Eigen::Matrix3d::Identity();
  CHECK_FALSE(is_proper_rotation(scaled));
}
