#include "trolleyloc/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "trolleyloc/errors.hpp"

namespace trolleyloc {

Vec2 trilaterate(const std::vector<double>& ranges, const std::vector<Vec2>& anchors,
                 double* rms_residual) {
  const std::size_t n = anchors.size();
  if (n < 3 || ranges.size() != n) {
    throw TooFewAnchors("trilateration needs >= 3 anchor ranges");
  }

  Vec2 centroid{0, 0};
  for (const Vec2& a : anchors) centroid = centroid + a;
  centroid = centroid / static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (const Vec2& a : anchors) {
    const Vec2 d = a - centroid;
    sxx += d.x * d.x;
    sxy += d.x * d.y;
    syy += d.y * d.y;
  }
  // smaller eigenvalue of the anchor scatter; zero means a line
  const double tr = sxx + syy;
  const double det = sxx * syy - sxy * sxy;
  const double lam_min = tr / 2.0 - std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  if (lam_min <= 1e-12 * std::max(tr, 1e-300)) {
    throw CollinearAnchors("anchor geometry is collinear");
  }

  // Linearized seed: subtract the first sphere equation from the others.
  Eigen::MatrixXd a_mat(n - 1, 2);
  Eigen::VectorXd b_vec(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    a_mat(i - 1, 0) = 2.0 * (anchors[i].x - anchors[0].x);
    a_mat(i - 1, 1) = 2.0 * (anchors[i].y - anchors[0].y);
    b_vec(i - 1) = ranges[0] * ranges[0] - ranges[i] * ranges[i] +
                   anchors[i].squared_norm() - anchors[0].squared_norm();
  }
  Eigen::Vector2d p =
      (a_mat.transpose() * a_mat).ldlt().solve(a_mat.transpose() * b_vec);

  // Gauss-Newton on the range residuals.
  auto cost = [&](const Eigen::Vector2d& q) {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = std::hypot(q.x() - anchors[i].x, q.y() - anchors[i].y) - ranges[i];
      c += r * r;
    }
    return c;
  };
  double current = cost(p);
  bool converged = false;
  for (int iter = 0; iter < 50 && !converged; ++iter) {
    Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
    Eigen::Vector2d jtr = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      const Eigen::Vector2d d(p.x() - anchors[i].x, p.y() - anchors[i].y);
      const double dist = d.norm();
      if (dist < 1e-12) continue;  // residual -r_i with vanishing jacobian
      const Eigen::Vector2d j = d / dist;
      jtj += j * j.transpose();
      jtr += j * (dist - ranges[i]);
    }
    Eigen::Vector2d step = jtj.ldlt().solve(-jtr);
    if (!step.allFinite()) break;
    // step halving keeps the iteration monotone
    for (int h = 0; h < 20; ++h) {
      const double trial = cost(p + step);
      if (trial <= current + 1e-18) {
        p += step;
        current = trial;
        break;
      }
      step *= 0.5;
    }
    converged = step.norm() < 1e-13;
  }
  if (!converged) {
    throw NoConvergence("trilateration did not converge within 50 iterations");
  }
  if (rms_residual != nullptr) {
    *rms_residual = std::sqrt(current / static_cast<double>(n));
  }
  return {p.x(), p.y()};
}

KMeans2Result kmeans2(const std::vector<Vec2>& points) {
  const std::size_t n = points.size();
  double best_d2 = 0.0;
  std::size_t fa = 0, fb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d2 = (points[i] - points[j]).squared_norm();
      if (d2 > best_d2) {
        best_d2 = d2;
        fa = i;
        fb = j;
      }
    }
  }
  if (n < 2 || best_d2 <= 0.0) {
    throw DegenerateCluster("kmeans2 needs at least two distinct points");
  }

  std::array<Vec2, 2> centers = {points[fa], points[fb]};
  std::vector<int> assign(n, 0);
  for (int iter = 0; iter < 1000; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const double d0 = (points[i] - centers[0]).squared_norm();
      const double d1 = (points[i] - centers[1]).squared_norm();
      const int a = d1 < d0 ? 1 : 0;  // ties stay with cluster 0
      if (a != assign[i]) {
        assign[i] = a;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;

    std::array<Vec2, 2> sums = {Vec2{0, 0}, Vec2{0, 0}};
    std::array<int, 2> counts = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      sums[assign[i]] = sums[assign[i]] + points[i];
      ++counts[assign[i]];
    }
    for (int c = 0; c < 2; ++c) {
      if (counts[c] == 0) {
        // re-seed an emptied cluster with the point farthest from the other
        const int other = 1 - c;
        double worst = -1.0;
        std::size_t idx = 0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = (points[i] - centers[other]).squared_norm();
          if (d > worst) {
            worst = d;
            idx = i;
          }
        }
        centers[c] = points[idx];
      } else {
        centers[c] = sums[c] / counts[c];
      }
    }
  }

  KMeans2Result out;
  const bool swap = centers[1].x < centers[0].x ||
                    (centers[1].x == centers[0].x && centers[1].y < centers[0].y);
  out.centroids = swap ? std::array<Vec2, 2>{centers[1], centers[0]} : centers;
  out.assignment.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.assignment[i] = swap ? 1 - assign[i] : assign[i];
  }
  return out;
}

EstimateResult keypoints_pipeline(const KeypointObservation& obs, const Pose2D& robot_pose,
                                  const TrolleyModel& trolley, const CameraConfig& camera) {
  EstimateResult result;
  result.diag.method = "keypoints";
  result.diag.n_points_used = obs.visible_count();
  if (result.diag.n_points_used < 4) return result;

  std::vector<Eigen::Vector3d> pw;
  std::vector<Eigen::Vector2d> uv;
  for (std::size_t k = 0; k < 6; ++k) {
    if (!obs.visibility[k]) continue;
    pw.push_back(trolley.keypoints_local[k]);
    uv.emplace_back(obs.pixels[k].x, obs.pixels[k].y);
  }
  try {
    const EpnpSolution sol = epnp(pw, uv, camera.intrinsics);
    result.state = camera_to_world(sol.pose, robot_pose, camera.mount);
    result.diag.residual = sol.reproj_rms_px;
  } catch (const Error&) {
    result.state.reset();
  }
  return result;
}

EstimateResult uwb_pipeline(const UwbObservation& obs, const UwbConfig& uwb,
                            const TrolleyModel& trolley) {
  EstimateResult result;
  result.diag.method = "uwb";
  std::array<Vec2, 2> tag_pos;
  double worst_residual = 0.0;
  for (std::size_t t = 0; t < 2; ++t) {
    if (!obs.tag_ranges[t] || obs.tag_ranges[t]->size() < 3) return result;
    double res = 0.0;
    try {
      tag_pos[t] = trilaterate(*obs.tag_ranges[t], uwb.anchors, &res);
    } catch (const Error&) {
      return result;
    }
    worst_residual = std::max(worst_residual, res);
    result.diag.n_points_used += static_cast<int>(obs.tag_ranges[t]->size());
  }
  try {
    result.state = pair_to_state(tag_pos[0], tag_pos[1], trolley.offset_d);
  } catch (const DegeneratePair&) {
    return result;
  }
  result.diag.residual = worst_residual;
  return result;
}

EstimateResult reflectors_pipeline(const LidarObservation& obs, const Pose2D& robot_pose,
                                   double intensity_threshold, const TrolleyModel& trolley) {
  EstimateResult result;
  result.diag.method = "reflectors";

  std::vector<Vec2> points;
  for (const LidarReturn& r : obs.returns) {
    if (r.intensity < intensity_threshold) continue;
    points.push_back(transform_point(
        robot_pose, Vec2{r.range * std::cos(r.bearing), r.range * std::sin(r.bearing)}));
  }
  result.diag.n_points_used = static_cast<int>(points.size());
  if (points.size() < 4) return result;

  KMeans2Result clusters;
  try {
    clusters = kmeans2(points);
  } catch (const DegenerateCluster&) {
    return result;
  }
  std::array<int, 2> counts = {0, 0};
  for (int a : clusters.assignment) ++counts[a];
  if (counts[0] < 2 || counts[1] < 2) return result;

  // Sanity gate: the centroid spacing has to look like the reflector pair.
  const double expected_sep =
      (trolley.reflector_offsets[0] - trolley.reflector_offsets[1]).norm();
  const double sep = (clusters.centroids[0] - clusters.centroids[1]).norm();
  if (sep < 0.7 * expected_sep || sep > 1.3 * expected_sep) return result;

  // The cluster labels carry no side information; pick the state whose center
  // falls on the far side of the marker line as seen from the sensor.
  Pose2D state;
  try {
    state = pair_to_state(clusters.centroids[0], clusters.centroids[1], trolley.offset_d);
    const Vec2 mid = midpoint(clusters.centroids[0], clusters.centroids[1]);
    const Vec2 away = mid - robot_pose.position();
    if ((state.position() - mid).dot(away) < 0.0) {
      state = pair_to_state(clusters.centroids[1], clusters.centroids[0], trolley.offset_d);
    }
  } catch (const DegeneratePair&) {
    return result;
  }
  result.state = state;

  double sse = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    sse += (points[i] - clusters.centroids[clusters.assignment[i]]).squared_norm();
  }
  result.diag.residual = std::sqrt(sse / static_cast<double>(points.size()));
  return result;
}

EstimateResult rfid_pipeline(const RfidObservation& obs, const RfidConfig& rfid) {
  EstimateResult result;
  result.diag.method = "rfid";
  result.yaw_defined = false;  // the antenna hit carries no heading
  if (!obs.antenna_id) return result;
  for (const RfidAntenna& a : rfid.antennas) {
    if (a.id == *obs.antenna_id) {
      result.state = Pose2D(a.position.x, a.position.y, 0.0);
      result.diag.residual = (1.0 - obs.strength) * a.radius;  // implied distance
      result.diag.n_points_used = 1;
      return result;
    }
  }
  return result;
}

}  // namespace trolleyloc
