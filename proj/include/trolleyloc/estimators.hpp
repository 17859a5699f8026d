#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trolleyloc/epnp.hpp"
#include "trolleyloc/geometry.hpp"
#include "trolleyloc/sensors.hpp"
#include "trolleyloc/world.hpp"

namespace trolleyloc {

struct EstimateDiagnostics {
  std::string method;
  double residual = 0.0;  // meters or px depending on the pipeline
  int n_points_used = 0;
};

/// Pipeline output. An absent state means the pipeline reported a detection
/// failure; it never stands for a silently wrong pose. yaw_defined is false
/// for pipelines that cannot observe heading (RFID).
struct EstimateResult {
  std::optional<Pose2D> state;
  bool yaw_defined = true;
  EstimateDiagnostics diag;
};

/// Least-squares position from anchor ranges: linearized seed followed by
/// Gauss-Newton on sum(|p - a_i| - r_i)^2. Throws TooFewAnchors (< 3),
/// CollinearAnchors, NoConvergence (> 50 iterations).
Vec2 trilaterate(const std::vector<double>& ranges, const std::vector<Vec2>& anchors,
                 double* rms_residual = nullptr);

struct KMeans2Result {
  std::array<Vec2, 2> centroids;    // ordered by (x, then y)
  std::vector<int> assignment;      // 0/1 per input point
};

/// Lloyd's iteration with k = 2 and deterministic farthest-pair
/// initialization; converged when assignments stop changing. Throws
/// DegenerateCluster when all points coincide.
KMeans2Result kmeans2(const std::vector<Vec2>& points);

EstimateResult keypoints_pipeline(const KeypointObservation& obs, const Pose2D& robot_pose,
                                  const TrolleyModel& trolley, const CameraConfig& camera);

EstimateResult uwb_pipeline(const UwbObservation& obs, const UwbConfig& uwb,
                            const TrolleyModel& trolley);

EstimateResult reflectors_pipeline(const LidarObservation& obs, const Pose2D& robot_pose,
                                   double intensity_threshold, const TrolleyModel& trolley);

EstimateResult rfid_pipeline(const RfidObservation& obs, const RfidConfig& rfid);

}  // namespace trolleyloc
