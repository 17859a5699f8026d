#pragma once

#include <vector>

#include "trolleyloc/geometry.hpp"
#include "trolleyloc/sensors.hpp"

namespace trolleyloc {

struct EpnpSolution {
  Pose6D pose;  // target frame -> camera frame
  double reproj_rms_px = 0.0;
  int n_points = 0;
};

/// Pose from n >= 4 3D-2D correspondences: the reference points are expressed
/// as barycentric combinations of 4 control points (3 when the points are
/// coplanar), the control-point camera coordinates come from the null space of
/// the 2n x 12 projection system, and the beta combinations (N = 1..3) are
/// refined by Gauss-Newton on the inter-control-point distances. The candidate
/// with the lowest reprojection error wins.
///
/// Throws TooFewPoints (n < 4), DegenerateConfiguration (collinear points or
/// an unsolvable system) and BehindCamera (best solution has no point with
/// positive depth).
EpnpSolution epnp(const std::vector<Eigen::Vector3d>& world_points,
                  const std::vector<Eigen::Vector2d>& image_points,
                  const CameraIntrinsics& k);

}  // namespace trolleyloc
