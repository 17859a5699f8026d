#include "trolleyloc/epnp.hpp"

#include <limits>

#include "trolleyloc/errors.hpp"

namespace trolleyloc {

namespace {

struct ControlFrame {
  std::vector<Eigen::Vector3d> points;      // control points, world frame
  Eigen::MatrixXd alphas;                   // n x m barycentric coordinates
  std::vector<std::pair<int, int>> pairs;   // index pairs over control points
  std::vector<double> pair_dist;            // world distances per pair
};

ControlFrame choose_control_points(const std::vector<Eigen::Vector3d>& pts) {
  const int n = static_cast<int>(pts.size());
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& p : pts) centroid += p;
  centroid /= n;

  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  for (const auto& p : pts) {
    const Eigen::Vector3d d = p - centroid;
    scatter += d * d.transpose();
  }
  scatter /= n;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(scatter);
  const Eigen::Vector3d ev = eig.eigenvalues().cwiseMax(0.0);  // ascending
  if (ev(1) <= 1e-12 * std::max(ev(2), 1e-300)) {
    throw DegenerateConfiguration("reference points are collinear");
  }
  const bool planar = ev(0) <= 1e-10 * ev(2);

  ControlFrame cf;
  cf.points.push_back(centroid);
  cf.points.push_back(centroid + std::sqrt(ev(2)) * eig.eigenvectors().col(2));
  cf.points.push_back(centroid + std::sqrt(ev(1)) * eig.eigenvectors().col(1));
  if (!planar) {
    cf.points.push_back(centroid + std::sqrt(ev(0)) * eig.eigenvectors().col(0));
  }
  const int m = static_cast<int>(cf.points.size());

  Eigen::MatrixXd basis(3, m - 1);
  for (int j = 1; j < m; ++j) basis.col(j - 1) = cf.points[j] - centroid;
  const Eigen::MatrixXd pinv =
      (basis.transpose() * basis).ldlt().solve(basis.transpose());

  cf.alphas.resize(n, m);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd a = pinv * (pts[i] - centroid);
    cf.alphas(i, 0) = 1.0 - a.sum();
    for (int j = 1; j < m; ++j) cf.alphas(i, j) = a(j - 1);
  }

  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      cf.pairs.emplace_back(a, b);
      cf.pair_dist.push_back((cf.points[a] - cf.points[b]).norm());
    }
  }
  return cf;
}

/// Per-pair control-point differences of one null-space basis vector.
std::vector<Eigen::Vector3d> basis_pair_diffs(const Eigen::VectorXd& v,
                                              const std::vector<std::pair<int, int>>& pairs) {
  std::vector<Eigen::Vector3d> out;
  out.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    out.push_back(v.segment<3>(3 * a) - v.segment<3>(3 * b));
  }
  return out;
}

/// Gauss-Newton on sum_pairs (|sum_k beta_k dv_k|^2 - d^2)^2, <= 10 iterations.
void refine_betas(const std::vector<std::vector<Eigen::Vector3d>>& dv,
                  const std::vector<double>& dist, Eigen::VectorXd& betas) {
  const int nb = static_cast<int>(betas.size());
  const int np = static_cast<int>(dist.size());
  for (int iter = 0; iter < 10; ++iter) {
    Eigen::MatrixXd jac(np, nb);
    Eigen::VectorXd res(np);
    for (int p = 0; p < np; ++p) {
      Eigen::Vector3d s = Eigen::Vector3d::Zero();
      for (int k = 0; k < nb; ++k) s += betas(k) * dv[k][p];
      res(p) = s.squaredNorm() - dist[p] * dist[p];
      for (int k = 0; k < nb; ++k) jac(p, k) = 2.0 * s.dot(dv[k][p]);
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd step = jtj.ldlt().solve(-jac.transpose() * res);
    if (!step.allFinite()) return;
    betas += step;
    if (step.norm() < 1e-14) return;
  }
}

/// Linearized initial guesses for the full beta vector. Each case solves the
/// distance system for a different subset of the quadratic products
/// (beta_i * beta_j) and back-substitutes; Gauss-Newton then refines all
/// components. `nb` is the null-space basis size (4, or 3 for planar frames).
Eigen::VectorXd approx_betas(int ncase,
                             const std::vector<std::vector<Eigen::Vector3d>>& dv,
                             const std::vector<double>& dist) {
  const int nb = static_cast<int>(dv.size());
  const int np = static_cast<int>(dist.size());
  Eigen::VectorXd betas = Eigen::VectorXd::Zero(nb);
  Eigen::VectorXd rho(np);
  for (int p = 0; p < np; ++p) rho(p) = dist[p] * dist[p];

  if (ncase == 1) {
    // products [b11, b12, ..., b1nb]
    Eigen::MatrixXd l(np, nb);
    for (int p = 0; p < np; ++p) {
      l(p, 0) = dv[0][p].squaredNorm();
      for (int k = 1; k < nb; ++k) l(p, k) = 2.0 * dv[0][p].dot(dv[k][p]);
    }
    const Eigen::VectorXd b = (l.transpose() * l).ldlt().solve(l.transpose() * rho);
    betas(0) = std::sqrt(std::abs(b(0)));
    if (betas(0) > 0.0) {
      const double sign = b(0) < 0.0 ? -1.0 : 1.0;
      for (int k = 1; k < nb; ++k) betas(k) = sign * b(k) / betas(0);
    }
    return betas;
  }
  if (ncase == 2) {
    // products [b11, b12, b22]
    Eigen::MatrixXd l(np, 3);
    for (int p = 0; p < np; ++p) {
      l(p, 0) = dv[0][p].squaredNorm();
      l(p, 1) = 2.0 * dv[0][p].dot(dv[1][p]);
      l(p, 2) = dv[1][p].squaredNorm();
    }
    Eigen::Vector3d b = (l.transpose() * l).ldlt().solve(l.transpose() * rho);
    if (b(0) < 0.0) b = -b;
    betas(0) = std::sqrt(std::max(0.0, b(0)));
    betas(1) = betas(0) > 0.0 ? b(1) / betas(0) : 0.0;
    return betas;
  }
  // ncase == 3: products [b11, b12, b22, b13, b23]
  Eigen::MatrixXd l(np, 5);
  for (int p = 0; p < np; ++p) {
    l(p, 0) = dv[0][p].squaredNorm();
    l(p, 1) = 2.0 * dv[0][p].dot(dv[1][p]);
    l(p, 2) = dv[1][p].squaredNorm();
    l(p, 3) = 2.0 * dv[0][p].dot(dv[2][p]);
    l(p, 4) = 2.0 * dv[1][p].dot(dv[2][p]);
  }
  Eigen::VectorXd b = (l.transpose() * l).ldlt().solve(l.transpose() * rho);
  if (b(0) < 0.0) b = -b;
  betas(0) = std::sqrt(std::max(0.0, b(0)));
  if (betas(0) > 0.0) {
    betas(1) = b(1) / betas(0);
    betas(2) = b(3) / betas(0);
  }
  return betas;
}

/// Closed-form rigid alignment: rotation/translation mapping world points onto
/// camera points in the least-squares sense (Kabsch).
Pose6D align_points(const std::vector<Eigen::Vector3d>& pw,
                    const std::vector<Eigen::Vector3d>& pc) {
  const int n = static_cast<int>(pw.size());
  Eigen::Vector3d cw = Eigen::Vector3d::Zero(), cc = Eigen::Vector3d::Zero();
  for (int i = 0; i < n; ++i) {
    cw += pw[i];
    cc += pc[i];
  }
  cw /= n;
  cc /= n;
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (int i = 0; i < n; ++i) h += (pw[i] - cw) * (pc[i] - cc).transpose();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d r = svd.matrixV() * svd.matrixU().transpose();
  if (r.determinant() < 0.0) {
    Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
    flip(2, 2) = -1.0;
    r = svd.matrixV() * flip * svd.matrixU().transpose();
  }
  Pose6D pose;
  pose.rotation = r;
  pose.translation = cc - r * cw;
  return pose;
}

double reprojection_rms(const std::vector<Eigen::Vector3d>& pw,
                        const std::vector<Eigen::Vector2d>& uv,
                        const CameraIntrinsics& k, const Pose6D& pose) {
  double sum = 0.0;
  for (std::size_t i = 0; i < pw.size(); ++i) {
    const Eigen::Vector3d p = pose.rotation * pw[i] + pose.translation;
    if (p.z() <= 1e-9) return std::numeric_limits<double>::infinity();
    const double du = k.fx * p.x() / p.z() + k.cx - uv[i].x();
    const double dv = k.fy * p.y() / p.z() + k.cy - uv[i].y();
    sum += du * du + dv * dv;
  }
  return std::sqrt(sum / pw.size());
}

}  // namespace

EpnpSolution epnp(const std::vector<Eigen::Vector3d>& world_points,
                  const std::vector<Eigen::Vector2d>& image_points,
                  const CameraIntrinsics& k) {
  const int n = static_cast<int>(world_points.size());
  if (n < 4 || image_points.size() != world_points.size()) {
    throw TooFewPoints("epnp needs >= 4 matched correspondences");
  }

  const ControlFrame cf = choose_control_points(world_points);
  const int m = static_cast<int>(cf.points.size());

  Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(2 * n, 3 * m);
  for (int i = 0; i < n; ++i) {
    const double u = image_points[i].x(), v = image_points[i].y();
    for (int j = 0; j < m; ++j) {
      const double a = cf.alphas(i, j);
      mat(2 * i, 3 * j) = a * k.fx;
      mat(2 * i, 3 * j + 2) = a * (k.cx - u);
      mat(2 * i + 1, 3 * j + 1) = a * k.fy;
      mat(2 * i + 1, 3 * j + 2) = a * (k.cy - v);
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(mat.transpose() * mat);
  const int nb = m == 4 ? 4 : 3;  // null-space basis size
  const int max_case = m == 4 ? 3 : 2;
  std::vector<std::vector<Eigen::Vector3d>> dv;
  for (int b = 0; b < nb; ++b) {
    dv.push_back(basis_pair_diffs(eig.eigenvectors().col(b), cf.pairs));
  }

  EpnpSolution best;
  best.reproj_rms_px = std::numeric_limits<double>::infinity();
  best.n_points = n;
  bool saw_all_behind = false;

  for (int ncase = 1; ncase <= max_case; ++ncase) {
    Eigen::VectorXd betas = approx_betas(ncase, dv, cf.pair_dist);
    refine_betas(dv, cf.pair_dist, betas);
    if (!betas.allFinite()) continue;

    Eigen::VectorXd x = Eigen::VectorXd::Zero(3 * m);
    for (int b = 0; b < nb; ++b) x += betas(b) * eig.eigenvectors().col(b);

    // reconstructed camera-frame points; fix the global sign by depth
    std::vector<Eigen::Vector3d> pc(n);
    double depth_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      Eigen::Vector3d p = Eigen::Vector3d::Zero();
      for (int j = 0; j < m; ++j) p += cf.alphas(i, j) * x.segment<3>(3 * j);
      pc[i] = p;
      depth_sum += p.z();
    }
    if (depth_sum < 0.0) {
      for (auto& p : pc) p = -p;
    }
    bool any_in_front = false;
    for (const auto& p : pc) any_in_front |= p.z() > 0.0;
    if (!any_in_front) {
      saw_all_behind = true;
      continue;
    }

    const Pose6D pose = align_points(world_points, pc);
    const double rms = reprojection_rms(world_points, image_points, k, pose);
    if (rms < best.reproj_rms_px) {
      best.pose = pose;
      best.reproj_rms_px = rms;
    }
  }

  if (!std::isfinite(best.reproj_rms_px)) {
    if (saw_all_behind) {
      throw BehindCamera("all reconstructed depths are non-positive");
    }
    throw DegenerateConfiguration("no epnp candidate produced a valid pose");
  }
  return best;
}

}  // namespace trolleyloc
