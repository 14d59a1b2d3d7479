#pragma once

#include <Eigen/Core>

#include <vector>

#include "lostu/geometry.hpp"
#include "lostu/residual.hpp"

namespace lostu {

/// A known 3D point observed by the camera being located. `cov` is the
/// point's covariance; zero means the point is treated as exact.
struct ResectionPoint {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  Observation obs;
};

struct ResectionResult {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
  double residual_cost = 0.0;
};

struct ResectionOptions {
  /// Enabled sources for the residual covariance. The center source is
  /// excluded here by construction (it is the quantity being estimated),
  /// mirroring the exclusion of the point source in triangulation; the
  /// 3D-point covariances enter through ResectionPoint::cov.
  NoiseSources sources;
  PinvMode pinv = PinvMode::StrictRank2;
};

/// Optimal camera-center estimation with known rotation and intrinsics:
/// the mirror of uncertainty-aware triangulation with the roles of points
/// and centers swapped. The camera center of `view` is ignored; ranges for
/// the scale-dependent Jacobians come from an initial unit-weight solve.
/// Returns the center and its Gauss-Markov covariance (zero when every
/// enabled source is zero). Throws RankDeficient for fewer than two
/// points or degenerate geometry.
ResectionResult estimate_camera_center(const View& view,
                                       const std::vector<ResectionPoint>& points,
                                       const ResectionOptions& options = {});

}  // namespace lostu
