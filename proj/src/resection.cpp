#include "lostu/resection.hpp"

#include <Eigen/Dense>

#include "lostu/errors.hpp"
#include "lostu/residual.hpp"

namespace lostu {

namespace {

constexpr double kNormalRankTol = 1e-12;

Eigen::Vector3d solve_unit_weight(const View& view,
                                  const std::vector<ResectionPoint>& points) {
  const Eigen::Matrix3d kinv = view.intrinsics.inverse_matrix();
  const int n = static_cast<int>(points.size());
  Eigen::MatrixXd lhs(2 * n, 3);
  Eigen::VectorXd rhs(2 * n);
  for (int i = 0; i < n; ++i) {
    const Eigen::Matrix3d block =
        cross_matrix(kinv * points[i].obs.pixel) * view.pose.rotation;
    lhs.middleRows<2>(2 * i) = block.topRows<2>();
    rhs.segment<2>(2 * i) = block.topRows<2>() * points[i].position;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(lhs);
  if (qr.rank() < 3) {
    throw RankDeficient("resection system has rank < 3");
  }
  return qr.solve(rhs);
}

}  // namespace

ResectionResult estimate_camera_center(const View& view,
                                       const std::vector<ResectionPoint>& points,
                                       const ResectionOptions& options) {
  if (points.size() < 2) {
    throw RankDeficient("camera-center estimation needs at least two points");
  }

  const Eigen::Vector3d initial_center = solve_unit_weight(view, points);

  NoiseSources sources = options.sources;
  sources.center = false;

  // View copy carrying the initial center so the scale-dependent Jacobians
  // can be evaluated at a concrete geometry.
  View anchored = view;
  anchored.pose.center = initial_center;

  bool any_source = false;
  std::vector<Eigen::Matrix3d> weights(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const ResectionPoint& point = points[i];
    const bool point_on = !point.cov.isZero(0.0);
    const bool pixel_on = sources.pixel && !point.obs.cov2d.isZero(0.0);
    const bool rot_on =
        sources.rotation && !view.uncertainty.rot_cov.isZero(0.0);
    const bool intr_on =
        sources.intrinsics && view.intrinsics_var && view.intrinsics_var->any();
    if (!(point_on || pixel_on || rot_on || intr_on)) {
      weights[i] = Eigen::Matrix3d::Zero();
      continue;
    }
    any_source = true;
    weights[i] = residual_covariance(point.obs, anchored, sources,
                                     point.position, std::nullopt, options.pinv,
                                     point.cov.isZero(0.0) ? nullptr : &point.cov)
                     .pseudo_inverse;
  }

  ResectionResult result;
  if (!any_source) {
    result.center = initial_center;
    return result;
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (weights[i].isZero(0.0)) {
      throw AllSourcesZero(
          "an observation has no enabled covariance while others do");
    }
  }

  const Eigen::Matrix3d kinv = view.intrinsics.inverse_matrix();
  Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Eigen::Matrix3d block =
        cross_matrix(kinv * points[i].obs.pixel) * view.pose.rotation;
    const Eigen::Matrix3d gram = block.transpose() * weights[i] * block;
    normal += gram;
    rhs += gram * points[i].position;
  }
  normal = 0.5 * (normal + normal.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(normal);
  const Eigen::Vector3d lambda = eig.eigenvalues();
  if (!(lambda[0] > kNormalRankTol * std::max(lambda[2], 0.0))) {
    throw RankDeficient("resection normal matrix has rank < 3");
  }
  result.covariance = eig.eigenvectors() * lambda.cwiseInverse().asDiagonal() *
                      eig.eigenvectors().transpose();
  result.center = result.covariance * rhs;

  for (std::size_t i = 0; i < points.size(); ++i) {
    const Eigen::Vector3d eps =
        (kinv * points[i].obs.pixel)
            .cross(view.pose.rotation * (points[i].position - result.center));
    result.residual_cost += eps.dot(weights[i] * eps);
  }
  return result;
}

}  // namespace lostu
