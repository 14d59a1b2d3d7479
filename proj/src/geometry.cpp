#include "lostu/geometry.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "lostu/errors.hpp"

namespace lostu {

namespace {

bool is_symmetric(const Eigen::MatrixXd& m, double tol) {
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

bool is_psd(const Eigen::MatrixXd& m, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  return eig.eigenvalues().minCoeff() >= -tol;
}

}  // namespace

Eigen::Matrix3d exp_so3(const Eigen::Vector3d& phi) {
  const double angle = phi.norm();
  if (angle < 1e-12) {
    // Second-order expansion; error is O(angle^3) which is below double
    // precision at this threshold.
    const Eigen::Matrix3d k = cross_matrix(phi);
    return Eigen::Matrix3d::Identity() + k + 0.5 * k * k;
  }
  const Eigen::Matrix3d k = cross_matrix(phi / angle);
  return Eigen::Matrix3d::Identity() + std::sin(angle) * k +
         (1.0 - std::cos(angle)) * k * k;
}

void validate(const CameraIntrinsics& intrinsics) {
  if (!(intrinsics.fx > 0.0) || !(intrinsics.fy > 0.0)) {
    throw InvalidInput("focal lengths must be positive");
  }
  if (!std::isfinite(intrinsics.cx) || !std::isfinite(intrinsics.cy) ||
      !std::isfinite(intrinsics.skew)) {
    throw InvalidInput("intrinsics must be finite");
  }
}

void validate(const CameraPose& pose) {
  const Eigen::Matrix3d& r = pose.rotation;
  const Eigen::Matrix3d gram = r.transpose() * r;
  if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-10) {
    throw InvalidInput("rotation is not orthonormal");
  }
  if (r.determinant() < 0.0) {
    throw InvalidInput("rotation has negative determinant");
  }
  if (!pose.center.allFinite()) {
    throw InvalidInput("camera center must be finite");
  }
}

void validate(const PoseUncertainty& uncertainty) {
  for (const Eigen::Matrix3d& m : {uncertainty.rot_cov, uncertainty.center_cov}) {
    if (!is_symmetric(m, 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))) {
      throw InvalidInput("pose covariance is not symmetric");
    }
    if (!is_psd(m, 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff()))) {
      throw InvalidInput("pose covariance is not positive semidefinite");
    }
  }
}

void validate(const Observation& obs) {
  if (obs.pixel.z() != 1.0) {
    throw InvalidInput("homogeneous pixel must have third component 1");
  }
  if (!is_symmetric(obs.cov2d, 1e-12 * std::max(1.0, obs.cov2d.cwiseAbs().maxCoeff())) ||
      !is_psd(obs.cov2d, 1e-12 * std::max(1.0, obs.cov2d.cwiseAbs().maxCoeff()))) {
    throw InvalidInput("pixel covariance is not symmetric PSD");
  }
}

void validate(const View& view) {
  validate(view.intrinsics);
  validate(view.pose);
  validate(view.uncertainty);
}

void validate(const Scene& scene) {
  for (const View& view : scene.views) validate(view);
  for (const Track& track : scene.tracks) {
    if (track.entries.empty()) {
      throw InvalidInput("track has no observations");
    }
    std::vector<bool> seen(scene.views.size(), false);
    for (const TrackEntry& entry : track.entries) {
      if (entry.view_id < 0 ||
          entry.view_id >= static_cast<int>(scene.views.size())) {
        throw InvalidInput("track references a view that does not exist");
      }
      if (seen[entry.view_id]) {
        throw InvalidInput("track references the same view twice");
      }
      seen[entry.view_id] = true;
      validate(entry.obs);
    }
  }
}

Observation project(const Eigen::Vector3d& point, const View& view) {
  const Eigen::Vector3d in_camera =
      view.pose.rotation * (point - view.pose.center);
  const double depth = kBoresight.dot(in_camera);
  if (!(depth > 0.0)) {
    throw CheiralityError("point is behind the camera");
  }
  const Eigen::Vector3d pixel = view.intrinsics.matrix() * (in_camera / depth);
  return Observation(pixel.x(), pixel.y());
}

Eigen::Vector3d los_direction(const Observation& obs, const View& view) {
  const Eigen::Vector3d v = view.intrinsics.inverse_matrix() * obs.pixel;
  return v / v.norm();
}

Eigen::Vector3d los_direction_world(const Observation& obs, const View& view) {
  return view.pose.rotation.transpose() * los_direction(obs, view);
}

Eigen::Matrix3d psd_sqrt(const Eigen::Matrix3d& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(m);
  Eigen::Vector3d lambda = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * lambda.cwiseSqrt().asDiagonal() *
         eig.eigenvectors().transpose();
}

View sample_noisy_view(const View& view, Rng& rng) {
  Eigen::Vector3d zc, zphi;
  for (int i = 0; i < 3; ++i) zc[i] = rng.normal();
  for (int i = 0; i < 3; ++i) zphi[i] = rng.normal();

  View noisy = view;
  noisy.pose.center += psd_sqrt(view.uncertainty.center_cov) * zc;
  const Eigen::Vector3d phi = psd_sqrt(view.uncertainty.rot_cov) * zphi;
  noisy.pose.rotation = exp_so3(phi) * view.pose.rotation;
  return noisy;
}

View sample_noisy_view(const View& view, std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  return sample_noisy_view(view, rng);
}

Eigen::Matrix3d look_at_rotation(const Eigen::Vector3d& eye,
                                 const Eigen::Vector3d& target,
                                 const Eigen::Vector3d& up) {
  const Eigen::Vector3d forward = target - eye;
  const double norm = forward.norm();
  if (norm < 1e-15) {
    throw InvalidInput("look_at_rotation: eye coincides with target");
  }
  const Eigen::Vector3d zc = forward / norm;
  Eigen::Vector3d xc = up.cross(zc);
  const double xn = xc.norm();
  if (xn < 1e-12) {
    throw InvalidInput("look_at_rotation: boresight parallel to up axis");
  }
  xc /= xn;
  const Eigen::Vector3d yc = zc.cross(xc);
  Eigen::Matrix3d rotation;
  rotation.row(0) = xc;
  rotation.row(1) = yc;
  rotation.row(2) = zc;
  return rotation;
}

}  // namespace lostu
