#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <vector>

#include "lostu/rng.hpp"

namespace lostu {

/// Boresight axis of the camera frame.
inline const Eigen::Vector3d kBoresight{0.0, 0.0, 1.0};

/// Skew-symmetric cross-product matrix, [a x] b = a x b.
inline Eigen::Matrix3d cross_matrix(const Eigen::Vector3d& a) {
  Eigen::Matrix3d m;
  m << 0.0, -a.z(), a.y(), a.z(), 0.0, -a.x(), -a.y(), a.x(), 0.0;
  return m;
}

/// Rotation matrix for an angle-vector (exact exponential map).
Eigen::Matrix3d exp_so3(const Eigen::Vector3d& phi);

/// Pinhole calibration. The assembled matrix is upper triangular with
/// K(2,2) = 1 and has a closed-form inverse.
struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  double skew = 0.0;

  Eigen::Matrix3d matrix() const {
    Eigen::Matrix3d k;
    k << fx, skew, cx, 0.0, fy, cy, 0.0, 0.0, 1.0;
    return k;
  }

  Eigen::Matrix3d inverse_matrix() const {
    Eigen::Matrix3d ki;
    ki << 1.0 / fx, -skew / (fx * fy), (skew * cy - cx * fy) / (fx * fy),  //
        0.0, 1.0 / fy, -cy / fy,                                           //
        0.0, 0.0, 1.0;
    return ki;
  }
};

/// Rigid camera pose. `rotation` maps world-frame vectors into the camera
/// frame; `center` is the camera position in world coordinates, so a world
/// point X appears in the camera frame as rotation * (X - center).
struct CameraPose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
};

/// Gaussian pose uncertainty. `rot_cov` is the covariance (rad^2) of the
/// camera-frame attitude angle-vector phi, with the convention that a
/// perturbed rotation is exp([phi x]) * rotation. `center_cov` is in
/// squared world units.
struct PoseUncertainty {
  Eigen::Matrix3d rot_cov = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d center_cov = Eigen::Matrix3d::Zero();

  static PoseUncertainty isotropic(double sigma_phi_rad, double sigma_c) {
    PoseUncertainty u;
    u.rot_cov = sigma_phi_rad * sigma_phi_rad * Eigen::Matrix3d::Identity();
    u.center_cov = sigma_c * sigma_c * Eigen::Matrix3d::Identity();
    return u;
  }
};

/// Per-entry variances (pixels^2) for the free entries of K.
struct IntrinsicsVariance {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  double skew = 0.0;

  bool any() const {
    return fx > 0.0 || fy > 0.0 || cx > 0.0 || cy > 0.0 || skew > 0.0;
  }
};

/// A homogeneous pixel measurement with its 2D covariance. The third
/// component of `pixel` is always exactly 1.
struct Observation {
  Eigen::Vector3d pixel = kBoresight;
  Eigen::Matrix2d cov2d = Eigen::Matrix2d::Zero();

  Observation() = default;
  Observation(double px, double py,
              const Eigen::Matrix2d& cov = Eigen::Matrix2d::Zero())
      : pixel(px, py, 1.0), cov2d(cov) {}
};

struct View {
  CameraIntrinsics intrinsics;
  CameraPose pose;
  PoseUncertainty uncertainty;
  std::optional<IntrinsicsVariance> intrinsics_var;
};

struct TrackEntry {
  int view_id = 0;
  Observation obs;
};

/// All measurements of one 3D point across views.
struct Track {
  int point_id = 0;
  std::vector<TrackEntry> entries;
};

struct Scene {
  std::vector<View> views;
  std::vector<Eigen::Vector3d> points;  // optional ground truth
  std::vector<Track> tracks;
};

/// Throw InvalidInput if a component violates its invariants.
void validate(const CameraIntrinsics& intrinsics);
void validate(const CameraPose& pose);
void validate(const PoseUncertainty& uncertainty);
void validate(const Observation& obs);
void validate(const View& view);
void validate(const Scene& scene);

/// Pinhole projection of a world point; the result carries no covariance.
/// Throws CheiralityError when the point is not strictly in front.
Observation project(const Eigen::Vector3d& point, const View& view);

/// Unit line-of-sight direction of a measurement in the camera frame.
Eigen::Vector3d los_direction(const Observation& obs, const View& view);

/// Line of sight rotated into the world frame.
Eigen::Vector3d los_direction_world(const Observation& obs, const View& view);

/// Draw a perturbed copy of the view: center from N(center, center_cov),
/// rotation left-perturbed by exp([phi x]) with phi ~ N(0, rot_cov).
/// Deterministic for a fixed seed.
View sample_noisy_view(const View& view, std::uint64_t rng_seed);
View sample_noisy_view(const View& view, Rng& rng);

/// World->camera rotation that points the boresight from `eye` at `target`,
/// with roll fixed by the world up axis (+y by default).
Eigen::Matrix3d look_at_rotation(
    const Eigen::Vector3d& eye, const Eigen::Vector3d& target,
    const Eigen::Vector3d& up = Eigen::Vector3d(0.0, 1.0, 0.0));

/// Symmetric PSD square root, tolerant of eigenvalues that are zero to
/// within round-off.
Eigen::Matrix3d psd_sqrt(const Eigen::Matrix3d& m);

}  // namespace lostu
