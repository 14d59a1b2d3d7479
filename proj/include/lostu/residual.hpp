#pragma once

#include <Eigen/Core>

#include <optional>

#include "lostu/geometry.hpp"

namespace lostu {

// The law-of-sines residual of a measurement x of world point X seen by a
// view with calibration K, rotation R and center c is
//
//   eps = [K^-1 x  x] R (X - c),
//
// which vanishes exactly when the measurement is colinear with the line of
// sight. All Jacobians below differentiate this residual. The rotation
// parameter phi is the camera-frame attitude angle-vector with the
// convention R(phi) = exp(-[phi x]) R, whose sign is immaterial for
// covariance propagation but fixed here so finite differences reproduce
// jac_rotation exactly.

Eigen::Vector3d residual(const Observation& obs, const View& view,
                         const Eigen::Vector3d& point);

/// d eps / d (px, py): the first two columns of -[R(X-c) x] K^-1. The third
/// homogeneous pixel coordinate is fixed at 1 and carries no derivative.
Eigen::Matrix<double, 3, 2> jac_pixel(const Observation& obs, const View& view,
                                      const Eigen::Vector3d& point);

/// d eps / d c = -[K^-1 x  x] R.
Eigen::Matrix3d jac_center(const Observation& obs, const View& view);

/// d eps / d phi = [K^-1 x  x][R(X-c) x].
Eigen::Matrix3d jac_rotation(const Observation& obs, const View& view,
                             const Eigen::Vector3d& point);

/// d eps / d X = [K^-1 x  x] R = -jac_center.
Eigen::Matrix3d jac_point(const Observation& obs, const View& view);

/// d eps / d K(l,m) for an upper-triangular entry of K, using the
/// closed-form derivative of the inverse, dK^-1 = -K^-1 E_lm K^-1.
/// Entry (2,2) is pinned by homogeneous normalization and entries below
/// the diagonal are structurally zero; both raise InvalidInput.
Eigen::Vector3d jac_intrinsic_entry(const Observation& obs, const View& view,
                                    const Eigen::Vector3d& point, int l, int m);

/// Which uncertainty sources participate in residual covariance assembly.
/// Triangulation omits the point source by construction; resection supplies
/// it explicitly and omits the center source instead.
struct NoiseSources {
  bool pixel = true;
  bool rotation = true;
  bool center = true;
  bool intrinsics = true;

  static NoiseSources pixel_only() { return {true, false, false, false}; }
  static NoiseSources center_only() { return {false, false, true, false}; }
  static NoiseSources none() { return {false, false, false, false}; }
};

enum class PinvMode {
  /// Zero eigenvalues below 1e-10 of the largest, invert the rest.
  Thresholded,
  /// Always zero the smallest eigenvalue; the residual covariance is
  /// analytically rank 2 and this keeps noise from reinflating it.
  StrictRank2,
  /// Replace the matrix by its diagonal before inversion (speed switch).
  Diagonal,
};

struct ResidualCovariance {
  Eigen::Matrix3d matrix = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d pseudo_inverse = Eigen::Matrix3d::Zero();
  int rank = 0;
};

/// Relative eigenvalue cutoff used by PinvMode::Thresholded.
inline constexpr double kPinvRelTol = 1e-10;

/// Rank-aware pseudo-inverse of a symmetric PSD matrix.
Eigen::Matrix3d pinv_psd(const Eigen::Matrix3d& m, PinvMode mode,
                         int* rank_out = nullptr);

/// Propagate the enabled uncertainty sources onto the residual,
/// Sigma_eps = sum_s J_s Sigma_s J_s^T, and pseudo-invert the result.
///
/// The pixel, rotation and intrinsics Jacobians contain [R(X-c) x], which
/// requires a scale: supply exactly one of `point_hint` (exact) or
/// `range_hint` (substituting rho [a x] with a the measured line of sight).
/// `point_cov`, when given, adds the 3D-point source (resection use).
///
/// Throws MissingScale when a scale-dependent source is enabled with
/// nonzero covariance and no hint is given, and AllSourcesZero when the
/// assembled covariance is identically zero.
ResidualCovariance residual_covariance(
    const Observation& obs, const View& view, const NoiseSources& sources,
    std::optional<Eigen::Vector3d> point_hint = std::nullopt,
    std::optional<double> range_hint = std::nullopt,
    PinvMode mode = PinvMode::Thresholded,
    const Eigen::Matrix3d* point_cov = nullptr);

}  // namespace lostu
