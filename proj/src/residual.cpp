#include "lostu/residual.hpp"

#include <Eigen/Dense>

#include "lostu/errors.hpp"

namespace lostu {

namespace {

Eigen::Vector3d calibrated_pixel(const Observation& obs, const View& view) {
  return view.intrinsics.inverse_matrix() * obs.pixel;
}

Eigen::Vector3d rotated_offset(const View& view, const Eigen::Vector3d& point) {
  return view.pose.rotation * (point - view.pose.center);
}

}  // namespace

Eigen::Vector3d residual(const Observation& obs, const View& view,
                         const Eigen::Vector3d& point) {
  return calibrated_pixel(obs, view).cross(rotated_offset(view, point));
}

// The residual is linear in the pixel, so this Jacobian depends only on
// the geometry; the observation parameter is kept for signature symmetry.
Eigen::Matrix<double, 3, 2> jac_pixel([[maybe_unused]] const Observation& obs,
                                      const View& view,
                                      const Eigen::Vector3d& point) {
  const Eigen::Matrix3d full = -cross_matrix(rotated_offset(view, point)) *
                               view.intrinsics.inverse_matrix();
  return full.leftCols<2>();
}

Eigen::Matrix3d jac_center(const Observation& obs, const View& view) {
  return -cross_matrix(calibrated_pixel(obs, view)) * view.pose.rotation;
}

Eigen::Matrix3d jac_rotation(const Observation& obs, const View& view,
                             const Eigen::Vector3d& point) {
  return cross_matrix(calibrated_pixel(obs, view)) *
         cross_matrix(rotated_offset(view, point));
}

Eigen::Matrix3d jac_point(const Observation& obs, const View& view) {
  return cross_matrix(calibrated_pixel(obs, view)) * view.pose.rotation;
}

Eigen::Vector3d jac_intrinsic_entry(const Observation& obs, const View& view,
                                    const Eigen::Vector3d& point, int l,
                                    int m) {
  if (l < 0 || l > 2 || m < 0 || m > 2 || l > m) {
    throw InvalidInput("intrinsic entry below the diagonal is not a free parameter");
  }
  if (l == 2 && m == 2) {
    throw InvalidInput("K(2,2) is pinned by homogeneous normalization");
  }
  const Eigen::Matrix3d kinv = view.intrinsics.inverse_matrix();
  Eigen::Matrix3d unit = Eigen::Matrix3d::Zero();
  unit(l, m) = 1.0;
  const Eigen::Matrix3d dkinv = -kinv * unit * kinv;
  return -cross_matrix(rotated_offset(view, point)) * (dkinv * obs.pixel);
}

Eigen::Matrix3d pinv_psd(const Eigen::Matrix3d& m, PinvMode mode,
                         int* rank_out) {
  if (mode == PinvMode::Diagonal) {
    const Eigen::Vector3d d = m.diagonal();
    const double dmax = d.maxCoeff();
    Eigen::Vector3d inv = Eigen::Vector3d::Zero();
    int rank = 0;
    for (int i = 0; i < 3; ++i) {
      if (d[i] > kPinvRelTol * dmax) {
        inv[i] = 1.0 / d[i];
        ++rank;
      }
    }
    if (rank_out) *rank_out = rank;
    return inv.asDiagonal();
  }

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(m);
  const Eigen::Vector3d lambda = eig.eigenvalues();  // ascending
  const double lmax = lambda[2];
  const double cutoff = kPinvRelTol * lmax;
  Eigen::Vector3d inv = Eigen::Vector3d::Zero();
  int rank = 0;
  const int first = (mode == PinvMode::StrictRank2) ? 1 : 0;
  for (int i = first; i < 3; ++i) {
    if (lambda[i] > cutoff) {
      inv[i] = 1.0 / lambda[i];
      ++rank;
    }
  }
  if (rank_out) *rank_out = rank;
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

ResidualCovariance residual_covariance(const Observation& obs, const View& view,
                                       const NoiseSources& sources,
                                       std::optional<Eigen::Vector3d> point_hint,
                                       std::optional<double> range_hint,
                                       PinvMode mode,
                                       const Eigen::Matrix3d* point_cov) {
  if (point_hint && range_hint) {
    throw InvalidInput("supply either a point hint or a range hint, not both");
  }

  const bool pixel_on = sources.pixel && !obs.cov2d.isZero(0.0);
  const bool rot_on =
      sources.rotation && !view.uncertainty.rot_cov.isZero(0.0);
  const bool center_on =
      sources.center && !view.uncertainty.center_cov.isZero(0.0);
  const bool intr_on = sources.intrinsics && view.intrinsics_var &&
                       view.intrinsics_var->any();
  const bool point_on = point_cov != nullptr && !point_cov->isZero(0.0);

  const bool needs_scale = pixel_on || rot_on || intr_on;
  if (needs_scale && !point_hint && !range_hint) {
    throw MissingScale(
        "pixel/rotation/intrinsics sources need a point or range hint");
  }

  // [R(X-c) x], or its range substitution rho [a x] when only the range
  // of the line of sight is known.
  Eigen::Matrix3d offset_cross = Eigen::Matrix3d::Zero();
  if (needs_scale) {
    if (point_hint) {
      offset_cross =
          cross_matrix(view.pose.rotation * (*point_hint - view.pose.center));
    } else {
      offset_cross = *range_hint * cross_matrix(los_direction(obs, view));
    }
  }

  const Eigen::Vector3d v = calibrated_pixel(obs, view);
  const Eigen::Matrix3d v_cross = cross_matrix(v);

  Eigen::Matrix3d sigma = Eigen::Matrix3d::Zero();
  if (pixel_on) {
    const Eigen::Matrix<double, 3, 2> j =
        (-offset_cross * view.intrinsics.inverse_matrix()).leftCols<2>();
    sigma += j * obs.cov2d * j.transpose();
  }
  if (rot_on) {
    const Eigen::Matrix3d j = v_cross * offset_cross;
    sigma += j * view.uncertainty.rot_cov * j.transpose();
  }
  if (center_on) {
    const Eigen::Matrix3d j = -v_cross * view.pose.rotation;
    sigma += j * view.uncertainty.center_cov * j.transpose();
  }
  if (intr_on) {
    const Eigen::Matrix3d kinv = view.intrinsics.inverse_matrix();
    const IntrinsicsVariance& var = *view.intrinsics_var;
    const struct {
      int l, m;
      double value;
    } entries[] = {{0, 0, var.fx}, {0, 1, var.skew}, {0, 2, var.cx},
                   {1, 1, var.fy}, {1, 2, var.cy}};
    for (const auto& entry : entries) {
      if (entry.value <= 0.0) continue;
      Eigen::Matrix3d unit = Eigen::Matrix3d::Zero();
      unit(entry.l, entry.m) = 1.0;
      const Eigen::Vector3d j =
          -offset_cross * (-kinv * unit * kinv * obs.pixel);
      sigma += entry.value * j * j.transpose();
    }
  }
  if (point_on) {
    const Eigen::Matrix3d j = v_cross * view.pose.rotation;
    sigma += j * (*point_cov) * j.transpose();
  }

  // Exact symmetry; assembly is symmetric only up to round-off.
  sigma = 0.5 * (sigma + sigma.transpose()).eval();

  if (sigma.isZero(0.0)) {
    throw AllSourcesZero("every enabled covariance is zero");
  }

  ResidualCovariance result;
  if (mode == PinvMode::Diagonal) {
    result.matrix = sigma.diagonal().asDiagonal();
  } else {
    result.matrix = sigma;
  }
  result.pseudo_inverse = pinv_psd(sigma, mode, &result.rank);
  return result;
}

}  // namespace lostu
