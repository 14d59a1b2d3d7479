#pragma once

#include <Eigen/Core>

#include <optional>
#include <vector>

#include "lostu/geometry.hpp"
#include "lostu/residual.hpp"

namespace lostu {

enum class Method { Midpoint, DLT, LOST, LOSTU, HS };

const char* method_name(Method method);

/// A triangulated point. `covariance` is filled by LOSTU (inverse of its
/// normal matrix) and by point_covariance(); the other solvers leave it
/// zero. `residual_cost` is the value of the solver's own objective at the
/// solution: summed squared point-to-ray distance for midpoint, squared
/// residual of the stacked system for DLT/LOST, the Mahalanobis residual
/// cost for LOSTU, and summed squared pixel correction for HS.
struct PointEstimate {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
  double residual_cost = 0.0;
  Method method = Method::DLT;
};

/// How the partner measurement for the law-of-sines range is chosen.
enum class PairRule {
  /// Scan all other views and take the one with maximum parallax.
  MaxParallax,
  /// Pick between two anchor views found by a linear scan (the view of
  /// maximum parallax against view 0, then the view of maximum parallax
  /// against that one). O(n) per track instead of O(n^2) and within
  /// round-off of MaxParallax in practice.
  Anchor,
};

/// Range from view `view_id` to the track's point, from the law of sines
/// using a partner measurement: |(c_j - c_j') x a_j'| / |a_j x a_j'| with
/// both lines of sight in the world frame. Throws DegenerateParallax when
/// every candidate partner is parallel below 1e-12.
double bootstrap_range(const Track& track, const std::vector<View>& views,
                       int view_id, PairRule rule = PairRule::MaxParallax);

/// Ranges for every entry of the track at once.
std::vector<double> bootstrap_ranges(const Track& track,
                                     const std::vector<View>& views,
                                     PairRule rule = PairRule::Anchor);

/// Minimizer of the summed squared point-to-ray distances,
/// sum_j (I - a_j a_j^T) applied in the world frame. Throws
/// DegenerateParallax when the normal matrix condition exceeds 1e12.
PointEstimate triangulate_midpoint(const Track& track,
                                   const std::vector<View>& views);

/// Unweighted stacked linear triangulation: the 2n x 3 system with rows
/// S [K^-1 x  x] R and right-hand side S [K^-1 x  x] R c, solved by
/// column-pivoted QR. Throws RankDeficient when rank < 3.
PointEstimate triangulate_dlt(const Track& track,
                              const std::vector<View>& views);

/// Per-view LOST weights q_j = |K^-1 x| / (K^-1(0,0) sigma_j rho_j), one
/// sigma per track entry.
std::vector<double> lost_weights(const Track& track,
                                 const std::vector<View>& views,
                                 const std::vector<double>& sigma_px,
                                 PairRule rule = PairRule::Anchor);
std::vector<double> lost_weights(const Track& track,
                                 const std::vector<View>& views,
                                 double sigma_px,
                                 PairRule rule = PairRule::Anchor);

/// The q-weighted stacked system: closed-form optimal triangulation under
/// isotropic 2D noise. No iteration, no prior point.
PointEstimate triangulate_lost(const Track& track,
                               const std::vector<View>& views,
                               const std::vector<double>& sigma_px,
                               PairRule rule = PairRule::Anchor);
PointEstimate triangulate_lost(const Track& track,
                               const std::vector<View>& views,
                               double sigma_px,
                               PairRule rule = PairRule::Anchor);

/// The stacked system with caller-supplied row weights (one per entry).
PointEstimate triangulate_lost_with_weights(const Track& track,
                                            const std::vector<View>& views,
                                            const std::vector<double>& weights);

struct LostuOptions {
  NoiseSources sources;
  /// Rank handling for the residual covariance pseudo-inverse. The null
  /// space of the residual covariance carries no information, so the
  /// smallest eigenvalue is dropped outright by default.
  PinvMode pinv = PinvMode::StrictRank2;
  PairRule pair_rule = PairRule::Anchor;
  /// Re-assemble the weights once at the first solution and solve again.
  bool reweight_pass = false;
  /// Known point estimate; when set, Jacobians use it instead of the
  /// range bootstrap.
  std::optional<Eigen::Vector3d> prior_point;
};

/// Uncertainty-aware triangulation: solves the normal system assembled
/// from per-view residual-covariance pseudo-inverses. The 3D-point source
/// is excluded from the residual covariance by construction.
PointEstimate triangulate_lostu(const Track& track,
                                const std::vector<View>& views,
                                const LostuOptions& options = {});

/// Generic weighted law-of-sines normal solver: per-entry 3x3 weight
/// matrices W_j in sum_j R^T [v x]^T W_j [v x] R with v = K^-1 x, or the
/// unit line of sight when `unit_los` is set. LOSTU supplies
/// pseudo-inverted residual covariances; identity weights on unit lines of
/// sight reproduce the midpoint solution.
PointEstimate triangulate_normal_weighted(
    const Track& track, const std::vector<View>& views,
    const std::vector<Eigen::Matrix3d>& weights, bool unit_los = false,
    Method tag = Method::LOSTU);

/// Two-view optimal triangulation: corrects the measured pair onto the
/// epipolar constraint through the global minimum of the Hartley-Sturm
/// degree-6 polynomial, then triangulates the corrected pair linearly.
PointEstimate triangulate_hs(const Track& track,
                             const std::vector<View>& views);

struct HsCorrection {
  Observation corrected_a;
  Observation corrected_b;
  double cost = 0.0;  // summed squared pixel displacement
};

/// The epipolar correction step of triangulate_hs, exposed separately.
HsCorrection hs_correct_pair(const Observation& obs_a, const Observation& obs_b,
                             const View& view_a, const View& view_b);

/// Fundamental matrix with the convention x_b^T F x_a = 0, normalized to
/// unit Frobenius norm. Throws DegenerateParallax on zero baseline.
Eigen::Matrix3d fundamental_matrix(const View& view_a, const View& view_b);

/// Gauss-Markov covariance of a triangulated point: the inverse of the
/// weighted normal matrix evaluated at `point` with the enabled sources.
Eigen::Matrix3d point_covariance(const Track& track,
                                 const std::vector<View>& views,
                                 const Eigen::Vector3d& point,
                                 const NoiseSources& sources);

/// Mahalanobis residual cost sum_j eps_j^T W_j eps_j for fixed weights.
double mahalanobis_cost(const Track& track, const std::vector<View>& views,
                        const std::vector<Eigen::Matrix3d>& weights,
                        const Eigen::Vector3d& point);

/// The per-entry residual-covariance pseudo-inverses LOSTU would use,
/// evaluated either at a fixed point or through the range bootstrap.
std::vector<Eigen::Matrix3d> lostu_weights(
    const Track& track, const std::vector<View>& views,
    const NoiseSources& sources,
    std::optional<Eigen::Vector3d> point_hint = std::nullopt,
    PinvMode pinv = PinvMode::StrictRank2,
    PairRule rule = PairRule::Anchor);

}  // namespace lostu
