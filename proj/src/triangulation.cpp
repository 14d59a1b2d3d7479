#include "lostu/triangulation.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "lostu/errors.hpp"

namespace lostu {

namespace {

constexpr double kParallelTol = 1e-12;
constexpr double kMidpointMaxCondition = 1e12;
constexpr double kNormalRankTol = 1e-12;

const View& view_of(const std::vector<View>& views, int view_id) {
  if (view_id < 0 || view_id >= static_cast<int>(views.size())) {
    throw InvalidInput("track references a view that does not exist");
  }
  return views[view_id];
}

void require_entries(const Track& track, std::size_t n) {
  if (track.entries.size() < n) {
    throw InvalidInput("track has too few observations for this operation");
  }
}

std::vector<Eigen::Vector3d> world_los_all(const Track& track,
                                           const std::vector<View>& views) {
  std::vector<Eigen::Vector3d> los;
  los.reserve(track.entries.size());
  for (const TrackEntry& entry : track.entries) {
    los.push_back(los_direction_world(entry.obs, views[entry.view_id]));
  }
  return los;
}

double range_from_partner(const Track& track, const std::vector<View>& views,
                          const std::vector<Eigen::Vector3d>& los, int i,
                          int partner) {
  const Eigen::Vector3d baseline =
      views[track.entries[i].view_id].pose.center -
      views[track.entries[partner].view_id].pose.center;
  const double parallax = los[i].cross(los[partner]).norm();
  return baseline.cross(los[partner]).norm() / parallax;
}

struct AnchorPair {
  int first = -1;
  int second = -1;
};

AnchorPair find_anchors(const std::vector<Eigen::Vector3d>& los) {
  const int n = static_cast<int>(los.size());
  AnchorPair anchors;
  double best = -1.0;
  for (int j = 1; j < n; ++j) {
    const double parallax = los[0].cross(los[j]).norm();
    if (parallax > best) {
      best = parallax;
      anchors.first = j;
    }
  }
  best = -1.0;
  for (int j = 0; j < n; ++j) {
    if (j == anchors.first) continue;
    const double parallax = los[anchors.first].cross(los[j]).norm();
    if (parallax > best) {
      best = parallax;
      anchors.second = j;
    }
  }
  return anchors;
}

int pick_partner(const std::vector<Eigen::Vector3d>& los, int i,
                 const AnchorPair& anchors) {
  int partner = (i == anchors.first) ? anchors.second : anchors.first;
  if (i != anchors.first && i != anchors.second) {
    const double pf = los[i].cross(los[anchors.first]).norm();
    const double ps = los[i].cross(los[anchors.second]).norm();
    if (ps > pf) partner = anchors.second;
  }
  return partner;
}

// Stacked system of the DLT/LOST family: two rows per entry,
// q_j S [K^-1 x  x] R | q_j S [K^-1 x  x] R c_j.
struct StackedSystem {
  Eigen::MatrixXd lhs;
  Eigen::VectorXd rhs;
};

StackedSystem build_stacked(const Track& track, const std::vector<View>& views,
                            const std::vector<double>& weights) {
  const int n = static_cast<int>(track.entries.size());
  StackedSystem sys;
  sys.lhs.resize(2 * n, 3);
  sys.rhs.resize(2 * n);
  for (int i = 0; i < n; ++i) {
    const TrackEntry& entry = track.entries[i];
    const View& view = view_of(views, entry.view_id);
    const Eigen::Vector3d v =
        view.intrinsics.inverse_matrix() * entry.obs.pixel;
    const Eigen::Matrix3d block = cross_matrix(v) * view.pose.rotation;
    sys.lhs.middleRows<2>(2 * i) = weights[i] * block.topRows<2>();
    sys.rhs.segment<2>(2 * i) =
        weights[i] * (block.topRows<2>() * view.pose.center);
  }
  return sys;
}

PointEstimate solve_stacked(const StackedSystem& sys, Method tag) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sys.lhs);
  if (qr.rank() < 3) {
    throw RankDeficient("stacked triangulation system has rank < 3");
  }
  PointEstimate estimate;
  estimate.position = qr.solve(sys.rhs);
  estimate.residual_cost = (sys.lhs * estimate.position - sys.rhs).squaredNorm();
  estimate.method = tag;
  return estimate;
}

struct NormalSystem {
  Eigen::Matrix3d matrix = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
};

// Solve N X = b with a rank check; also returns N^-1 when asked.
Eigen::Vector3d solve_normal(const NormalSystem& sys,
                             Eigen::Matrix3d* inverse_out) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(sys.matrix);
  const Eigen::Vector3d lambda = eig.eigenvalues();
  if (!(lambda[0] > kNormalRankTol * std::max(lambda[2], 0.0))) {
    throw RankDeficient("normal matrix has rank < 3");
  }
  const Eigen::Matrix3d inv = eig.eigenvectors() *
                              lambda.cwiseInverse().asDiagonal() *
                              eig.eigenvectors().transpose();
  if (inverse_out) *inverse_out = inv;
  return inv * sys.rhs;
}

bool needs_scale(const Track& track, const std::vector<View>& views,
                 const NoiseSources& sources) {
  for (const TrackEntry& entry : track.entries) {
    const View& view = view_of(views, entry.view_id);
    if (sources.pixel && !entry.obs.cov2d.isZero(0.0)) return true;
    if (sources.rotation && !view.uncertainty.rot_cov.isZero(0.0)) return true;
    if (sources.intrinsics && view.intrinsics_var &&
        view.intrinsics_var->any()) {
      return true;
    }
  }
  return false;
}

}  // namespace

const char* method_name(Method method) {
  switch (method) {
    case Method::Midpoint: return "midpoint";
    case Method::DLT: return "dlt";
    case Method::LOST: return "lost";
    case Method::LOSTU: return "lostu";
    case Method::HS: return "hs";
  }
  return "unknown";
}

double bootstrap_range(const Track& track, const std::vector<View>& views,
                       int view_id, PairRule rule) {
  require_entries(track, 2);
  const std::vector<Eigen::Vector3d> los = world_los_all(track, views);
  int index = -1;
  for (std::size_t i = 0; i < track.entries.size(); ++i) {
    if (track.entries[i].view_id == view_id) index = static_cast<int>(i);
  }
  if (index < 0) throw InvalidInput("view is not part of the track");

  if (rule == PairRule::MaxParallax) {
    int partner = -1;
    double best = -1.0;
    for (int j = 0; j < static_cast<int>(los.size()); ++j) {
      if (j == index) continue;
      const double parallax = los[index].cross(los[j]).norm();
      if (parallax > best) {
        best = parallax;
        partner = j;
      }
    }
    if (best < kParallelTol) {
      throw DegenerateParallax("all candidate partners are parallel");
    }
    return range_from_partner(track, views, los, index, partner);
  }

  const AnchorPair anchors = find_anchors(los);
  const int partner = pick_partner(los, index, anchors);
  if (los[index].cross(los[partner]).norm() < kParallelTol) {
    throw DegenerateParallax("anchor partners are parallel");
  }
  return range_from_partner(track, views, los, index, partner);
}

std::vector<double> bootstrap_ranges(const Track& track,
                                     const std::vector<View>& views,
                                     PairRule rule) {
  require_entries(track, 2);
  const std::vector<Eigen::Vector3d> los = world_los_all(track, views);
  const int n = static_cast<int>(los.size());
  std::vector<double> ranges(n);

  if (rule == PairRule::MaxParallax) {
    for (int i = 0; i < n; ++i) {
      int partner = -1;
      double best = -1.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double parallax = los[i].cross(los[j]).norm();
        if (parallax > best) {
          best = parallax;
          partner = j;
        }
      }
      if (best < kParallelTol) {
        throw DegenerateParallax("all candidate partners are parallel");
      }
      ranges[i] = range_from_partner(track, views, los, i, partner);
    }
    return ranges;
  }

  const AnchorPair anchors = find_anchors(los);
  for (int i = 0; i < n; ++i) {
    const int partner = pick_partner(los, i, anchors);
    if (los[i].cross(los[partner]).norm() < kParallelTol) {
      throw DegenerateParallax("anchor partners are parallel");
    }
    ranges[i] = range_from_partner(track, views, los, i, partner);
  }
  return ranges;
}

PointEstimate triangulate_midpoint(const Track& track,
                                   const std::vector<View>& views) {
  require_entries(track, 2);
  NormalSystem sys;
  for (const TrackEntry& entry : track.entries) {
    const View& view = view_of(views, entry.view_id);
    const Eigen::Vector3d a = los_direction_world(entry.obs, view);
    const Eigen::Matrix3d projector =
        Eigen::Matrix3d::Identity() - a * a.transpose();
    sys.matrix += projector;
    sys.rhs += projector * view.pose.center;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig;
  eig.computeDirect(sys.matrix);
  const Eigen::Vector3d lambda = eig.eigenvalues();
  if (!(lambda[0] > 0.0) || lambda[2] > kMidpointMaxCondition * lambda[0]) {
    throw DegenerateParallax("rays are too close to parallel for the midpoint");
  }

  PointEstimate estimate;
  estimate.position = eig.eigenvectors() *
                      ((eig.eigenvectors().transpose() * sys.rhs).array() /
                       lambda.array()).matrix();
  estimate.method = Method::Midpoint;
  for (const TrackEntry& entry : track.entries) {
    const View& view = view_of(views, entry.view_id);
    const Eigen::Vector3d a = los_direction_world(entry.obs, view);
    const Eigen::Vector3d offset = estimate.position - view.pose.center;
    estimate.residual_cost += (offset - a * a.dot(offset)).squaredNorm();
  }
  return estimate;
}

PointEstimate triangulate_dlt(const Track& track,
                              const std::vector<View>& views) {
  require_entries(track, 2);
  const std::vector<double> unit(track.entries.size(), 1.0);
  return solve_stacked(build_stacked(track, views, unit), Method::DLT);
}

std::vector<double> lost_weights(const Track& track,
                                 const std::vector<View>& views,
                                 const std::vector<double>& sigma_px,
                                 PairRule rule) {
  require_entries(track, 2);
  if (sigma_px.size() != track.entries.size()) {
    throw InvalidInput("one pixel sigma per track entry is required");
  }
  const std::vector<double> ranges = bootstrap_ranges(track, views, rule);
  std::vector<double> weights(track.entries.size());
  for (std::size_t i = 0; i < track.entries.size(); ++i) {
    if (!(sigma_px[i] > 0.0)) {
      throw InvalidInput("pixel sigma must be positive");
    }
    const View& view = view_of(views, track.entries[i].view_id);
    const Eigen::Matrix3d kinv = view.intrinsics.inverse_matrix();
    const double v_norm = (kinv * track.entries[i].obs.pixel).norm();
    weights[i] = v_norm / (kinv(0, 0) * sigma_px[i] * ranges[i]);
  }
  return weights;
}

std::vector<double> lost_weights(const Track& track,
                                 const std::vector<View>& views,
                                 double sigma_px, PairRule rule) {
  return lost_weights(track, views,
                      std::vector<double>(track.entries.size(), sigma_px),
                      rule);
}

PointEstimate triangulate_lost(const Track& track,
                               const std::vector<View>& views,
                               const std::vector<double>& sigma_px,
                               PairRule rule) {
  const std::vector<double> weights = lost_weights(track, views, sigma_px, rule);
  PointEstimate estimate =
      solve_stacked(build_stacked(track, views, weights), Method::LOST);
  return estimate;
}

PointEstimate triangulate_lost(const Track& track,
                               const std::vector<View>& views, double sigma_px,
                               PairRule rule) {
  return triangulate_lost(
      track, views, std::vector<double>(track.entries.size(), sigma_px), rule);
}

PointEstimate triangulate_lost_with_weights(const Track& track,
                                            const std::vector<View>& views,
                                            const std::vector<double>& weights) {
  require_entries(track, 2);
  if (weights.size() != track.entries.size()) {
    throw InvalidInput("one weight per track entry is required");
  }
  return solve_stacked(build_stacked(track, views, weights), Method::LOST);
}

std::vector<Eigen::Matrix3d> lostu_weights(
    const Track& track, const std::vector<View>& views,
    const NoiseSources& sources, std::optional<Eigen::Vector3d> point_hint,
    PinvMode pinv, PairRule rule) {
  require_entries(track, 2);
  std::vector<double> ranges;
  if (!point_hint && needs_scale(track, views, sources)) {
    ranges = bootstrap_ranges(track, views, rule);
  }
  std::vector<Eigen::Matrix3d> weights;
  weights.reserve(track.entries.size());
  for (std::size_t i = 0; i < track.entries.size(); ++i) {
    const TrackEntry& entry = track.entries[i];
    const View& view = view_of(views, entry.view_id);
    std::optional<double> range_hint;
    if (!point_hint && !ranges.empty()) range_hint = ranges[i];
    weights.push_back(residual_covariance(entry.obs, view, sources, point_hint,
                                          range_hint, pinv)
                          .pseudo_inverse);
  }
  return weights;
}

PointEstimate triangulate_normal_weighted(
    const Track& track, const std::vector<View>& views,
    const std::vector<Eigen::Matrix3d>& weights, bool unit_los, Method tag) {
  require_entries(track, 2);
  if (weights.size() != track.entries.size()) {
    throw InvalidInput("one weight matrix per track entry is required");
  }
  NormalSystem sys;
  for (std::size_t i = 0; i < track.entries.size(); ++i) {
    const TrackEntry& entry = track.entries[i];
    const View& view = view_of(views, entry.view_id);
    Eigen::Vector3d v = view.intrinsics.inverse_matrix() * entry.obs.pixel;
    if (unit_los) v /= v.norm();
    const Eigen::Matrix3d block = cross_matrix(v) * view.pose.rotation;
    const Eigen::Matrix3d gram = block.transpose() * weights[i] * block;
    sys.matrix += gram;
    sys.rhs += gram * view.pose.center;
  }
  sys.matrix = 0.5 * (sys.matrix + sys.matrix.transpose()).eval();

  PointEstimate estimate;
  estimate.position = solve_normal(sys, &estimate.covariance);
  estimate.method = tag;
  estimate.residual_cost = 0.0;
  for (std::size_t i = 0; i < track.entries.size(); ++i) {
    const TrackEntry& entry = track.entries[i];
    const View& view = view_of(views, entry.view_id);
    Eigen::Vector3d v = view.intrinsics.inverse_matrix() * entry.obs.pixel;
    if (unit_los) v /= v.norm();
    const Eigen::Vector3d eps =
        v.cross(view.pose.rotation * (estimate.position - view.pose.center));
    estimate.residual_cost += eps.dot(weights[i] * eps);
  }
  return estimate;
}

PointEstimate triangulate_lostu(const Track& track,
                                const std::vector<View>& views,
                                const LostuOptions& options) {
  std::vector<Eigen::Matrix3d> weights =
      lostu_weights(track, views, options.sources, options.prior_point,
                    options.pinv, options.pair_rule);
  PointEstimate estimate = triangulate_normal_weighted(track, views, weights);
  if (options.reweight_pass) {
    weights = lostu_weights(track, views, options.sources, estimate.position,
                            options.pinv, options.pair_rule);
    estimate = triangulate_normal_weighted(track, views, weights);
  }
  estimate.method = Method::LOSTU;
  return estimate;
}

Eigen::Matrix3d fundamental_matrix(const View& view_a, const View& view_b) {
  const Eigen::Matrix3d relative_rotation =
      view_b.pose.rotation * view_a.pose.rotation.transpose();
  const Eigen::Vector3d baseline =
      view_b.pose.rotation * (view_a.pose.center - view_b.pose.center);
  if (baseline.norm() < kParallelTol) {
    throw DegenerateParallax("two-view baseline is zero");
  }
  const Eigen::Matrix3d essential = cross_matrix(baseline) * relative_rotation;
  Eigen::Matrix3d f = view_b.intrinsics.inverse_matrix().transpose() *
                      essential * view_a.intrinsics.inverse_matrix();
  return f / f.norm();
}

namespace {

// Ascending-coefficient polynomial helpers for the HS sextic.
std::vector<double> poly_mul(const std::vector<double>& p,
                             const std::vector<double>& q) {
  std::vector<double> out(p.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += p[i] * q[j];
  }
  return out;
}

std::vector<double> poly_add(std::vector<double> p,
                             const std::vector<double>& q, double scale) {
  if (q.size() > p.size()) p.resize(q.size(), 0.0);
  for (std::size_t i = 0; i < q.size(); ++i) p[i] += scale * q[i];
  return p;
}

std::vector<double> real_roots(std::vector<double> coeffs) {
  double max_coeff = 1e-300;
  for (double c : coeffs) max_coeff = std::max(max_coeff, std::abs(c));
  while (coeffs.size() > 1 && std::abs(coeffs.back()) < 1e-13 * max_coeff) {
    coeffs.pop_back();
  }
  const int degree = static_cast<int>(coeffs.size()) - 1;
  if (degree < 1) return {};

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i) {
    companion(i, degree - 1) = -coeffs[i] / coeffs[degree];
  }
  const Eigen::VectorXcd roots =
      Eigen::EigenSolver<Eigen::MatrixXd>(companion, false).eigenvalues();

  std::vector<double> out;
  for (int i = 0; i < roots.size(); ++i) {
    if (std::abs(roots[i].imag()) <= 1e-8 * (1.0 + std::abs(roots[i].real()))) {
      out.push_back(roots[i].real());
    }
  }
  return out;
}

Eigen::Vector3d closest_point_on_line(const Eigen::Vector3d& line) {
  return {-line.x() * line.z(), -line.y() * line.z(),
          line.x() * line.x() + line.y() * line.y()};
}

}  // namespace

HsCorrection hs_correct_pair(const Observation& obs_a, const Observation& obs_b,
                             const View& view_a, const View& view_b) {
  const Eigen::Matrix3d f = fundamental_matrix(view_a, view_b);

  // Translate both measurements to the origin.
  Eigen::Matrix3d t_a_inv = Eigen::Matrix3d::Identity();
  t_a_inv(0, 2) = obs_a.pixel.x();
  t_a_inv(1, 2) = obs_a.pixel.y();
  Eigen::Matrix3d t_b_inv = Eigen::Matrix3d::Identity();
  t_b_inv(0, 2) = obs_b.pixel.x();
  t_b_inv(1, 2) = obs_b.pixel.y();
  Eigen::Matrix3d f1 = t_b_inv.transpose() * f * t_a_inv;

  // Epipoles of the translated geometry, scaled so ex^2 + ey^2 = 1.
  const auto epipole = [](const Eigen::Matrix3d& m) {
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullV);
    Eigen::Vector3d e = svd.matrixV().col(2);
    const double planar = std::hypot(e.x(), e.y());
    if (planar < 1e-14 * (1.0 + std::abs(e.z()))) {
      throw DegenerateParallax("measurement coincides with the epipole");
    }
    return Eigen::Vector3d(e / planar);
  };
  const Eigen::Vector3d e_a = epipole(f1);
  const Eigen::Vector3d e_b = epipole(Eigen::Matrix3d(f1.transpose()));

  // Rotate the epipoles onto the x axis.
  Eigen::Matrix3d r_a = Eigen::Matrix3d::Identity();
  r_a(0, 0) = e_a.x();
  r_a(0, 1) = e_a.y();
  r_a(1, 0) = -e_a.y();
  r_a(1, 1) = e_a.x();
  Eigen::Matrix3d r_b = Eigen::Matrix3d::Identity();
  r_b(0, 0) = e_b.x();
  r_b(0, 1) = e_b.y();
  r_b(1, 0) = -e_b.y();
  r_b(1, 1) = e_b.x();
  const Eigen::Matrix3d f2 = r_b * f1 * r_a.transpose();

  const double fa = e_a.z();
  const double fb = e_b.z();
  const double a = f2(1, 1);
  const double b = f2(1, 2);
  const double c = f2(2, 1);
  const double d = f2(2, 2);

  // g(t) = t ((at+b)^2 + fb^2 (ct+d)^2)^2
  //        - (ad - bc) (1 + fa^2 t^2)^2 (at+b) (ct+d)
  const std::vector<double> p_ab{b, a};
  const std::vector<double> p_cd{d, c};
  const std::vector<double> p_fa{1.0, 0.0, fa * fa};
  std::vector<double> q = poly_add(poly_mul(p_ab, p_ab),
                                   poly_mul(p_cd, p_cd), fb * fb);
  std::vector<double> g = poly_mul(poly_mul(q, q), {0.0, 1.0});
  g = poly_add(g, poly_mul(poly_mul(p_fa, p_fa), poly_mul(p_ab, p_cd)),
               -(a * d - b * c));

  const auto evaluate_cost = [&](double t) {
    const double at_b = a * t + b;
    const double ct_d = c * t + d;
    return t * t / (1.0 + fa * fa * t * t) +
           ct_d * ct_d / (at_b * at_b + fb * fb * ct_d * ct_d);
  };

  double best_t = 0.0;
  double best_cost = std::numeric_limits<double>::infinity();
  bool best_at_infinity = false;
  for (double t : real_roots(g)) {
    const double cost = evaluate_cost(t);
    if (cost < best_cost) {
      best_cost = cost;
      best_t = t;
    }
  }
  if (fa != 0.0 || (a * a + fb * fb * c * c) > 0.0) {
    const double inf_cost = (fa != 0.0 ? 1.0 / (fa * fa)
                                       : std::numeric_limits<double>::infinity());
    const double asymptotic =
        (std::isfinite(inf_cost) ? inf_cost + c * c / (a * a + fb * fb * c * c)
                                 : std::numeric_limits<double>::infinity());
    if (asymptotic < best_cost) {
      best_cost = asymptotic;
      best_at_infinity = true;
    }
  }
  if (!std::isfinite(best_cost)) {
    throw InternalError("epipolar correction found no usable minimum");
  }

  Eigen::Vector3d line_a, line_b;
  if (best_at_infinity) {
    line_a = Eigen::Vector3d(fa, 0.0, -1.0);
    line_b = f2 * Eigen::Vector3d(0.0, 1.0, 0.0);
  } else {
    line_a = Eigen::Vector3d(best_t * fa, 1.0, -best_t);
    line_b = f2 * Eigen::Vector3d(0.0, best_t, 1.0);
  }
  Eigen::Vector3d x_a = closest_point_on_line(line_a);
  Eigen::Vector3d x_b = closest_point_on_line(line_b);
  if (std::abs(x_a.z()) < 1e-300 || std::abs(x_b.z()) < 1e-300) {
    throw InternalError("corrected point at infinity");
  }

  x_a = t_a_inv * (r_a.transpose() * x_a);
  x_b = t_b_inv * (r_b.transpose() * x_b);
  x_a /= x_a.z();
  x_b /= x_b.z();

  HsCorrection correction;
  correction.corrected_a = Observation(x_a.x(), x_a.y(), obs_a.cov2d);
  correction.corrected_b = Observation(x_b.x(), x_b.y(), obs_b.cov2d);
  correction.cost = (x_a.head<2>() - obs_a.pixel.head<2>()).squaredNorm() +
                    (x_b.head<2>() - obs_b.pixel.head<2>()).squaredNorm();
  return correction;
}

PointEstimate triangulate_hs(const Track& track,
                             const std::vector<View>& views) {
  if (track.entries.size() != 2) {
    throw TwoViewOnly("Hartley-Sturm triangulation needs exactly two views");
  }
  const TrackEntry& entry_a = track.entries[0];
  const TrackEntry& entry_b = track.entries[1];
  const View& view_a = view_of(views, entry_a.view_id);
  const View& view_b = view_of(views, entry_b.view_id);

  const HsCorrection correction =
      hs_correct_pair(entry_a.obs, entry_b.obs, view_a, view_b);

  Track corrected = track;
  corrected.entries[0].obs = correction.corrected_a;
  corrected.entries[1].obs = correction.corrected_b;
  PointEstimate estimate = triangulate_dlt(corrected, views);
  estimate.method = Method::HS;
  estimate.residual_cost = correction.cost;
  return estimate;
}

Eigen::Matrix3d point_covariance(const Track& track,
                                 const std::vector<View>& views,
                                 const Eigen::Vector3d& point,
                                 const NoiseSources& sources) {
  const std::vector<Eigen::Matrix3d> weights =
      lostu_weights(track, views, sources, point);
  NormalSystem sys;
  for (std::size_t i = 0; i < track.entries.size(); ++i) {
    const TrackEntry& entry = track.entries[i];
    const View& view = view_of(views, entry.view_id);
    const Eigen::Matrix3d block =
        cross_matrix(view.intrinsics.inverse_matrix() * entry.obs.pixel) *
        view.pose.rotation;
    sys.matrix += block.transpose() * weights[i] * block;
  }
  sys.matrix = 0.5 * (sys.matrix + sys.matrix.transpose()).eval();
  Eigen::Matrix3d inverse;
  solve_normal(sys, &inverse);
  return inverse;
}

double mahalanobis_cost(const Track& track, const std::vector<View>& views,
                        const std::vector<Eigen::Matrix3d>& weights,
                        const Eigen::Vector3d& point) {
  if (weights.size() != track.entries.size()) {
    throw InvalidInput("one weight matrix per track entry is required");
  }
  double cost = 0.0;
  for (std::size_t i = 0; i < track.entries.size(); ++i) {
    const TrackEntry& entry = track.entries[i];
    const View& view = view_of(views, entry.view_id);
    const Eigen::Vector3d eps = residual(entry.obs, view, point);
    cost += eps.dot(weights[i] * eps);
  }
  return cost;
}

}  // namespace lostu
