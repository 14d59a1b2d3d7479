#include <doctest.h>

#include <Eigen/Dense>

#include "lostu/errors.hpp"
#include "lostu/triangulation.hpp"
#include "oracles.hpp"

using namespace lostu;

namespace {

// Two cameras on the x axis looking at a point on the z axis.
testutil::RandomTrack isoceles_scene() {
  testutil::RandomTrack scene;
  scene.point = Eigen::Vector3d(0, 0, 1);
  for (int v = 0; v < 2; ++v) {
    View view;
    view.pose.center = Eigen::Vector3d(v == 0 ? -1.0 : 1.0, 0.0, 0.0);
    view.pose.rotation = Eigen::Matrix3d::Identity();
    scene.views.push_back(view);
    scene.track.entries.push_back({v, project(scene.point, view)});
  }
  return scene;
}

// The nominal two-camera geometry: point at the origin, centers at
// (0,-2,-6) and (0,2,-2), pointed at the point, focal length 400.
testutil::RandomTrack nominal_two_view() {
  testutil::RandomTrack scene;
  scene.point = Eigen::Vector3d::Zero();
  const Eigen::Vector3d centers[2] = {{0, -2, -6}, {0, 2, -2}};
  for (int v = 0; v < 2; ++v) {
    View view;
    view.intrinsics = {400.0, 400.0, 0.0, 0.0, 0.0};
    view.pose.center = centers[v];
    view.pose.rotation = look_at_rotation(centers[v], scene.point);
    scene.views.push_back(view);
    scene.track.entries.push_back({v, project(scene.point, view)});
  }
  return scene;
}

double reprojection_cost(const Track& track, const std::vector<View>& views,
                         const Eigen::Vector3d& point) {
  double cost = 0.0;
  for (const TrackEntry& entry : track.entries) {
    const Observation reproj = project(point, views[entry.view_id]);
    cost += (reproj.pixel.head<2>() - entry.obs.pixel.head<2>()).squaredNorm();
  }
  return cost;
}

void add_pixel_noise(testutil::RandomTrack& scene, double sigma, Rng& rng) {
  for (TrackEntry& entry : scene.track.entries) {
    entry.obs.pixel.x() += sigma * rng.normal();
    entry.obs.pixel.y() += sigma * rng.normal();
    entry.obs.cov2d = sigma * sigma * Eigen::Matrix2d::Identity();
  }
}

}  // namespace

TEST_CASE("bootstrap_range: isoceles geometry gives sqrt(2)") {
  auto scene = isoceles_scene();
  CHECK(bootstrap_range(scene.track, scene.views, 0) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(bootstrap_range(scene.track, scene.views, 1) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("bootstrap_range: nominal two-view geometry") {
  auto scene = nominal_two_view();
  CHECK(bootstrap_range(scene.track, scene.views, 0) ==
        doctest::Approx(std::sqrt(40.0)).epsilon(1e-12));
  CHECK(bootstrap_range(scene.track, scene.views, 1) ==
        doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));
}

TEST_CASE("bootstrap_range equals the true range on noiseless tracks") {
  Rng rng(211);
  for (int rep = 0; rep < 40; ++rep) {
    auto scene = testutil::make_random_track(rng, 2 + (rep % 6), 0.0);
    for (const TrackEntry& entry : scene.track.entries) {
      const double truth =
          (scene.point - scene.views[entry.view_id].pose.center).norm();
      for (PairRule rule : {PairRule::MaxParallax, PairRule::Anchor}) {
        const double estimated =
            bootstrap_range(scene.track, scene.views, entry.view_id, rule);
        CHECK(std::abs(estimated - truth) <= 1e-9 * truth);
      }
    }
  }
}

TEST_CASE("bootstrap_range rejects parallel rays") {
  auto scene = isoceles_scene();
  scene.views[1] = scene.views[0];
  scene.track.entries[1].obs = scene.track.entries[0].obs;
  CHECK_THROWS_AS(bootstrap_range(scene.track, scene.views, 0),
                  DegenerateParallax);
}

TEST_CASE("midpoint: exact on noiseless rays") {
  Rng rng(223);
  for (int rep = 0; rep < 30; ++rep) {
    auto scene = testutil::make_random_track(rng, 2 + (rep % 5), 0.0);
    const PointEstimate estimate =
        triangulate_midpoint(scene.track, scene.views);
    CHECK((estimate.position - scene.point).norm() <= 1e-10);
    CHECK(estimate.method == Method::Midpoint);
  }
}

TEST_CASE("midpoint of two skew rays matches the closest-point oracle") {
  Rng rng(227);
  for (int rep = 0; rep < 40; ++rep) {
    auto scene = testutil::make_random_track(rng, 2, 3.0);
    const Eigen::Vector3d expected = oracle::two_ray_midpoint(
        scene.views[0].pose.center,
        los_direction_world(scene.track.entries[0].obs, scene.views[0]),
        scene.views[1].pose.center,
        los_direction_world(scene.track.entries[1].obs, scene.views[1]));
    const PointEstimate estimate =
        triangulate_midpoint(scene.track, scene.views);
    CHECK((estimate.position - expected).norm() <=
          1e-8 * (1.0 + expected.norm()));
  }
}

TEST_CASE("midpoint equals identity-weighted normal solve on unit sights") {
  Rng rng(229);
  for (int rep = 0; rep < 50; ++rep) {
    auto scene = testutil::make_random_track(rng, 2 + (rep % 7), 2.0);
    const std::vector<Eigen::Matrix3d> identity_weights(
        scene.track.entries.size(), Eigen::Matrix3d::Identity());
    const PointEstimate via_normal = triangulate_normal_weighted(
        scene.track, scene.views, identity_weights, /*unit_los=*/true);
    const PointEstimate midpoint =
        triangulate_midpoint(scene.track, scene.views);
    CHECK((via_normal.position - midpoint.position).norm() <=
          1e-8 * (1.0 + midpoint.position.norm()));
  }
}

TEST_CASE("dlt: exact on noiseless tracks") {
  Rng rng(233);
  for (int rep = 0; rep < 30; ++rep) {
    auto scene = testutil::make_random_track(rng, 2 + (rep % 5), 0.0);
    const PointEstimate estimate = triangulate_dlt(scene.track, scene.views);
    CHECK((estimate.position - scene.point).norm() <= 1e-10);
  }
}

TEST_CASE("dlt matches the explicit normal-equations oracle on 50 views") {
  Rng rng(239);
  auto scene = testutil::make_random_track(rng, 50, 2.0);

  Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  for (const TrackEntry& entry : scene.track.entries) {
    const View& view = scene.views[entry.view_id];
    const Eigen::Matrix3d block =
        cross_matrix(view.intrinsics.inverse_matrix() * entry.obs.pixel) *
        view.pose.rotation;
    const Eigen::Matrix<double, 2, 3> rows = block.topRows<2>();
    normal += rows.transpose() * rows;
    rhs += rows.transpose() * (rows * view.pose.center);
  }
  const Eigen::Vector3d expected = normal.ldlt().solve(rhs);

  const PointEstimate estimate = triangulate_dlt(scene.track, scene.views);
  CHECK((estimate.position - expected).norm() <= 1e-9 * (1.0 + expected.norm()));
}

TEST_CASE("stacked solvers satisfy their own normal equations") {
  Rng rng(241);
  for (int rep = 0; rep < 20; ++rep) {
    auto scene = testutil::make_random_track(rng, 3 + (rep % 5), 1.5);
    for (bool lost : {false, true}) {
      const PointEstimate estimate =
          lost ? triangulate_lost(scene.track, scene.views, 1.5)
               : triangulate_dlt(scene.track, scene.views);
      const std::vector<double> weights =
          lost ? lost_weights(scene.track, scene.views, 1.5)
               : std::vector<double>(scene.track.entries.size(), 1.0);
      Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
      Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
      for (std::size_t i = 0; i < scene.track.entries.size(); ++i) {
        const TrackEntry& entry = scene.track.entries[i];
        const View& view = scene.views[entry.view_id];
        const Eigen::Matrix3d block =
            cross_matrix(view.intrinsics.inverse_matrix() * entry.obs.pixel) *
            view.pose.rotation;
        const Eigen::Matrix<double, 2, 3> rows =
            weights[i] * block.topRows<2>();
        normal += rows.transpose() * rows;
        rhs += rows.transpose() * (rows * view.pose.center);
      }
      CHECK((normal * estimate.position - rhs).norm() <= 1e-10 * rhs.norm());
    }
  }
}

TEST_CASE("lost weights: nominal geometry has q1/q2 = rho2/rho1") {
  auto scene = nominal_two_view();
  const std::vector<double> q = lost_weights(scene.track, scene.views, 1.0);
  const double rho1 = std::sqrt(40.0);
  const double rho2 = std::sqrt(8.0);
  // Identical calibration and sigma: the ratio is set by the ranges alone
  // up to the calibrated-pixel norms.
  const Eigen::Matrix3d kinv = scene.views[0].intrinsics.inverse_matrix();
  const double n1 = (kinv * scene.track.entries[0].obs.pixel).norm();
  const double n2 = (kinv * scene.track.entries[1].obs.pixel).norm();
  CHECK(q[0] / q[1] == doctest::Approx((n1 / n2) * (rho2 / rho1)).epsilon(1e-10));
}

TEST_CASE("lost weights are inversely proportional to range") {
  // Doubling the whole geometry doubles every range and halves every weight.
  auto scene = nominal_two_view();
  auto scaled = scene;
  for (View& view : scaled.views) view.pose.center *= 2.0;
  const std::vector<double> q = lost_weights(scene.track, scene.views, 1.0);
  const std::vector<double> q_scaled =
      lost_weights(scaled.track, scaled.views, 1.0);
  CHECK(q_scaled[0] == doctest::Approx(0.5 * q[0]).epsilon(1e-10));
  CHECK(q_scaled[1] == doctest::Approx(0.5 * q[1]).epsilon(1e-10));
}

TEST_CASE("lost with equal weights equals dlt") {
  Rng rng(251);
  for (int rep = 0; rep < 50; ++rep) {
    auto scene = testutil::make_random_track(rng, 2 + (rep % 6), 2.0);
    const std::vector<double> constant(scene.track.entries.size(), 3.7);
    const PointEstimate lost =
        triangulate_lost_with_weights(scene.track, scene.views, constant);
    const PointEstimate dlt = triangulate_dlt(scene.track, scene.views);
    CHECK((lost.position - dlt.position).norm() <=
          1e-8 * (1.0 + dlt.position.norm()));
  }
}

TEST_CASE("equidistant views with equal sigma: lost equals dlt") {
  Rng rng(257);
  // Cameras on a ring, all at the same distance from the point; by symmetry
  // every weight is identical so LOST and DLT share the argmin.
  testutil::RandomTrack scene;
  scene.point = Eigen::Vector3d::Zero();
  const int n = 6;
  for (int v = 0; v < n; ++v) {
    View view;
    view.intrinsics = {500.0, 500.0, 0.0, 0.0, 0.0};
    const double angle = 2.0 * M_PI * v / n;
    view.pose.center = 10.0 * Eigen::Vector3d(std::cos(angle), 0.25,
                                              std::sin(angle))
                                  .normalized();
    view.pose.rotation = look_at_rotation(view.pose.center, scene.point);
    scene.views.push_back(view);
    Observation obs = project(scene.point, view);
    scene.track.entries.push_back({v, obs});
  }
  const PointEstimate lost = triangulate_lost(scene.track, scene.views, 1.0);
  const PointEstimate dlt = triangulate_dlt(scene.track, scene.views);
  CHECK((lost.position - dlt.position).norm() <= 1e-8);
}

TEST_CASE("lost: exact on noiseless tracks") {
  Rng rng(263);
  for (int rep = 0; rep < 30; ++rep) {
    auto scene = testutil::make_random_track(rng, 2 + (rep % 5), 0.0);
    const PointEstimate estimate =
        triangulate_lost(scene.track, scene.views, 1.0);
    CHECK((estimate.position - scene.point).norm() <= 1e-10);
  }
}

TEST_CASE("reduction: lostu with isotropic 2D noise only equals lost") {
  Rng rng(269);
  for (int rep = 0; rep < 60; ++rep) {
    const double sigma = rng.uniform(0.5, 3.0);
    auto scene = testutil::make_random_track(rng, 2 + (rep % 6), sigma);
    LostuOptions options;
    options.sources = NoiseSources::pixel_only();
    const PointEstimate lostu =
        triangulate_lostu(scene.track, scene.views, options);
    const PointEstimate lost =
        triangulate_lost(scene.track, scene.views, sigma);
    CHECK((lostu.position - lost.position).norm() <=
          1e-8 * (1.0 + lost.position.norm()));
  }
}

TEST_CASE("reduction: lostu with equal isotropic center noise equals midpoint") {
  Rng rng(271);
  for (int rep = 0; rep < 60; ++rep) {
    auto scene = testutil::make_random_track(rng, 2 + (rep % 6), 2.0);
    for (View& view : scene.views) {
      view.uncertainty.center_cov = 0.04 * Eigen::Matrix3d::Identity();
    }
    for (TrackEntry& entry : scene.track.entries) {
      entry.obs.cov2d.setZero();  // center noise only
    }
    LostuOptions options;
    options.sources = NoiseSources::center_only();
    const PointEstimate lostu =
        triangulate_lostu(scene.track, scene.views, options);
    const PointEstimate midpoint =
        triangulate_midpoint(scene.track, scene.views);
    CHECK((lostu.position - midpoint.position).norm() <=
          1e-8 * (1.0 + midpoint.position.norm()));
  }
}

TEST_CASE("lostu raises when every enabled source is zero") {
  Rng rng(277);
  auto scene = testutil::make_random_track(rng, 3, 0.0);
  CHECK_THROWS_AS(triangulate_lostu(scene.track, scene.views), AllSourcesZero);
}

TEST_CASE("lostu solution is a local minimum of its fixed-weight cost") {
  Rng rng(281);
  for (int rep = 0; rep < 20; ++rep) {
    auto scene = testutil::make_random_track(rng, 3 + (rep % 5), 1.0);
    for (View& view : scene.views) {
      view.uncertainty = PoseUncertainty::isotropic(0.002, 0.02);
    }
    LostuOptions options;
    options.sources.intrinsics = false;
    const PointEstimate estimate =
        triangulate_lostu(scene.track, scene.views, options);
    const std::vector<Eigen::Matrix3d> weights =
        lostu_weights(scene.track, scene.views, options.sources);
    const double at_solution =
        mahalanobis_cost(scene.track, scene.views, weights, estimate.position);
    const double scale = 1e-3 * (1.0 + estimate.position.norm());
    for (int probe = 0; probe < 20; ++probe) {
      Eigen::Vector3d delta;
      for (int i = 0; i < 3; ++i) delta[i] = rng.normal();
      delta = scale * delta.normalized();
      CHECK(mahalanobis_cost(scene.track, scene.views, weights,
                             estimate.position + delta) >= at_solution);
    }
  }
}

TEST_CASE("hs: noiseless pair is returned unchanged and triangulates exactly") {
  Rng rng(283);
  for (int rep = 0; rep < 30; ++rep) {
    auto scene = testutil::make_random_track(rng, 2, 0.0);
    const HsCorrection correction = hs_correct_pair(
        scene.track.entries[0].obs, scene.track.entries[1].obs, scene.views[0],
        scene.views[1]);
    CHECK((correction.corrected_a.pixel - scene.track.entries[0].obs.pixel)
              .norm() <= 1e-6);
    CHECK(correction.cost <= 1e-10);
    const PointEstimate estimate = triangulate_hs(scene.track, scene.views);
    CHECK((estimate.position - scene.point).norm() <= 1e-8);
  }
}

TEST_CASE("hs: corrected measurements satisfy the epipolar constraint") {
  Rng rng(293);
  for (int rep = 0; rep < 50; ++rep) {
    auto scene = testutil::make_random_track(rng, 2, 2.0);
    const Eigen::Matrix3d f =
        fundamental_matrix(scene.views[0], scene.views[1]);
    const HsCorrection correction = hs_correct_pair(
        scene.track.entries[0].obs, scene.track.entries[1].obs, scene.views[0],
        scene.views[1]);
    const double epipolar = correction.corrected_b.pixel.transpose() * f *
                            correction.corrected_a.pixel;
    const double scale = correction.corrected_a.pixel.norm() *
                         correction.corrected_b.pixel.norm();
    CHECK(std::abs(epipolar) <= 1e-10 * scale);
  }
}

TEST_CASE("hs is the two-view reprojection optimum among the solvers") {
  Rng rng(307);
  for (int rep = 0; rep < 60; ++rep) {
    auto scene = testutil::make_random_track(rng, 2, 2.0);
    const double hs =
        reprojection_cost(scene.track, scene.views,
                          triangulate_hs(scene.track, scene.views).position);
    const double dlt =
        reprojection_cost(scene.track, scene.views,
                          triangulate_dlt(scene.track, scene.views).position);
    const double midpoint = reprojection_cost(
        scene.track, scene.views,
        triangulate_midpoint(scene.track, scene.views).position);
    const double lost = reprojection_cost(
        scene.track, scene.views,
        triangulate_lost(scene.track, scene.views, 2.0).position);
    CHECK(hs <= dlt * (1.0 + 1e-9));
    CHECK(hs <= midpoint * (1.0 + 1e-9));
    CHECK(hs <= lost * (1.0 + 1e-9));
  }
}

TEST_CASE("hs requires exactly two views") {
  Rng rng(311);
  auto scene = testutil::make_random_track(rng, 3, 1.0);
  CHECK_THROWS_AS(triangulate_hs(scene.track, scene.views), TwoViewOnly);
}

TEST_CASE("degenerate guard: duplicated views never give a silent point") {
  Rng rng(313);
  auto scene = testutil::make_random_track(rng, 2, 1.0);
  scene.views[1] = scene.views[0];
  scene.track.entries[1].obs = scene.track.entries[0].obs;

  CHECK_THROWS_AS(triangulate_midpoint(scene.track, scene.views),
                  DegenerateParallax);
  CHECK_THROWS_AS(triangulate_dlt(scene.track, scene.views), RankDeficient);
  CHECK_THROWS_AS(triangulate_lost(scene.track, scene.views, 1.0),
                  DegenerateParallax);
  LostuOptions options;
  options.sources = NoiseSources::pixel_only();
  CHECK_THROWS_AS(triangulate_lostu(scene.track, scene.views, options),
                  DegenerateParallax);
  CHECK_THROWS_AS(triangulate_hs(scene.track, scene.views), DegenerateParallax);
}

TEST_CASE("point_covariance: symmetric geometry aligns with the axes") {
  auto scene = isoceles_scene();
  for (TrackEntry& entry : scene.track.entries) {
    entry.obs.cov2d = Eigen::Matrix2d::Identity();
  }
  const Eigen::Matrix3d cov = point_covariance(
      scene.track, scene.views, scene.point, NoiseSources::pixel_only());
  // Baseline along x, depth along z: off-diagonal couplings vanish.
  CHECK(std::abs(cov(0, 1)) <= 1e-12 * cov.norm());
  CHECK(std::abs(cov(1, 2)) <= 1e-12 * cov.norm());
  CHECK(std::abs(cov(0, 2)) <= 1e-12 * cov.norm());
}

TEST_CASE("point_covariance scales linearly with the 2D covariance") {
  Rng rng(317);
  auto scene = testutil::make_random_track(rng, 4, 1.0);
  const Eigen::Matrix3d base = point_covariance(
      scene.track, scene.views, scene.point, NoiseSources::pixel_only());
  for (TrackEntry& entry : scene.track.entries) entry.obs.cov2d *= 4.0;
  const Eigen::Matrix3d scaled = point_covariance(
      scene.track, scene.views, scene.point, NoiseSources::pixel_only());
  CHECK(scaled.isApprox(4.0 * base, 1e-10));
}

TEST_CASE("point_covariance trace shrinks as views are appended") {
  Rng rng(331);
  for (int rep = 0; rep < 10; ++rep) {
    auto scene = testutil::make_random_track(rng, 8, 1.0);
    double previous = std::numeric_limits<double>::infinity();
    for (int n = 2; n <= 8; ++n) {
      Track prefix;
      prefix.entries.assign(scene.track.entries.begin(),
                            scene.track.entries.begin() + n);
      const double trace =
          point_covariance(prefix, scene.views, scene.point,
                           NoiseSources::pixel_only())
              .trace();
      CHECK(trace <= previous * (1.0 + 1e-12));
      previous = trace;
    }
  }
}

TEST_CASE("lostu covariance equals point_covariance at its own estimate") {
  Rng rng(337);
  auto scene = testutil::make_random_track(rng, 5, 1.0);
  for (View& view : scene.views) {
    view.uncertainty = PoseUncertainty::isotropic(0.001, 0.01);
  }
  LostuOptions options;
  options.sources.intrinsics = false;
  options.prior_point = scene.point;
  const PointEstimate estimate =
      triangulate_lostu(scene.track, scene.views, options);
  NoiseSources sources;
  sources.intrinsics = false;
  const Eigen::Matrix3d cov =
      point_covariance(scene.track, scene.views, scene.point, sources);
  CHECK(estimate.covariance.isApprox(cov, 1e-9));
}
