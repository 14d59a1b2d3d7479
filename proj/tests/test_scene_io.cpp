#include <doctest.h>

#include <sstream>

#include "lostu/errors.hpp"
#include "lostu/scene_io.hpp"
#include "oracles.hpp"

using namespace lostu;

namespace {

const char* kMinimalScene = R"({
  "version": 1,
  "views": [
    {"fx": 400.0, "fy": 400.0, "cx": 0.0, "cy": 0.0,
     "rotation": [1.0, 0.0, 0.0, 0.0], "center": [0.0, 0.0, -5.0],
     "rot_cov": [[0,0,0],[0,0,0],[0,0,0]],
     "center_cov": [[0,0,0],[0,0,0],[0,0,0]]},
    {"fx": 400.0, "fy": 400.0, "cx": 0.0, "cy": 0.0, "skew": 0.25,
     "rotation": [1.0, 0.0, 0.0, 0.0], "center": [2.0, 0.0, -5.0],
     "rot_cov": [[0,0,0],[0,0,0],[0,0,0]],
     "center_cov": [[0,0,0],[0,0,0],[0,0,0]]}
  ],
  "points": [{"id": 0, "xyz": [0.0, 0.0, 0.0]}],
  "tracks": [
    {"point_id": 0, "observations": [
      {"view_id": 0, "px": 0.0, "py": 0.0, "cov2d": [[1.0, 0.0], [0.0, 1.0]]},
      {"view_id": 1, "px": -160.0, "py": 0.0, "cov2d": [[1.0, 0.0], [0.0, 1.0]]}
    ]}
  ]
})";

std::string replace_first(std::string text, const std::string& from,
                          const std::string& to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("scene round trip is byte-identical after one serialization") {
  const SceneDoc doc = parse_scene_json(kMinimalScene);
  const std::string once = scene_to_json(doc);
  const std::string twice = scene_to_json(parse_scene_json(once));
  CHECK(once == twice);
}

TEST_CASE("document fields survive parse -> serialize -> parse") {
  const SceneDoc doc = parse_scene_json(kMinimalScene);
  const SceneDoc again = parse_scene_json(scene_to_json(doc));
  REQUIRE(again.views.size() == 2);
  CHECK(again.views[0].fx == doc.views[0].fx);
  CHECK(!again.views[0].skew.has_value());
  CHECK(again.views[1].skew.has_value());
  CHECK(*again.views[1].skew == 0.25);
  CHECK(again.views[0].rotation == doc.views[0].rotation);
  REQUIRE(again.points.has_value());
  CHECK(again.points->size() == 1);
  REQUIRE(again.tracks.size() == 1);
  CHECK(again.tracks[0].observations[1].px == -160.0);
}

TEST_CASE("from_scene -> to_scene preserves the geometry") {
  Rng rng(443);
  auto random = testutil::make_random_track(rng, 4, 1.0);
  Scene scene;
  scene.views = random.views;
  scene.views[2].uncertainty = PoseUncertainty::isotropic(0.01, 0.05);
  scene.points.push_back(random.point);
  scene.tracks.push_back(random.track);

  const Scene restored = to_scene(from_scene(scene));
  REQUIRE(restored.views.size() == scene.views.size());
  for (std::size_t v = 0; v < scene.views.size(); ++v) {
    CHECK(restored.views[v].pose.rotation.isApprox(scene.views[v].pose.rotation,
                                                   1e-12));
    CHECK(restored.views[v].pose.center == scene.views[v].pose.center);
    CHECK(restored.views[v].uncertainty.rot_cov ==
          scene.views[v].uncertainty.rot_cov);
  }
  CHECK(restored.points[0] == scene.points[0]);
  CHECK(restored.tracks[0].entries[1].obs.pixel ==
        scene.tracks[0].entries[1].obs.pixel);
}

TEST_CASE("to_scene builds valid views and tracks") {
  const Scene scene = to_scene(parse_scene_json(kMinimalScene));
  REQUIRE(scene.views.size() == 2);
  CHECK(scene.views[1].intrinsics.skew == 0.25);
  REQUIRE(scene.tracks.size() == 1);
  CHECK(scene.tracks[0].entries.size() == 2);
  CHECK(scene.points.size() == 1);
}

TEST_CASE("strict schema: unknown fields are rejected everywhere") {
  CHECK_THROWS_AS(
      parse_scene_json(replace_first(kMinimalScene, "\"version\": 1",
                                     "\"version\": 1, \"extra\": 2")),
      SchemaError);
  CHECK_THROWS_AS(
      parse_scene_json(replace_first(kMinimalScene, "\"fx\": 400.0",
                                     "\"fx\": 400.0, \"focal\": 1")),
      SchemaError);
  CHECK_THROWS_AS(
      parse_scene_json(replace_first(kMinimalScene, "\"px\": 0.0",
                                     "\"px\": 0.0, \"weight\": 1")),
      SchemaError);
}

TEST_CASE("strict schema: missing fields and malformed shapes are rejected") {
  CHECK_THROWS_AS(
      parse_scene_json(replace_first(kMinimalScene, "\"fx\": 400.0, ", "")),
      SchemaError);
  CHECK_THROWS_AS(
      parse_scene_json(replace_first(kMinimalScene,
                                     "\"rotation\": [1.0, 0.0, 0.0, 0.0]",
                                     "\"rotation\": [1.0, 0.0, 0.0]")),
      SchemaError);
  CHECK_THROWS_AS(parse_scene_json("not json at all"), SchemaError);
  CHECK_THROWS_AS(
      parse_scene_json(replace_first(kMinimalScene, "\"version\": 1",
                                     "\"version\": 9")),
      SchemaError);
}

TEST_CASE("invariant violations surface as schema errors") {
  // Non-unit quaternion.
  CHECK_THROWS_AS(
      to_scene(parse_scene_json(replace_first(
          kMinimalScene, "\"rotation\": [1.0, 0.0, 0.0, 0.0]",
          "\"rotation\": [1.0, 0.5, 0.0, 0.0]"))),
      SchemaError);
  // Track referencing a missing view.
  CHECK_THROWS_AS(
      to_scene(parse_scene_json(
          replace_first(kMinimalScene, "\"view_id\": 1", "\"view_id\": 7"))),
      SchemaError);
  // Duplicate view within a track.
  CHECK_THROWS_AS(
      to_scene(parse_scene_json(
          replace_first(kMinimalScene, "\"view_id\": 1", "\"view_id\": 0"))),
      SchemaError);
  // Asymmetric covariance block.
  CHECK_THROWS_AS(
      to_scene(parse_scene_json(replace_first(
          kMinimalScene, "\"center_cov\": [[0,0,0],[0,0,0],[0,0,0]]},",
          "\"center_cov\": [[0,1,0],[0,0,0],[0,0,0]]},"))),
      SchemaError);
}

TEST_CASE("format_double is the shortest round-trip representation") {
  for (double value : {0.1, 1.0 / 3.0, 123456.789, -2e-17, 0.0, 40.0}) {
    const std::string text = format_double(value);
    CHECK(std::stod(text) == value);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(40.0) == "40");
}

TEST_CASE("triangulation CSV layout") {
  PointEstimate estimate;
  estimate.position = Eigen::Vector3d(1.0, 2.5, -3.0);
  estimate.method = Method::LOST;
  estimate.residual_cost = 0.25;
  std::ostringstream out;
  write_triangulation_csv(out, {{7, estimate}});
  const std::string expected =
      "point_id,x,y,z,cov_xx,cov_xy,cov_xz,cov_yy,cov_yz,cov_zz,"
      "residual_cost,method\n7,1,2.5,-3,0,0,0,0,0,0,0.25,lost\n";
  CHECK(out.str() == expected);
}
