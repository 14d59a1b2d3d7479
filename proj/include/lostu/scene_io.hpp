#pragma once

#include <Eigen/Core>

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lostu/geometry.hpp"
#include "lostu/triangulation.hpp"

namespace lostu {

// Scene files are strict-schema JSON: a version tag, views with a w-first
// world-to-camera unit quaternion, and tracks of pixel observations.
// Unknown fields are rejected so convention drift cannot pass silently.
// The document structs below mirror the file exactly (including which
// optional fields were present), so parse -> serialize is lossless.

struct ViewDoc {
  double fx = 1.0, fy = 1.0, cx = 0.0, cy = 0.0;
  std::optional<double> skew;                    // absent means 0
  std::array<double, 4> rotation{1, 0, 0, 0};    // w, x, y, z; world->camera
  std::array<double, 3> center{0, 0, 0};
  std::array<std::array<double, 3>, 3> rot_cov{};
  std::array<std::array<double, 3>, 3> center_cov{};
  std::optional<IntrinsicsVariance> intrinsics_var;
};

struct ObservationDoc {
  int view_id = 0;
  double px = 0.0, py = 0.0;
  std::array<std::array<double, 2>, 2> cov2d{};
};

struct TrackDoc {
  int point_id = 0;
  std::vector<ObservationDoc> observations;
};

struct PointDoc {
  int id = 0;
  std::array<double, 3> xyz{0, 0, 0};
};

struct SceneDoc {
  int version = 1;
  std::vector<ViewDoc> views;
  std::optional<std::vector<PointDoc>> points;  // ground truth, if any
  std::vector<TrackDoc> tracks;
};

inline constexpr int kSceneFileVersion = 1;

/// Parse a scene document; throws SchemaError on any deviation from the
/// schema (unknown field, missing field, wrong shape, bad version).
SceneDoc parse_scene_json(const std::string& text);

std::string scene_to_json(const SceneDoc& doc);

SceneDoc load_scene_file(const std::string& path);
void save_scene_file(const SceneDoc& doc, const std::string& path);

/// Convert a parsed document into the in-memory scene, enforcing the type
/// invariants (unit quaternion within 1e-6, symmetric PSD covariance
/// blocks, valid and distinct track view ids). Violations raise
/// SchemaError. Ground-truth points land at their id in Scene::points;
/// ids without an entry hold NaN.
Scene to_scene(const SceneDoc& doc);

/// Build a document from a scene (rotation matrices become canonical
/// w >= 0 unit quaternions).
SceneDoc from_scene(const Scene& scene);

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

struct TriangulationRow {
  int point_id = 0;
  PointEstimate estimate;
};

/// CSV with one row per triangulated point:
/// point_id,x,y,z,cov_xx,cov_xy,cov_xz,cov_yy,cov_yz,cov_zz,residual_cost,method
void write_triangulation_csv(std::ostream& out,
                             const std::vector<TriangulationRow>& rows);

}  // namespace lostu
