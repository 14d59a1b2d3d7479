#include "lostu/scene_io.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "lostu/errors.hpp"

namespace lostu {

namespace {

using nlohmann::json;

void require_keys(const json& object, const char* where,
                  std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional) {
  if (!object.is_object()) {
    throw SchemaError(std::string(where) + " must be a JSON object");
  }
  for (const auto& item : object.items()) {
    bool known = false;
    for (const char* key : required) known = known || item.key() == key;
    for (const char* key : optional) known = known || item.key() == key;
    if (!known) {
      throw SchemaError(std::string("unknown field '") + item.key() + "' in " +
                        where);
    }
  }
  for (const char* key : required) {
    if (!object.contains(key)) {
      throw SchemaError(std::string("missing field '") + key + "' in " + where);
    }
  }
}

double as_number(const json& value, const char* where) {
  if (!value.is_number()) {
    throw SchemaError(std::string(where) + " must be a number");
  }
  return value.get<double>();
}

int as_int(const json& value, const char* where) {
  if (!value.is_number_integer()) {
    throw SchemaError(std::string(where) + " must be an integer");
  }
  return value.get<int>();
}

template <std::size_t Rows, std::size_t Cols>
std::array<std::array<double, Cols>, Rows> as_matrix(const json& value,
                                                     const char* where) {
  std::array<std::array<double, Cols>, Rows> out{};
  if (!value.is_array() || value.size() != Rows) {
    throw SchemaError(std::string(where) + " must be a " +
                      std::to_string(Rows) + "x" + std::to_string(Cols) +
                      " array");
  }
  for (std::size_t r = 0; r < Rows; ++r) {
    const json& row = value[r];
    if (!row.is_array() || row.size() != Cols) {
      throw SchemaError(std::string(where) + " must be a " +
                        std::to_string(Rows) + "x" + std::to_string(Cols) +
                        " array");
    }
    for (std::size_t c = 0; c < Cols; ++c) out[r][c] = as_number(row[c], where);
  }
  return out;
}

template <std::size_t N>
std::array<double, N> as_vector(const json& value, const char* where) {
  std::array<double, N> out{};
  if (!value.is_array() || value.size() != N) {
    throw SchemaError(std::string(where) + " must be an array of " +
                      std::to_string(N) + " numbers");
  }
  for (std::size_t i = 0; i < N; ++i) out[i] = as_number(value[i], where);
  return out;
}

template <std::size_t Rows, std::size_t Cols>
json matrix_to_json(const std::array<std::array<double, Cols>, Rows>& m) {
  json out = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (double v : row) r.push_back(v);
    out.push_back(r);
  }
  return out;
}

template <std::size_t N>
json vector_to_json(const std::array<double, N>& v) {
  json out = json::array();
  for (double x : v) out.push_back(x);
  return out;
}

ViewDoc parse_view(const json& object) {
  require_keys(object, "views[]",
               {"fx", "fy", "cx", "cy", "rotation", "center", "rot_cov",
                "center_cov"},
               {"skew", "intrinsics_var"});
  ViewDoc view;
  view.fx = as_number(object["fx"], "fx");
  view.fy = as_number(object["fy"], "fy");
  view.cx = as_number(object["cx"], "cx");
  view.cy = as_number(object["cy"], "cy");
  if (object.contains("skew")) view.skew = as_number(object["skew"], "skew");
  view.rotation = as_vector<4>(object["rotation"], "rotation");
  view.center = as_vector<3>(object["center"], "center");
  view.rot_cov = as_matrix<3, 3>(object["rot_cov"], "rot_cov");
  view.center_cov = as_matrix<3, 3>(object["center_cov"], "center_cov");
  if (object.contains("intrinsics_var")) {
    const json& var = object["intrinsics_var"];
    require_keys(var, "intrinsics_var", {}, {"fx", "fy", "cx", "cy", "skew"});
    IntrinsicsVariance iv;
    if (var.contains("fx")) iv.fx = as_number(var["fx"], "intrinsics_var.fx");
    if (var.contains("fy")) iv.fy = as_number(var["fy"], "intrinsics_var.fy");
    if (var.contains("cx")) iv.cx = as_number(var["cx"], "intrinsics_var.cx");
    if (var.contains("cy")) iv.cy = as_number(var["cy"], "intrinsics_var.cy");
    if (var.contains("skew")) {
      iv.skew = as_number(var["skew"], "intrinsics_var.skew");
    }
    view.intrinsics_var = iv;
  }
  return view;
}

}  // namespace

SceneDoc parse_scene_json(const std::string& text) {
  json root = json::parse(text, nullptr, false);
  if (root.is_discarded()) {
    throw SchemaError("scene file is not valid JSON");
  }
  require_keys(root, "scene", {"version", "views", "tracks"}, {"points"});
  SceneDoc doc;
  doc.version = as_int(root["version"], "version");
  if (doc.version != kSceneFileVersion) {
    throw SchemaError("unsupported scene file version " +
                      std::to_string(doc.version));
  }
  if (!root["views"].is_array()) throw SchemaError("views must be an array");
  for (const json& view : root["views"]) doc.views.push_back(parse_view(view));

  if (root.contains("points")) {
    if (!root["points"].is_array()) {
      throw SchemaError("points must be an array");
    }
    doc.points.emplace();
    for (const json& point : root["points"]) {
      require_keys(point, "points[]", {"id", "xyz"}, {});
      PointDoc p;
      p.id = as_int(point["id"], "points[].id");
      p.xyz = as_vector<3>(point["xyz"], "points[].xyz");
      doc.points->push_back(p);
    }
  }

  if (!root["tracks"].is_array()) throw SchemaError("tracks must be an array");
  for (const json& track : root["tracks"]) {
    require_keys(track, "tracks[]", {"point_id", "observations"}, {});
    TrackDoc t;
    t.point_id = as_int(track["point_id"], "tracks[].point_id");
    if (!track["observations"].is_array()) {
      throw SchemaError("observations must be an array");
    }
    for (const json& obs : track["observations"]) {
      require_keys(obs, "observations[]", {"view_id", "px", "py", "cov2d"}, {});
      ObservationDoc o;
      o.view_id = as_int(obs["view_id"], "observations[].view_id");
      o.px = as_number(obs["px"], "observations[].px");
      o.py = as_number(obs["py"], "observations[].py");
      o.cov2d = as_matrix<2, 2>(obs["cov2d"], "observations[].cov2d");
      t.observations.push_back(o);
    }
    doc.tracks.push_back(t);
  }
  return doc;
}

std::string scene_to_json(const SceneDoc& doc) {
  json root;
  root["version"] = doc.version;
  root["views"] = json::array();
  for (const ViewDoc& view : doc.views) {
    json v;
    v["fx"] = view.fx;
    v["fy"] = view.fy;
    v["cx"] = view.cx;
    v["cy"] = view.cy;
    if (view.skew) v["skew"] = *view.skew;
    v["rotation"] = vector_to_json(view.rotation);
    v["center"] = vector_to_json(view.center);
    v["rot_cov"] = matrix_to_json(view.rot_cov);
    v["center_cov"] = matrix_to_json(view.center_cov);
    if (view.intrinsics_var) {
      json var = json::object();
      var["fx"] = view.intrinsics_var->fx;
      var["fy"] = view.intrinsics_var->fy;
      var["cx"] = view.intrinsics_var->cx;
      var["cy"] = view.intrinsics_var->cy;
      var["skew"] = view.intrinsics_var->skew;
      v["intrinsics_var"] = var;
    }
    root["views"].push_back(v);
  }
  if (doc.points) {
    root["points"] = json::array();
    for (const PointDoc& point : *doc.points) {
      json p;
      p["id"] = point.id;
      p["xyz"] = vector_to_json(point.xyz);
      root["points"].push_back(p);
    }
  }
  root["tracks"] = json::array();
  for (const TrackDoc& track : doc.tracks) {
    json t;
    t["point_id"] = track.point_id;
    t["observations"] = json::array();
    for (const ObservationDoc& obs : track.observations) {
      json o;
      o["view_id"] = obs.view_id;
      o["px"] = obs.px;
      o["py"] = obs.py;
      o["cov2d"] = matrix_to_json(obs.cov2d);
      t["observations"].push_back(o);
    }
    root["tracks"].push_back(t);
  }
  return root.dump(2) + "\n";
}

SceneDoc load_scene_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw SchemaError("cannot open scene file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scene_json(buffer.str());
}

void save_scene_file(const SceneDoc& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot write scene file: " + path);
  }
  out << scene_to_json(doc);
}

Scene to_scene(const SceneDoc& doc) {
  Scene scene;
  for (const ViewDoc& vd : doc.views) {
    View view;
    view.intrinsics = {vd.fx, vd.fy, vd.cx, vd.cy, vd.skew.value_or(0.0)};
    const Eigen::Quaterniond q(vd.rotation[0], vd.rotation[1], vd.rotation[2],
                               vd.rotation[3]);
    if (std::abs(q.norm() - 1.0) > 1e-6) {
      throw SchemaError("rotation quaternion is not unit length");
    }
    view.pose.rotation = q.normalized().toRotationMatrix();
    view.pose.center = Eigen::Vector3d(vd.center[0], vd.center[1], vd.center[2]);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        view.uncertainty.rot_cov(r, c) = vd.rot_cov[r][c];
        view.uncertainty.center_cov(r, c) = vd.center_cov[r][c];
      }
    }
    view.intrinsics_var = vd.intrinsics_var;
    scene.views.push_back(view);
  }
  if (doc.points) {
    int max_id = -1;
    for (const PointDoc& p : *doc.points) max_id = std::max(max_id, p.id);
    scene.points.assign(max_id + 1,
                        Eigen::Vector3d::Constant(
                            std::numeric_limits<double>::quiet_NaN()));
    for (const PointDoc& p : *doc.points) {
      if (p.id < 0) throw SchemaError("point id must be non-negative");
      scene.points[p.id] = Eigen::Vector3d(p.xyz[0], p.xyz[1], p.xyz[2]);
    }
  }
  for (const TrackDoc& td : doc.tracks) {
    Track track;
    track.point_id = td.point_id;
    for (const ObservationDoc& od : td.observations) {
      Eigen::Matrix2d cov;
      cov << od.cov2d[0][0], od.cov2d[0][1], od.cov2d[1][0], od.cov2d[1][1];
      track.entries.push_back({od.view_id, Observation(od.px, od.py, cov)});
    }
    scene.tracks.push_back(track);
  }
  try {
    validate(scene);
  } catch (const InvalidInput& error) {
    throw SchemaError(error.what());
  }
  return scene;
}

SceneDoc from_scene(const Scene& scene) {
  SceneDoc doc;
  doc.version = kSceneFileVersion;
  for (const View& view : scene.views) {
    ViewDoc vd;
    vd.fx = view.intrinsics.fx;
    vd.fy = view.intrinsics.fy;
    vd.cx = view.intrinsics.cx;
    vd.cy = view.intrinsics.cy;
    if (view.intrinsics.skew != 0.0) vd.skew = view.intrinsics.skew;
    Eigen::Quaterniond q(view.pose.rotation);
    q.normalize();
    if (q.w() < 0.0) q.coeffs() = -q.coeffs();
    vd.rotation = {q.w(), q.x(), q.y(), q.z()};
    vd.center = {view.pose.center.x(), view.pose.center.y(),
                 view.pose.center.z()};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        vd.rot_cov[r][c] = view.uncertainty.rot_cov(r, c);
        vd.center_cov[r][c] = view.uncertainty.center_cov(r, c);
      }
    }
    vd.intrinsics_var = view.intrinsics_var;
    doc.views.push_back(vd);
  }
  if (!scene.points.empty()) {
    doc.points.emplace();
    for (std::size_t i = 0; i < scene.points.size(); ++i) {
      if (!scene.points[i].allFinite()) continue;
      doc.points->push_back({static_cast<int>(i),
                             {scene.points[i].x(), scene.points[i].y(),
                              scene.points[i].z()}});
    }
  }
  for (const Track& track : scene.tracks) {
    TrackDoc td;
    td.point_id = track.point_id;
    for (const TrackEntry& entry : track.entries) {
      ObservationDoc od;
      od.view_id = entry.view_id;
      od.px = entry.obs.pixel.x();
      od.py = entry.obs.pixel.y();
      od.cov2d = {{{entry.obs.cov2d(0, 0), entry.obs.cov2d(0, 1)},
                   {entry.obs.cov2d(1, 0), entry.obs.cov2d(1, 1)}}};
      td.observations.push_back(od);
    }
    doc.tracks.push_back(td);
  }
  return doc;
}

std::string format_double(double value) {
  char buffer[32];
  const auto result =
      std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

void write_triangulation_csv(std::ostream& out,
                             const std::vector<TriangulationRow>& rows) {
  out << "point_id,x,y,z,cov_xx,cov_xy,cov_xz,cov_yy,cov_yz,cov_zz,"
         "residual_cost,method\n";
  for (const TriangulationRow& row : rows) {
    const PointEstimate& e = row.estimate;
    out << row.point_id << ',' << format_double(e.position.x()) << ','
        << format_double(e.position.y()) << ','
        << format_double(e.position.z()) << ','
        << format_double(e.covariance(0, 0)) << ','
        << format_double(e.covariance(0, 1)) << ','
        << format_double(e.covariance(0, 2)) << ','
        << format_double(e.covariance(1, 1)) << ','
        << format_double(e.covariance(1, 2)) << ','
        << format_double(e.covariance(2, 2)) << ','
        << format_double(e.residual_cost) << ',' << method_name(e.method)
        << '\n';
  }
}

}  // namespace lostu
