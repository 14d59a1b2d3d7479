#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "lostu/bench.hpp"
#include "lostu/errors.hpp"
#include "lostu/geometry.hpp"
#include "lostu/resection.hpp"
#include "lostu/residual.hpp"
#include "lostu/scene_io.hpp"
#include "lostu/triangulation.hpp"

namespace py = pybind11;
using namespace lostu;

namespace {

Scene load_scene_py(const std::string& path) {
  return to_scene(load_scene_file(path));
}

void save_scene_py(const Scene& scene, const std::string& path) {
  save_scene_file(from_scene(scene), path);
}

std::string bench_csv(const std::vector<bench::BenchReport>& reports) {
  std::ostringstream out;
  bench::write_bench_csv(out, reports);
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_lostu, m) {
  m.doc() = "Uncertainty-aware non-iterative multi-view triangulation";

  py::register_exception<CheiralityError>(m, "CheiralityError");
  py::register_exception<DegenerateParallax>(m, "DegenerateParallax");
  py::register_exception<RankDeficient>(m, "RankDeficient");
  py::register_exception<TwoViewOnly>(m, "TwoViewOnly");
  py::register_exception<AllSourcesZero>(m, "AllSourcesZero");
  py::register_exception<MissingScale>(m, "MissingScale");
  py::register_exception<SchemaError>(m, "SchemaError");

  py::class_<CameraIntrinsics>(m, "CameraIntrinsics")
      .def(py::init<>())
      .def(py::init([](double fx, double fy, double cx, double cy, double skew) {
             return CameraIntrinsics{fx, fy, cx, cy, skew};
           }),
           py::arg("fx"), py::arg("fy"), py::arg("cx") = 0.0,
           py::arg("cy") = 0.0, py::arg("skew") = 0.0)
      .def_readwrite("fx", &CameraIntrinsics::fx)
      .def_readwrite("fy", &CameraIntrinsics::fy)
      .def_readwrite("cx", &CameraIntrinsics::cx)
      .def_readwrite("cy", &CameraIntrinsics::cy)
      .def_readwrite("skew", &CameraIntrinsics::skew)
      .def("matrix", &CameraIntrinsics::matrix)
      .def("inverse_matrix", &CameraIntrinsics::inverse_matrix);

  py::class_<CameraPose>(m, "CameraPose")
      .def(py::init<>())
      .def_readwrite("rotation", &CameraPose::rotation)
      .def_readwrite("center", &CameraPose::center);

  py::class_<PoseUncertainty>(m, "PoseUncertainty")
      .def(py::init<>())
      .def_static("isotropic", &PoseUncertainty::isotropic,
                  py::arg("sigma_phi_rad"), py::arg("sigma_c"))
      .def_readwrite("rot_cov", &PoseUncertainty::rot_cov)
      .def_readwrite("center_cov", &PoseUncertainty::center_cov);

  py::class_<Observation>(m, "Observation")
      .def(py::init<>())
      .def(py::init<double, double, const Eigen::Matrix2d&>(), py::arg("px"),
           py::arg("py"), py::arg("cov2d") = Eigen::Matrix2d::Zero().eval())
      .def_readwrite("pixel", &Observation::pixel)
      .def_readwrite("cov2d", &Observation::cov2d);

  py::class_<View>(m, "View")
      .def(py::init<>())
      .def_readwrite("intrinsics", &View::intrinsics)
      .def_readwrite("pose", &View::pose)
      .def_readwrite("uncertainty", &View::uncertainty);

  py::class_<TrackEntry>(m, "TrackEntry")
      .def(py::init<>())
      .def(py::init([](int view_id, const Observation& obs) {
             return TrackEntry{view_id, obs};
           }),
           py::arg("view_id"), py::arg("obs"))
      .def_readwrite("view_id", &TrackEntry::view_id)
      .def_readwrite("obs", &TrackEntry::obs);

  py::class_<Track>(m, "Track")
      .def(py::init<>())
      .def_readwrite("point_id", &Track::point_id)
      .def_readwrite("entries", &Track::entries);

  py::class_<Scene>(m, "Scene")
      .def(py::init<>())
      .def_readwrite("views", &Scene::views)
      .def_readwrite("points", &Scene::points)
      .def_readwrite("tracks", &Scene::tracks);

  py::enum_<Method>(m, "Method")
      .value("Midpoint", Method::Midpoint)
      .value("DLT", Method::DLT)
      .value("LOST", Method::LOST)
      .value("LOSTU", Method::LOSTU)
      .value("HS", Method::HS);

  py::enum_<PairRule>(m, "PairRule")
      .value("MaxParallax", PairRule::MaxParallax)
      .value("Anchor", PairRule::Anchor);

  py::enum_<PinvMode>(m, "PinvMode")
      .value("Thresholded", PinvMode::Thresholded)
      .value("StrictRank2", PinvMode::StrictRank2)
      .value("Diagonal", PinvMode::Diagonal);

  py::class_<NoiseSources>(m, "NoiseSources")
      .def(py::init<>())
      .def_readwrite("pixel", &NoiseSources::pixel)
      .def_readwrite("rotation", &NoiseSources::rotation)
      .def_readwrite("center", &NoiseSources::center)
      .def_readwrite("intrinsics", &NoiseSources::intrinsics)
      .def_static("pixel_only", &NoiseSources::pixel_only)
      .def_static("center_only", &NoiseSources::center_only);

  py::class_<PointEstimate>(m, "PointEstimate")
      .def_readonly("position", &PointEstimate::position)
      .def_readonly("covariance", &PointEstimate::covariance)
      .def_readonly("residual_cost", &PointEstimate::residual_cost)
      .def_readonly("method", &PointEstimate::method);

  m.def("project", &project, py::arg("point"), py::arg("view"));
  m.def("los_direction", &los_direction, py::arg("obs"), py::arg("view"));
  m.def("los_direction_world", &los_direction_world, py::arg("obs"),
        py::arg("view"));
  m.def(
      "sample_noisy_view",
      [](const View& view, std::uint64_t seed) {
        return sample_noisy_view(view, seed);
      },
      py::arg("view"), py::arg("seed"));
  m.def("look_at_rotation", &look_at_rotation, py::arg("eye"),
        py::arg("target"), py::arg("up") = Eigen::Vector3d(0, 1, 0));

  m.def("residual", &residual, py::arg("obs"), py::arg("view"),
        py::arg("point"));

  m.def("bootstrap_range", &bootstrap_range, py::arg("track"),
        py::arg("views"), py::arg("view_id"),
        py::arg("rule") = PairRule::MaxParallax);
  m.def("triangulate_midpoint", &triangulate_midpoint, py::arg("track"),
        py::arg("views"));
  m.def("triangulate_dlt", &triangulate_dlt, py::arg("track"), py::arg("views"));
  m.def(
      "triangulate_lost",
      [](const Track& track, const std::vector<View>& views, double sigma_px) {
        return triangulate_lost(track, views, sigma_px);
      },
      py::arg("track"), py::arg("views"), py::arg("sigma_px"));
  m.def(
      "triangulate_lostu",
      [](const Track& track, const std::vector<View>& views,
         const NoiseSources& sources, bool diag_approx) {
        LostuOptions options;
        options.sources = sources;
        if (diag_approx) options.pinv = PinvMode::Diagonal;
        return triangulate_lostu(track, views, options);
      },
      py::arg("track"), py::arg("views"),
      py::arg("sources") = NoiseSources{}, py::arg("diag_approx") = false);
  m.def("triangulate_hs", &triangulate_hs, py::arg("track"), py::arg("views"));
  m.def("point_covariance", &point_covariance, py::arg("track"),
        py::arg("views"), py::arg("point"),
        py::arg("sources") = NoiseSources{});

  py::class_<ResectionPoint>(m, "ResectionPoint")
      .def(py::init<>())
      .def(py::init([](const Eigen::Vector3d& position,
                       const Observation& obs, const Eigen::Matrix3d& cov) {
             return ResectionPoint{position, cov, obs};
           }),
           py::arg("position"), py::arg("obs"),
           py::arg("cov") = Eigen::Matrix3d::Zero().eval())
      .def_readwrite("position", &ResectionPoint::position)
      .def_readwrite("cov", &ResectionPoint::cov)
      .def_readwrite("obs", &ResectionPoint::obs);

  py::class_<ResectionResult>(m, "ResectionResult")
      .def_readonly("center", &ResectionResult::center)
      .def_readonly("covariance", &ResectionResult::covariance)
      .def_readonly("residual_cost", &ResectionResult::residual_cost);

  m.def(
      "estimate_camera_center",
      [](const View& view, const std::vector<ResectionPoint>& points) {
        return estimate_camera_center(view, points);
      },
      py::arg("view"), py::arg("points"));

  m.def("load_scene", &load_scene_py, py::arg("path"));
  m.def("save_scene", &save_scene_py, py::arg("scene"), py::arg("path"));

  // Benchmark studies.
  py::class_<bench::TwoViewConfig>(m, "TwoViewConfig")
      .def(py::init<>())
      .def_readwrite("y1", &bench::TwoViewConfig::y1)
      .def_readwrite("z1", &bench::TwoViewConfig::z1)
      .def_readwrite("focal", &bench::TwoViewConfig::focal)
      .def_readwrite("sigma_px", &bench::TwoViewConfig::sigma_px)
      .def_readwrite("sigma_phi_deg", &bench::TwoViewConfig::sigma_phi_deg)
      .def_readwrite("sigma_c", &bench::TwoViewConfig::sigma_c)
      .def_readwrite("trials", &bench::TwoViewConfig::trials)
      .def_readwrite("seed", &bench::TwoViewConfig::seed);

  py::class_<bench::NViewConfig>(m, "NViewConfig")
      .def(py::init<>())
      .def_readwrite("point", &bench::NViewConfig::point)
      .def_readwrite("views", &bench::NViewConfig::views)
      .def_readwrite("pointing_jitter_deg", &bench::NViewConfig::pointing_jitter_deg)
      .def_readwrite("focal", &bench::NViewConfig::focal)
      .def_readwrite("sigma_px", &bench::NViewConfig::sigma_px)
      .def_readwrite("sigma_phi_deg", &bench::NViewConfig::sigma_phi_deg)
      .def_readwrite("sigma_c", &bench::NViewConfig::sigma_c)
      .def_readwrite("trials", &bench::NViewConfig::trials)
      .def_readwrite("seed", &bench::NViewConfig::seed);

  py::class_<bench::Sweep>(m, "Sweep")
      .def(py::init<>())
      .def_readwrite("param", &bench::Sweep::param)
      .def_readwrite("grid", &bench::Sweep::grid);

  py::class_<bench::MethodStats>(m, "MethodStats")
      .def_readonly("method", &bench::MethodStats::method)
      .def_readonly("rmse", &bench::MethodStats::rmse)
      .def_readonly("deterioration_pct", &bench::MethodStats::deterioration_pct)
      .def_readonly("mean_runtime_us", &bench::MethodStats::mean_runtime_us)
      .def_readonly("trials_ok", &bench::MethodStats::trials_ok)
      .def_readonly("trials_excluded", &bench::MethodStats::trials_excluded);

  py::class_<bench::BenchReport>(m, "BenchReport")
      .def_readonly("sweep_param", &bench::BenchReport::sweep_param)
      .def_readonly("sweep_value", &bench::BenchReport::sweep_value)
      .def_readonly("trials", &bench::BenchReport::trials)
      .def_readonly("seed", &bench::BenchReport::seed)
      .def_readonly("methods", &bench::BenchReport::methods);

  m.def(
      "run_two_view_study",
      [](const bench::TwoViewConfig& config, const bench::Sweep& sweep,
         int threads, bool timing) {
        bench::RunOptions options;
        options.threads = threads;
        options.timing = timing;
        return bench::run_two_view_study(config, sweep, options);
      },
      py::arg("config"), py::arg("sweep") = bench::Sweep{},
      py::arg("threads") = 0, py::arg("timing") = false);
  m.def(
      "run_n_view_study",
      [](const bench::NViewConfig& config, const bench::Sweep& sweep,
         int threads, bool timing) {
        bench::RunOptions options;
        options.threads = threads;
        options.timing = timing;
        return bench::run_n_view_study(config, sweep, options);
      },
      py::arg("config"), py::arg("sweep") = bench::Sweep{},
      py::arg("threads") = 0, py::arg("timing") = false);
  m.def("default_sweep", &bench::default_sweep, py::arg("study"),
        py::arg("param"));
  m.def("bench_csv", &bench_csv, py::arg("reports"));

#ifdef LOSTU_VERSION
  m.attr("__version__") = LOSTU_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
