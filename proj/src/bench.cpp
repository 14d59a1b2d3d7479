#include "lostu/bench.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "lostu/errors.hpp"
#include "lostu/scene_io.hpp"

namespace lostu::bench {

namespace {

using nlohmann::json;

constexpr double kDegToRad = M_PI / 180.0;

int resolve_threads(const RunOptions& options, int trials) {
  int threads = options.threads;
  const int machine =
      std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  if (threads <= 0) {
    threads = machine;
    if (const char* env = std::getenv("TRI_BENCH_THREADS")) {
      const int cap = std::atoi(env);
      if (cap > 0) threads = std::min(machine, cap);
    }
  }
  return std::max(1, std::min(threads, trials));
}

template <class Fn>
void parallel_for(int count, int threads, const Fn& fn) {
  if (threads <= 1) {
    fn(0, count);
    return;
  }
  std::vector<std::thread> pool;
  const int chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int lo = t * chunk;
    const int hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (std::thread& worker : pool) worker.join();
}

using Clock = std::chrono::steady_clock;

struct MethodTimer {
  std::vector<double> total_ns;
  std::vector<long> calls;

  explicit MethodTimer(int n_methods) : total_ns(n_methods, 0.0), calls(n_methods, 0) {}

  void merge(const MethodTimer& other) {
    for (std::size_t i = 0; i < total_ns.size(); ++i) {
      total_ns[i] += other.total_ns[i];
      calls[i] += other.calls[i];
    }
  }
};

// Runs one solver, recording wall time and turning solver degeneracies
// into an excluded-trial marker (NaN).
template <class Fn>
double timed_sq_error(const Fn& solve, const Eigen::Vector3d& truth,
                      bool timing, MethodTimer& timer, int method) {
  const auto start = timing ? Clock::now() : Clock::time_point{};
  double sq = std::numeric_limits<double>::quiet_NaN();
  try {
    const Eigen::Vector3d estimate = solve();
    do_not_optimize(&estimate);
    sq = (estimate - truth).squaredNorm();
  } catch (const Error&) {
    // excluded trial
  }
  if (timing) {
    timer.total_ns[method] +=
        std::chrono::duration<double, std::nano>(Clock::now() - start).count();
    ++timer.calls[method];
  }
  return sq;
}

Observation noisy_projection(const Eigen::Vector3d& point, const View& view,
                             double sigma_px, Rng& rng) {
  const Observation clean = project(point, view);
  const double nx = rng.normal();
  const double ny = rng.normal();
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  if (sigma_px > 0.0) cov = sigma_px * sigma_px * Eigen::Matrix2d::Identity();
  return Observation(clean.pixel.x() + sigma_px * nx,
                     clean.pixel.y() + sigma_px * ny, cov);
}

bool all_noise_zero(const TwoViewConfig& c) {
  return c.sigma_px == 0.0 && c.sigma_phi_deg == 0.0 && c.sigma_c == 0.0;
}

struct StudyAccumulator {
  std::vector<std::vector<double>> sq_errors;  // [method][trial]
  MethodTimer timer;

  StudyAccumulator(int n_methods, int trials)
      : sq_errors(n_methods, std::vector<double>(
                                 trials, std::numeric_limits<double>::quiet_NaN())),
        timer(n_methods) {}
};

BenchReport reduce_report(const std::string& sweep_param, double sweep_value,
                          int trials, std::uint64_t seed,
                          const std::vector<std::string>& names,
                          int baseline_index, StudyAccumulator&& accum,
                          const RunOptions& options) {
  BenchReport report;
  report.sweep_param = sweep_param;
  report.sweep_value = sweep_value;
  report.trials = trials;
  report.seed = seed;
  const int n_methods = static_cast<int>(names.size());
  report.methods.resize(n_methods);
  for (int m = 0; m < n_methods; ++m) {
    MethodStats& stats = report.methods[m];
    stats.method = names[m];
    double sum = 0.0;
    int ok = 0;
    for (int t = 0; t < trials; ++t) {
      const double sq = accum.sq_errors[m][t];
      if (std::isnan(sq)) continue;
      sum += sq;
      ++ok;
    }
    stats.trials_ok = ok;
    stats.trials_excluded = trials - ok;
    stats.rmse = ok > 0 ? std::sqrt(sum / ok) : 0.0;
    if (options.timing && accum.timer.calls[m] > 0) {
      stats.mean_runtime_us =
          accum.timer.total_ns[m] / (1000.0 * accum.timer.calls[m]);
    }
  }
  // A baseline at round-off level means a noise-free study; deterioration
  // is undefined there and reported as 0.
  const double baseline_rmse = report.methods[baseline_index].rmse;
  for (MethodStats& stats : report.methods) {
    stats.deterioration_pct =
        baseline_rmse > 1e-12
            ? 100.0 * (stats.rmse - baseline_rmse) / baseline_rmse
            : 0.0;
  }
  if (options.keep_errors) {
    report.per_trial_sq_error = std::move(accum.sq_errors);
  }
  return report;
}

TwoViewConfig apply_two_view_sweep(TwoViewConfig config,
                                   const std::string& param, double value) {
  if (param == "none") return config;
  if (param == "sigma_px") {
    config.sigma_px = value;
  } else if (param == "pose_scale") {
    config.sigma_phi_deg *= value;
    config.sigma_c *= value;
  } else if (param == "z1") {
    config.z1 = value;
  } else if (param == "y1") {
    config.y1 = value;
  } else {
    throw InvalidInput("unknown two-view sweep parameter: " + param);
  }
  return config;
}

NViewConfig apply_n_view_sweep(NViewConfig config, const std::string& param,
                               double value) {
  if (param == "none") return config;
  if (param == "sigma_px") {
    config.sigma_px = value;
  } else if (param == "sigma_phi") {
    config.sigma_phi_deg = value;
  } else if (param == "sigma_c") {
    config.sigma_c = value;
  } else if (param == "depth_scale") {
    config.domain.z_min *= value;
    config.domain.z_max *= value;
  } else if (param == "m") {
    config.views = static_cast<int>(value);
  } else {
    throw InvalidInput("unknown n-view sweep parameter: " + param);
  }
  return config;
}

}  // namespace

const std::vector<std::string>& two_view_method_names() {
  static const std::vector<std::string> names = {
      "midpoint", "dlt", "lost", "lostu", "lostu_corrupt", "hs"};
  return names;
}

const std::vector<std::string>& n_view_method_names() {
  static const std::vector<std::string> names = {
      "midpoint",  "dlt",          "lost",           "lostu",
      "dlt_lostu", "dlt_refine2d", "dlt_refinefull"};
  return names;
}

Sweep default_sweep(const std::string& study, const std::string& param) {
  Sweep sweep;
  sweep.param = param;
  if (param == "none") {
    sweep.grid = {0.0};
    return sweep;
  }
  if (study == "two-view") {
    if (param == "sigma_px") {
      sweep.grid = {0.0, 0.5, 1.0, 2.0, 3.0};
    } else if (param == "pose_scale") {
      sweep.grid = {0.0, 0.5, 1.0, 2.0, 4.0};
    } else if (param == "z1") {
      sweep.grid = {-2.0, -3.0, -4.0, -6.0, -8.0, -10.0};
    } else if (param == "y1") {
      sweep.grid = {-2.0, -1.0, 0.0, 1.0, 1.9};
    } else {
      throw InvalidInput("unknown two-view sweep parameter: " + param);
    }
    return sweep;
  }
  if (study == "n-view") {
    if (param == "sigma_px") {
      sweep.grid = {0.5, 1.0, 2.0, 4.0};
    } else if (param == "sigma_phi") {
      sweep.grid = {0.01, 0.05, 0.2, 0.5};
    } else if (param == "sigma_c") {
      sweep.grid = {0.005, 0.02, 0.1, 0.5};
    } else if (param == "depth_scale") {
      sweep.grid = {0.5, 1.0, 2.0, 3.0};
    } else if (param == "m") {
      sweep.grid = {5, 10, 25, 50, 100, 200};
    } else {
      throw InvalidInput("unknown n-view sweep parameter: " + param);
    }
    return sweep;
  }
  throw InvalidInput("unknown study: " + study);
}

PoseUncertainty corrupt_covariances(const PoseUncertainty& uncertainty, Rng& rng) {
  PoseUncertainty corrupted = uncertainty;
  corrupted.rot_cov *= rng.uniform(0.5, 2.0);
  corrupted.center_cov *= rng.uniform(0.5, 2.0);
  return corrupted;
}

PointEstimate refine_iterated(const Track& track,
                              const std::vector<View>& views,
                              const Eigen::Vector3d& initial,
                              const NoiseSources& sources, int max_iters,
                              double tol) {
  PointEstimate estimate;
  estimate.position = initial;
  for (int iter = 0; iter < max_iters; ++iter) {
    const std::vector<Eigen::Matrix3d> weights =
        lostu_weights(track, views, sources, estimate.position);
    const PointEstimate next = triangulate_normal_weighted(track, views, weights);
    const double step = (next.position - estimate.position).norm();
    estimate = next;
    if (step <= tol * (1.0 + estimate.position.norm())) break;
  }
  return estimate;
}

std::vector<View> make_two_view_cameras(const TwoViewConfig& config) {
  const Eigen::Vector3d target = Eigen::Vector3d::Zero();
  const PoseUncertainty uncertainty = PoseUncertainty::isotropic(
      config.sigma_phi_deg * kDegToRad, config.sigma_c);
  std::vector<View> views(2);
  views[0].intrinsics = {config.focal, config.focal, 0.0, 0.0, 0.0};
  views[0].pose.center = Eigen::Vector3d(0.0, config.y1, config.z1);
  views[0].pose.rotation = look_at_rotation(views[0].pose.center, target);
  views[0].uncertainty = uncertainty;
  views[1].intrinsics = views[0].intrinsics;
  views[1].pose.center = Eigen::Vector3d(0.0, 2.0, -2.0);
  views[1].pose.rotation = look_at_rotation(views[1].pose.center, target);
  views[1].uncertainty = uncertainty;
  return views;
}

std::vector<View> make_n_view_cameras(const NViewConfig& config, Rng& rng) {
  std::vector<View> views(config.views);
  const double jitter_rad = config.pointing_jitter_deg * kDegToRad;
  for (View& view : views) {
    view.intrinsics = {config.focal, config.focal, 0.0, 0.0, 0.0};
    view.pose.center =
        Eigen::Vector3d(rng.uniform(config.domain.x_min, config.domain.x_max),
                        rng.uniform(config.domain.y_min, config.domain.y_max),
                        rng.uniform(config.domain.z_min, config.domain.z_max));
    Eigen::Vector3d jitter;
    for (int i = 0; i < 3; ++i) jitter[i] = jitter_rad * rng.normal();
    view.pose.rotation = exp_so3(jitter);  // nominal boresight is +z
    const double rot_scale = rng.uniform(config.scale_min, config.scale_max);
    const double center_scale = rng.uniform(config.scale_min, config.scale_max);
    view.uncertainty = PoseUncertainty::isotropic(
        config.sigma_phi_deg * kDegToRad, config.sigma_c);
    view.uncertainty.rot_cov *= rot_scale;
    view.uncertainty.center_cov *= center_scale;
  }
  return views;
}

std::vector<BenchReport> run_two_view_study(const TwoViewConfig& base_config,
                                            const Sweep& sweep,
                                            const RunOptions& options) {
  const std::vector<std::string>& names = two_view_method_names();
  const int baseline = 5;  // hs
  std::vector<BenchReport> reports;

  for (std::size_t grid_index = 0; grid_index < sweep.grid.size(); ++grid_index) {
    const TwoViewConfig config =
        apply_two_view_sweep(base_config, sweep.param, sweep.grid[grid_index]);
    const std::vector<View> nominal = make_two_view_cameras(config);
    const Eigen::Vector3d truth = Eigen::Vector3d::Zero();
    const bool noiseless = all_noise_zero(config);
    const int threads = resolve_threads(options, config.trials);

    StudyAccumulator accum(static_cast<int>(names.size()), config.trials);
    std::vector<MethodTimer> timers(threads, MethodTimer(names.size()));
    std::atomic<int> worker_index{0};

    parallel_for(config.trials, threads, [&](int lo, int hi) {
      MethodTimer& timer = timers[worker_index++];
      for (int trial = lo; trial < hi; ++trial) {
        Rng rng(config.seed, grid_index, static_cast<std::uint64_t>(trial));

        std::vector<View> believed(2);
        believed[0] = sample_noisy_view(nominal[0], rng);
        believed[1] = sample_noisy_view(nominal[1], rng);

        Track track;
        track.entries = {
            {0, noisy_projection(truth, nominal[0], config.sigma_px, rng)},
            {1, noisy_projection(truth, nominal[1], config.sigma_px, rng)}};

        std::vector<View> corrupted = believed;
        corrupted[0].uncertainty =
            corrupt_covariances(believed[0].uncertainty, rng);
        corrupted[1].uncertainty =
            corrupt_covariances(believed[1].uncertainty, rng);

        LostuOptions lostu_options;
        lostu_options.sources.intrinsics = false;
        if (options.diag_approx) lostu_options.pinv = PinvMode::Diagonal;

        accum.sq_errors[0][trial] = timed_sq_error(
            [&] { return triangulate_midpoint(track, believed).position; },
            truth, options.timing, timer, 0);
        accum.sq_errors[1][trial] = timed_sq_error(
            [&] { return triangulate_dlt(track, believed).position; }, truth,
            options.timing, timer, 1);
        const double lost_sigma = config.sigma_px > 0.0 ? config.sigma_px : 1.0;
        accum.sq_errors[2][trial] = timed_sq_error(
            [&] { return triangulate_lost(track, believed, lost_sigma).position; },
            truth, options.timing, timer, 2);
        accum.sq_errors[3][trial] = timed_sq_error(
            [&] {
              if (noiseless) return triangulate_dlt(track, believed).position;
              return triangulate_lostu(track, believed, lostu_options).position;
            },
            truth, options.timing, timer, 3);
        accum.sq_errors[4][trial] = timed_sq_error(
            [&] {
              if (noiseless) return triangulate_dlt(track, corrupted).position;
              return triangulate_lostu(track, corrupted, lostu_options).position;
            },
            truth, options.timing, timer, 4);
        accum.sq_errors[5][trial] = timed_sq_error(
            [&] { return triangulate_hs(track, believed).position; }, truth,
            options.timing, timer, 5);
      }
    });

    for (const MethodTimer& timer : timers) accum.timer.merge(timer);
    reports.push_back(reduce_report(sweep.param, sweep.grid[grid_index],
                                    config.trials, config.seed, names, baseline,
                                    std::move(accum), options));
  }
  return reports;
}

std::vector<BenchReport> run_n_view_study(const NViewConfig& base_config,
                                          const Sweep& sweep,
                                          const RunOptions& options) {
  const std::vector<std::string>& names = n_view_method_names();
  const int baseline = 5;  // dlt_refine2d
  std::vector<BenchReport> reports;

  for (std::size_t grid_index = 0; grid_index < sweep.grid.size(); ++grid_index) {
    const NViewConfig config =
        apply_n_view_sweep(base_config, sweep.param, sweep.grid[grid_index]);
    if (config.views < 2) throw InvalidInput("n-view study needs views >= 2");
    const Eigen::Vector3d truth = config.point;
    const bool noiseless = config.sigma_px == 0.0 &&
                           config.sigma_phi_deg == 0.0 && config.sigma_c == 0.0;
    const int threads = resolve_threads(options, config.trials);

    StudyAccumulator accum(static_cast<int>(names.size()), config.trials);
    std::vector<MethodTimer> timers(threads, MethodTimer(names.size()));
    std::atomic<int> worker_index{0};

    parallel_for(config.trials, threads, [&](int lo, int hi) {
      MethodTimer& timer = timers[worker_index++];
      for (int trial = lo; trial < hi; ++trial) {
        Rng rng(config.seed, grid_index, static_cast<std::uint64_t>(trial));

        const std::vector<View> nominal = make_n_view_cameras(config, rng);
        std::vector<View> believed(nominal.size());
        for (std::size_t v = 0; v < nominal.size(); ++v) {
          believed[v] = sample_noisy_view(nominal[v], rng);
        }
        Track track;
        track.entries.reserve(nominal.size());
        for (std::size_t v = 0; v < nominal.size(); ++v) {
          track.entries.push_back(
              {static_cast<int>(v),
               noisy_projection(truth, nominal[v], config.sigma_px, rng)});
        }

        LostuOptions lostu_options;
        lostu_options.sources.intrinsics = false;
        if (options.diag_approx) lostu_options.pinv = PinvMode::Diagonal;
        const double lost_sigma = config.sigma_px > 0.0 ? config.sigma_px : 1.0;

        accum.sq_errors[0][trial] = timed_sq_error(
            [&] { return triangulate_midpoint(track, believed).position; },
            truth, options.timing, timer, 0);
        accum.sq_errors[1][trial] = timed_sq_error(
            [&] { return triangulate_dlt(track, believed).position; }, truth,
            options.timing, timer, 1);
        accum.sq_errors[2][trial] = timed_sq_error(
            [&] { return triangulate_lost(track, believed, lost_sigma).position; },
            truth, options.timing, timer, 2);
        accum.sq_errors[3][trial] = timed_sq_error(
            [&] {
              if (noiseless) return triangulate_dlt(track, believed).position;
              return triangulate_lostu(track, believed, lostu_options).position;
            },
            truth, options.timing, timer, 3);
        accum.sq_errors[4][trial] = timed_sq_error(
            [&] {
              const PointEstimate dlt = triangulate_dlt(track, believed);
              if (noiseless) return dlt.position;
              LostuOptions seeded = lostu_options;
              seeded.prior_point = dlt.position;
              return triangulate_lostu(track, believed, seeded).position;
            },
            truth, options.timing, timer, 4);
        accum.sq_errors[5][trial] = timed_sq_error(
            [&] {
              const PointEstimate dlt = triangulate_dlt(track, believed);
              if (noiseless) return dlt.position;
              return refine_iterated(track, believed, dlt.position,
                                     NoiseSources::pixel_only())
                  .position;
            },
            truth, options.timing, timer, 5);
        accum.sq_errors[6][trial] = timed_sq_error(
            [&] {
              const PointEstimate dlt = triangulate_dlt(track, believed);
              if (noiseless) return dlt.position;
              NoiseSources sources;
              sources.intrinsics = false;
              return refine_iterated(track, believed, dlt.position, sources)
                  .position;
            },
            truth, options.timing, timer, 6);
      }
    });

    for (const MethodTimer& timer : timers) accum.timer.merge(timer);
    reports.push_back(reduce_report(sweep.param, sweep.grid[grid_index],
                                    config.trials, config.seed, names, baseline,
                                    std::move(accum), options));
  }
  return reports;
}

void write_bench_csv(std::ostream& out,
                     const std::vector<BenchReport>& reports) {
  out << "method,sweep_param,sweep_value,rmse,deterioration_pct,"
         "mean_runtime_us,trials_ok,trials_excluded,seed\n";
  for (const BenchReport& report : reports) {
    for (const MethodStats& stats : report.methods) {
      out << stats.method << ',' << report.sweep_param << ','
          << format_double(report.sweep_value) << ','
          << format_double(stats.rmse) << ','
          << format_double(stats.deterioration_pct) << ','
          << format_double(stats.mean_runtime_us) << ',' << stats.trials_ok
          << ',' << stats.trials_excluded << ',' << report.seed << '\n';
    }
  }
}

namespace {

json sweep_to_json(const Sweep& sweep, const RunOptions& options) {
  json j;
  j["param"] = sweep.param;
  j["grid"] = sweep.grid;
  j["threads"] = options.threads;
  j["timing"] = options.timing;
  j["diag_approx"] = options.diag_approx;
  return j;
}

}  // namespace

std::string config_echo_json(const TwoViewConfig& config, const Sweep& sweep,
                             const RunOptions& options) {
  json j;
  j["study"] = "two-view";
  j["config"] = {{"y1", config.y1},
                 {"z1", config.z1},
                 {"focal", config.focal},
                 {"sigma_px", config.sigma_px},
                 {"sigma_phi_deg", config.sigma_phi_deg},
                 {"sigma_c", config.sigma_c},
                 {"trials", config.trials},
                 {"seed", config.seed}};
  j["sweep"] = sweep_to_json(sweep, options);
  return j.dump(2) + "\n";
}

std::string config_echo_json(const NViewConfig& config, const Sweep& sweep,
                             const RunOptions& options) {
  json j;
  j["study"] = "n-view";
  j["config"] = {{"point", {config.point.x(), config.point.y(), config.point.z()}},
                 {"views", config.views},
                 {"domain",
                  {{"x_min", config.domain.x_min},
                   {"x_max", config.domain.x_max},
                   {"y_min", config.domain.y_min},
                   {"y_max", config.domain.y_max},
                   {"z_min", config.domain.z_min},
                   {"z_max", config.domain.z_max}}},
                 {"pointing_jitter_deg", config.pointing_jitter_deg},
                 {"focal", config.focal},
                 {"sigma_px", config.sigma_px},
                 {"sigma_phi_deg", config.sigma_phi_deg},
                 {"sigma_c", config.sigma_c},
                 {"scale_min", config.scale_min},
                 {"scale_max", config.scale_max},
                 {"trials", config.trials},
                 {"seed", config.seed}};
  j["sweep"] = sweep_to_json(sweep, options);
  return j.dump(2) + "\n";
}

namespace {

void require_config_keys(const json& object,
                         std::initializer_list<const char*> allowed) {
  if (!object.is_object()) throw SchemaError("config must be a JSON object");
  for (const auto& item : object.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) {
      throw SchemaError("unknown config field '" + item.key() + "'");
    }
  }
}

std::optional<std::vector<double>> parse_grid(const json& object) {
  if (!object.contains("grid")) return std::nullopt;
  if (!object["grid"].is_array() || object["grid"].empty()) {
    throw SchemaError("grid must be a non-empty array of numbers");
  }
  std::vector<double> grid;
  for (const json& v : object["grid"]) {
    if (!v.is_number()) throw SchemaError("grid must contain numbers");
    grid.push_back(v.get<double>());
  }
  return grid;
}

}  // namespace

TwoViewSpec parse_two_view_spec(const std::string& json_text) {
  json object = json::parse(json_text, nullptr, false);
  if (object.is_discarded()) throw SchemaError("config is not valid JSON");
  require_config_keys(object, {"y1", "z1", "focal", "sigma_px", "sigma_phi_deg",
                               "sigma_c", "trials", "seed", "grid"});
  TwoViewSpec spec;
  TwoViewConfig& c = spec.config;
  if (object.contains("y1")) c.y1 = object["y1"].get<double>();
  if (object.contains("z1")) c.z1 = object["z1"].get<double>();
  if (object.contains("focal")) c.focal = object["focal"].get<double>();
  if (object.contains("sigma_px")) c.sigma_px = object["sigma_px"].get<double>();
  if (object.contains("sigma_phi_deg")) {
    c.sigma_phi_deg = object["sigma_phi_deg"].get<double>();
  }
  if (object.contains("sigma_c")) c.sigma_c = object["sigma_c"].get<double>();
  if (object.contains("trials")) c.trials = object["trials"].get<int>();
  if (object.contains("seed")) c.seed = object["seed"].get<std::uint64_t>();
  if (c.trials < 1) throw SchemaError("trials must be >= 1");
  if (c.sigma_px < 0 || c.sigma_phi_deg < 0 || c.sigma_c < 0) {
    throw SchemaError("noise levels must be non-negative");
  }
  spec.grid = parse_grid(object);
  return spec;
}

NViewSpec parse_n_view_spec(const std::string& json_text) {
  json object = json::parse(json_text, nullptr, false);
  if (object.is_discarded()) throw SchemaError("config is not valid JSON");
  require_config_keys(object,
                      {"point", "views", "domain", "pointing_jitter_deg",
                       "focal", "sigma_px", "sigma_phi_deg", "sigma_c",
                       "scale_min", "scale_max", "trials", "seed", "grid"});
  NViewSpec spec;
  NViewConfig& c = spec.config;
  if (object.contains("point")) {
    const json& p = object["point"];
    if (!p.is_array() || p.size() != 3) {
      throw SchemaError("point must be an array of 3 numbers");
    }
    c.point = Eigen::Vector3d(p[0].get<double>(), p[1].get<double>(),
                              p[2].get<double>());
  }
  if (object.contains("views")) c.views = object["views"].get<int>();
  if (object.contains("domain")) {
    const json& d = object["domain"];
    require_config_keys(d, {"x_min", "x_max", "y_min", "y_max", "z_min", "z_max"});
    if (d.contains("x_min")) c.domain.x_min = d["x_min"].get<double>();
    if (d.contains("x_max")) c.domain.x_max = d["x_max"].get<double>();
    if (d.contains("y_min")) c.domain.y_min = d["y_min"].get<double>();
    if (d.contains("y_max")) c.domain.y_max = d["y_max"].get<double>();
    if (d.contains("z_min")) c.domain.z_min = d["z_min"].get<double>();
    if (d.contains("z_max")) c.domain.z_max = d["z_max"].get<double>();
  }
  if (object.contains("pointing_jitter_deg")) {
    c.pointing_jitter_deg = object["pointing_jitter_deg"].get<double>();
  }
  if (object.contains("focal")) c.focal = object["focal"].get<double>();
  if (object.contains("sigma_px")) c.sigma_px = object["sigma_px"].get<double>();
  if (object.contains("sigma_phi_deg")) {
    c.sigma_phi_deg = object["sigma_phi_deg"].get<double>();
  }
  if (object.contains("sigma_c")) c.sigma_c = object["sigma_c"].get<double>();
  if (object.contains("scale_min")) c.scale_min = object["scale_min"].get<double>();
  if (object.contains("scale_max")) c.scale_max = object["scale_max"].get<double>();
  if (object.contains("trials")) c.trials = object["trials"].get<int>();
  if (object.contains("seed")) c.seed = object["seed"].get<std::uint64_t>();
  if (c.views < 2) throw SchemaError("views must be >= 2");
  if (c.trials < 1) throw SchemaError("trials must be >= 1");
  if (c.domain.x_min > c.domain.x_max || c.domain.y_min > c.domain.y_max ||
      c.domain.z_min > c.domain.z_max) {
    throw SchemaError("domain box is empty");
  }
  spec.grid = parse_grid(object);
  return spec;
}

}  // namespace lostu::bench
