#pragma once

#include <Eigen/Core>

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lostu/geometry.hpp"
#include "lostu/rng.hpp"
#include "lostu/triangulation.hpp"

namespace lostu::bench {

/// Two cameras observing a point at the origin: camera 1 at (0, y1, z1),
/// camera 2 at (0, 2, -2), both pointed at the point. Per-trial noise is
/// pixel noise plus pose noise on center and attitude.
struct TwoViewConfig {
  double y1 = -2.0;
  double z1 = -6.0;
  double focal = 400.0;
  double sigma_px = 1.0;
  double sigma_phi_deg = 0.5;
  double sigma_c = 0.03;
  int trials = 5000;
  std::uint64_t seed = 0;
};

struct DomainBox {
  double x_min = -10.0, x_max = 10.0;
  double y_min = -10.0, y_max = 10.0;
  double z_min = -50.0, z_max = -10.0;
};

/// A single point observed by m cameras spawned uniformly in a box, each
/// looking roughly along +z with Gaussian pointing jitter. Per-camera pose
/// uncertainties are randomly rescaled within [scale_min, scale_max] so no
/// two cameras share the same covariance.
struct NViewConfig {
  Eigen::Vector3d point{2.0, 1.0, 0.0};
  int views = 50;
  DomainBox domain;
  double pointing_jitter_deg = 2.0;
  double focal = 800.0;
  double sigma_px = 1.0;
  double sigma_phi_deg = 0.05;
  double sigma_c = 0.02;
  double scale_min = 0.5;
  double scale_max = 2.0;
  int trials = 5000;
  std::uint64_t seed = 0;
};

struct Sweep {
  std::string param = "none";
  std::vector<double> grid = {0.0};
};

/// Built-in grid for a sweep parameter of the given study
/// ("two-view" or "n-view"). Throws InvalidInput for unknown parameters.
Sweep default_sweep(const std::string& study, const std::string& param);

struct MethodStats {
  std::string method;
  double rmse = 0.0;
  double deterioration_pct = 0.0;  // 0 for the baseline by definition
  double mean_runtime_us = 0.0;
  int trials_ok = 0;
  int trials_excluded = 0;
};

struct BenchReport {
  std::string sweep_param = "none";
  double sweep_value = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<MethodStats> methods;
  /// Per-method squared errors per trial (NaN where excluded); filled only
  /// when RunOptions::keep_errors is set.
  std::vector<std::vector<double>> per_trial_sq_error;
};

struct RunOptions {
  /// Trial-parallelism cap; 0 means the TRI_BENCH_THREADS environment
  /// variable, or the machine default when that is unset.
  int threads = 0;
  /// When false, per-method runtimes are not measured and the runtime
  /// column is written as 0, making reports byte-reproducible.
  bool timing = true;
  bool keep_errors = false;
  /// Feed the uncertainty-aware solver a diagonal approximation of the
  /// residual covariance.
  bool diag_approx = false;
};

/// Method order of two-view reports; "hs" is the deterioration baseline.
const std::vector<std::string>& two_view_method_names();
/// Method order of n-view reports; "dlt_refine2d" is the baseline.
const std::vector<std::string>& n_view_method_names();

std::vector<BenchReport> run_two_view_study(const TwoViewConfig& config,
                                            const Sweep& sweep,
                                            const RunOptions& options = {});

std::vector<BenchReport> run_n_view_study(const NViewConfig& config,
                                          const Sweep& sweep,
                                          const RunOptions& options = {});

/// Independently rescale each pose covariance block by a uniform draw in
/// [1/2, 2] (the robustness model for deliberately wrong covariances).
PoseUncertainty corrupt_covariances(const PoseUncertainty& uncertainty,
                                    Rng& rng);

/// Iterated reweighted refinement of the Mahalanobis residual cost,
/// re-evaluating the residual covariances at the current point until the
/// update stalls. Used as the converged-minimizer baseline the closed-form
/// solvers are compared against; the solvers themselves never iterate.
PointEstimate refine_iterated(const Track& track,
                              const std::vector<View>& views,
                              const Eigen::Vector3d& initial,
                              const NoiseSources& sources, int max_iters = 25,
                              double tol = 1e-12);

/// The nominal (noise-free) cameras of a two-view configuration.
std::vector<View> make_two_view_cameras(const TwoViewConfig& config);

/// One random draw of n-view cameras (positions, pointing, per-camera
/// uncertainty scales).
std::vector<View> make_n_view_cameras(const NViewConfig& config, Rng& rng);

/// Compiler barrier so benchmarked results cannot be optimized away.
inline void do_not_optimize(const void* p) {
  asm volatile("" : : "g"(p) : "memory");
}

/// Mean wall-clock microseconds per call over `iterations` calls after
/// `warmup` discarded calls.
template <class F>
double measure_runtime_us(F&& fn, int warmup = 100, int iterations = 10000) {
  for (int i = 0; i < warmup; ++i) fn();
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < iterations; ++i) fn();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::micro>(stop - start).count() /
         iterations;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchReport>& reports);

std::string config_echo_json(const TwoViewConfig& config, const Sweep& sweep,
                             const RunOptions& options);
std::string config_echo_json(const NViewConfig& config, const Sweep& sweep,
                             const RunOptions& options);

/// Strict-schema JSON overrides for the CLI: any config field may appear,
/// plus an optional "grid" array overriding the sweep grid.
struct TwoViewSpec {
  TwoViewConfig config;
  std::optional<std::vector<double>> grid;
};
struct NViewSpec {
  NViewConfig config;
  std::optional<std::vector<double>> grid;
};
TwoViewSpec parse_two_view_spec(const std::string& json_text);
NViewSpec parse_n_view_spec(const std::string& json_text);

}  // namespace lostu::bench
