// Command-line front end: scene-file triangulation and the synthetic
// Monte-Carlo benchmark studies. Exit codes: 0 success, 2 usage or schema
// error, 3 when every track in a triangulation run was degenerate.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "lostu/bench.hpp"
#include "lostu/errors.hpp"
#include "lostu/resection.hpp"
#include "lostu/scene_io.hpp"
#include "lostu/triangulation.hpp"

namespace {

using namespace lostu;

constexpr int kExitOk = 0;
constexpr int kExitSchema = 2;
constexpr int kExitAllDegenerate = 3;

std::optional<Method> parse_method(const std::string& name) {
  if (name == "midpoint") return Method::Midpoint;
  if (name == "dlt") return Method::DLT;
  if (name == "lost") return Method::LOST;
  if (name == "lostu") return Method::LOSTU;
  if (name == "hs") return Method::HS;
  return std::nullopt;
}

std::vector<double> pixel_sigmas(const Track& track) {
  std::vector<double> sigmas;
  bool all_zero = true;
  for (const TrackEntry& entry : track.entries) {
    const double var =
        0.5 * (entry.obs.cov2d(0, 0) + entry.obs.cov2d(1, 1));
    sigmas.push_back(std::sqrt(var));
    all_zero = all_zero && var == 0.0;
  }
  if (all_zero) {
    // No 2D noise information: constant weights, same argmin as the DLT.
    sigmas.assign(track.entries.size(), 1.0);
  }
  return sigmas;
}

PointEstimate solve_track(const Track& track, const Scene& scene,
                          Method method, bool diag_approx) {
  switch (method) {
    case Method::Midpoint:
      return triangulate_midpoint(track, scene.views);
    case Method::DLT:
      return triangulate_dlt(track, scene.views);
    case Method::LOST:
      return triangulate_lost(track, scene.views, pixel_sigmas(track));
    case Method::LOSTU: {
      LostuOptions options;
      if (diag_approx) options.pinv = PinvMode::Diagonal;
      return triangulate_lostu(track, scene.views, options);
    }
    case Method::HS:
      return triangulate_hs(track, scene.views);
  }
  throw InvalidInput("unreachable method");
}

int run_triangulate(const std::string& scene_path, const std::string& method_name,
                    const std::string& out_path, bool diag_approx) {
  const auto method = parse_method(method_name);
  if (!method) {
    std::cerr << "unknown method: " << method_name << "\n";
    return kExitSchema;
  }

  Scene scene;
  try {
    scene = to_scene(load_scene_file(scene_path));
  } catch (const SchemaError& error) {
    std::cerr << "scene error: " << error.what() << "\n";
    return kExitSchema;
  }

  std::vector<TriangulationRow> rows;
  for (const Track& track : scene.tracks) {
    try {
      PointEstimate estimate = solve_track(track, scene, *method, diag_approx);
      if (estimate.covariance.isZero(0.0)) {
        try {
          estimate.covariance = point_covariance(track, scene.views,
                                                 estimate.position, {});
        } catch (const AllSourcesZero&) {
          // scene carries no uncertainty model; leave the zeros
        }
      }
      rows.push_back({track.point_id, estimate});
    } catch (const Error& error) {
      std::cerr << "track " << track.point_id << ": " << error.what() << "\n";
    }
  }

  if (rows.empty() && !scene.tracks.empty()) {
    std::cerr << "no track could be triangulated\n";
    return kExitAllDegenerate;
  }

  if (out_path.empty()) {
    write_triangulation_csv(std::cout, rows);
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return kExitSchema;
    }
    write_triangulation_csv(out, rows);
  }
  return kExitOk;
}

std::string echo_path(const std::string& csv_path) {
  if (csv_path.size() > 4 && csv_path.substr(csv_path.size() - 4) == ".csv") {
    return csv_path.substr(0, csv_path.size() - 4) + ".json";
  }
  return csv_path + ".json";
}

struct BenchCli {
  std::string config_path;
  std::string sweep_param = "none";
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  int threads = 0;
  bool no_timing = false;
  bool diag_approx = false;
};

int run_bench(const std::string& study, const BenchCli& cli) {
  std::string config_text = "{}";
  if (!cli.config_path.empty()) {
    std::ifstream in(cli.config_path);
    if (!in) {
      std::cerr << "cannot open config: " << cli.config_path << "\n";
      return kExitSchema;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    config_text = buffer.str();
  }

  bench::RunOptions options;
  options.threads = cli.threads;
  options.timing = !cli.no_timing;
  options.diag_approx = cli.diag_approx;

  std::vector<bench::BenchReport> reports;
  std::string echo;
  try {
    bench::Sweep sweep = bench::default_sweep(study, cli.sweep_param);
    if (study == "two-view") {
      bench::TwoViewSpec spec = bench::parse_two_view_spec(config_text);
      if (cli.seed) spec.config.seed = *cli.seed;
      if (cli.trials) spec.config.trials = *cli.trials;
      if (spec.grid && cli.sweep_param != "none") sweep.grid = *spec.grid;
      reports = bench::run_two_view_study(spec.config, sweep, options);
      echo = bench::config_echo_json(spec.config, sweep, options);
    } else {
      bench::NViewSpec spec = bench::parse_n_view_spec(config_text);
      if (cli.seed) spec.config.seed = *cli.seed;
      if (cli.trials) spec.config.trials = *cli.trials;
      if (spec.grid && cli.sweep_param != "none") sweep.grid = *spec.grid;
      reports = bench::run_n_view_study(spec.config, sweep, options);
      echo = bench::config_echo_json(spec.config, sweep, options);
    }
  } catch (const SchemaError& error) {
    std::cerr << "config error: " << error.what() << "\n";
    return kExitSchema;
  } catch (const InvalidInput& error) {
    std::cerr << "error: " << error.what() << "\n";
    return kExitSchema;
  }

  if (cli.out_path.empty()) {
    bench::write_bench_csv(std::cout, reports);
  } else {
    std::ofstream out(cli.out_path);
    if (!out) {
      std::cerr << "cannot write " << cli.out_path << "\n";
      return kExitSchema;
    }
    bench::write_bench_csv(out, reports);
    std::ofstream echo_out(echo_path(cli.out_path));
    echo_out << echo;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uncertainty-aware multi-view triangulation toolkit"};
  app.require_subcommand(1);

  // triangulate
  auto* triangulate = app.add_subcommand(
      "triangulate", "Triangulate every track of a scene file");
  std::string scene_path, method_name, tri_out;
  bool tri_diag = false;
  triangulate->add_option("--scene", scene_path, "Scene JSON file")->required();
  triangulate->add_option("--method", method_name,
                          "midpoint|dlt|lost|lostu|hs")->required();
  triangulate->add_option("--out", tri_out, "Output CSV (default stdout)");
  triangulate->add_flag("--diag-approx", tri_diag,
                        "Diagonal residual-covariance approximation (lostu)");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Run a Monte-Carlo study");
  bench_cmd->require_subcommand(1);
  BenchCli two_cli, n_cli;
  auto add_bench_options = [](CLI::App* cmd, BenchCli& cli) {
    cmd->add_option("--config", cli.config_path, "Config JSON file");
    cmd->add_option("--sweep", cli.sweep_param, "Sweep parameter");
    cmd->add_option("--seed", cli.seed, "Override the RNG seed");
    cmd->add_option("--trials", cli.trials, "Override the trial count");
    cmd->add_option("--out", cli.out_path,
                    "Output CSV (a config echo .json is written next to it)");
    cmd->add_option("--threads", cli.threads,
                    "Trial-parallelism cap (default: TRI_BENCH_THREADS or all cores)");
    cmd->add_flag("--no-timing", cli.no_timing,
                  "Skip runtime measurement; output is byte-reproducible");
    cmd->add_flag("--diag-approx", cli.diag_approx,
                  "Diagonal residual-covariance approximation for lostu");
  };
  auto* two_view = bench_cmd->add_subcommand("two-view", "Two-camera study");
  add_bench_options(two_view, two_cli);
  auto* n_view = bench_cmd->add_subcommand("n-view", "Many-camera study");
  add_bench_options(n_view, n_cli);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitSchema;
  }

  if (triangulate->parsed()) {
    return run_triangulate(scene_path, method_name, tri_out, tri_diag);
  }
  if (two_view->parsed()) {
    return run_bench("two-view", two_cli);
  }
  return run_bench("n-view", n_cli);
}
