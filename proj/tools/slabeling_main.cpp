// Command-line front end: generate synthetic clouds, run the stratification
// algorithm, evaluate detections against ground truth, and fit empirical
// convergence slopes.

#include "slabeling/core.hpp"
#include "slabeling/io.hpp"
#include "slabeling/metrics.hpp"
#include "slabeling/params.hpp"
#include "slabeling/samplers.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

namespace {

using namespace slabeling;
namespace fs = std::filesystem;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

ScheduleOverrides overrides_from_json(const io::Json& j) {
  ScheduleOverrides ov;
  if (j.contains("d_max")) ov.d_max = j.at("d_max").get<int>();
  auto load_map = [&](const char* key, std::map<int, double>& target) {
    if (!j.contains(key)) return;
    for (const auto& [dim, value] : j.at(key).items())
      target[std::stoi(dim)] = value.get<double>();
  };
  load_map("h_par", ov.h_par);
  load_map("h_perp", ov.h_perp);
  load_map("r", ov.r);
  load_map("delta", ov.delta);
  load_map("kappa", ov.kappa);
  if (j.contains("n_min"))
    for (const auto& [dim, value] : j.at("n_min").items())
      ov.n_min[std::stoi(dim)] = value.get<int>();
  return ov;
}

Scene scene_from_config(const io::Json& cfg) {
  const auto& scene_cfg = cfg.at("scene");
  if (scene_cfg.is_string()) return scene_preset(scene_cfg.get<std::string>());
  Scene scene;
  scene.name = scene_cfg.value("name", "inline");
  for (const io::Json& s : scene_cfg.at("specs")) scene.specs.push_back(io::spec_from_json(s));
  scene.weights = scene_cfg.at("weights").get<std::vector<double>>();
  return scene;
}

std::string cloud_stem(long n, std::uint64_t seed) {
  return "cloud_n" + std::to_string(n) + "_seed" + std::to_string(seed);
}

int cmd_generate(const std::string& config_path, const std::string& output_dir,
                 const std::string& preset, long n_flag, std::uint64_t seed_flag) {
  io::Json cfg;
  if (!config_path.empty()) {
    cfg = io::read_json_file(config_path);
  } else {
    if (preset.empty())
      throw std::invalid_argument("generate needs --config or --preset");
    cfg["scene"] = preset;
    cfg["n_grid"] = {n_flag};
    cfg["seeds"] = {seed_flag};
  }
  const Scene scene = scene_from_config(cfg);
  const auto n_grid = cfg.at("n_grid").get<std::vector<long>>();
  const auto seeds = cfg.at("seeds").get<std::vector<std::uint64_t>>();
  if (seeds.empty() || n_grid.empty())
    throw std::invalid_argument("generate: n_grid and seeds must be nonempty");
  for (size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] <= n_grid[i - 1])
      throw std::invalid_argument("generate: n_grid must be ascending");

  std::string dir = output_dir.empty() ? cfg.value("output_dir", ".") : output_dir;
  fs::create_directories(dir);

  for (long n : n_grid) {
    if (!scene.deterministic && !scene.specs.empty()) {
      const ScheduleOverrides ov =
          cfg.contains("schedule") ? overrides_from_json(cfg.at("schedule")) : ScheduleOverrides{};
      const int ambient = scene.specs.front().ambient;
      io::write_schedule(dir + "/schedule_n" + std::to_string(n) + ".json",
                         practical_schedule(n, ambient, ov));
    }
    for (std::uint64_t seed : seeds) {
      const PointCloud cloud = generate_scene(scene, n, seed);
      const std::string stem = dir + "/" + cloud_stem(n, seed);
      io::write_cloud_csv(stem + ".csv", cloud);
      io::write_sidecar_json(stem + ".json", cloud);
      std::printf("wrote %s.csv (%ld points)\n", stem.c_str(), cloud.size());
    }
  }
  return 0;
}

int cmd_run(const std::string& cloud_path, const std::string& schedule_path,
            const std::string& output, int threads, long cap) {
  PointCloud cloud = io::read_cloud_csv(cloud_path);
  if (cloud.size() == 0) throw std::invalid_argument(cloud_path + ": empty cloud");
  const std::string sidecar = fs::path(cloud_path).replace_extension(".json").string();
  if (fs::exists(sidecar)) io::read_sidecar_json(sidecar, cloud);

  ParamSchedule sched;
  if (!schedule_path.empty()) {
    sched = io::read_schedule(schedule_path);
  } else {
    sched = practical_schedule(cloud.size(), cloud.ambient_dim());
  }

  RunOptions options;
  options.threads = threads;
  options.max_tuples_per_anchor = cap;
  options.cloud_seed = cloud.seed;
  const StratificationResult result = run(cloud.points, sched, options);

  const std::string out = output.empty() ? "result.json" : output;
  io::write_result(out, result);
  std::printf("k_hat=%d dims=[", result.k_hat);
  for (size_t i = 0; i < result.layers.size(); ++i)
    std::printf("%s%d", i ? "," : "", result.layers[i].dim);
  std::printf("] residual=%zu wall_ms=%.1f -> %s\n", result.residual.size(),
              result.metadata.wall_ms, out.c_str());
  return 0;
}

double resolve_scale(const io::Json& entry, double h, double kappa, double fallback_factor) {
  if (entry.is_object() && entry.value("mode", "") == std::string("absolute"))
    return entry.at("value").get<double>();
  const double factor =
      entry.is_object() ? entry.value("factor", fallback_factor) : fallback_factor;
  return factor * kappa * h * h;
}

int cmd_evaluate(const std::string& result_path, const std::string& cloud_path,
                 const std::string& config_path, const std::string& output,
                 const std::string& csv_path, int threads) {
  const StratificationResult result = io::read_result(result_path);
  PointCloud truth = io::read_cloud_csv(cloud_path);
  const std::string sidecar = fs::path(cloud_path).replace_extension(".json").string();
  if (!fs::exists(sidecar))
    throw io::DataError("evaluate: missing truth sidecar " + sidecar);
  io::read_sidecar_json(sidecar, truth);
  if (truth.labels.empty()) throw MissingLabels("evaluate: truth labels required");
  if (truth.specs.empty()) throw MissingLabels("evaluate: truth specs required");

  io::Json cfg = io::Json::object();
  if (!config_path.empty()) cfg = io::read_json_file(config_path);
  const io::Json res_cfg = cfg.value("resolution", io::Json::object());
  const io::Json delta_cfg = cfg.value("delta", io::Json::object());

  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> cluster_errs = clustering_error(result, truth);

  std::vector<LayerEvaluation> evals;
  std::vector<EvalRecord> records;
  for (size_t k = 0; k < truth.specs.size(); ++k) {
    const ManifoldSpec& spec = truth.specs[k];
    LayerEvaluation ev;
    ev.layer = static_cast<int>(k) + 1;
    ev.dim = spec.dim;
    ev.clustering_err = cluster_errs[k];

    const LayerDetection* matched = nullptr;
    for (const LayerDetection& layer : result.layers)
      if (layer.dim == spec.dim) matched = &layer;
    ev.dims_correct = matched != nullptr;

    const int sd = std::min(spec.dim, result.params_used.d_max);
    const DimParams& dp = result.params_used.at(sd);
    ev.resolution = resolve_scale(res_cfg, dp.h_par, dp.kappa, 0.05);
    ev.delta_used = resolve_scale(delta_cfg, dp.h_par, dp.kappa, 3.0);

    if (matched) {
      const HullComplex complex(truth.points, *matched);
      ev.hausdorff_error = hausdorff_layer_error(spec, complex, ev.resolution, threads);
      const double net_res = cfg.value("tangent_net_factor", 0.5) * ev.delta_used;
      const double spacing = cfg.value("tangent_sample_factor", 0.5) * ev.delta_used;
      ev.tangent_err = tangent_error(spec, complex, ev.delta_used, net_res, spacing, threads);
    }
    evals.push_back(ev);

    EvalRecord row;
    row.n = truth.size();
    row.seed = truth.seed;
    row.layer = ev.layer;
    row.dim = ev.dim;
    row.hausdorff_error = ev.hausdorff_error;
    row.clustering_err = ev.clustering_err;
    row.tangent_err = ev.tangent_err;
    row.delta = ev.delta_used;
    row.resolution = ev.resolution;
    row.wall_ms = result.metadata.wall_ms;
    records.push_back(row);
  }

  io::Json report;
  report["n"] = truth.size();
  report["seed"] = truth.seed;
  report["k_hat"] = result.k_hat;
  report["dims"] = result.dims();
  io::Json layers = io::Json::array();
  for (const LayerEvaluation& ev : evals) {
    io::Json lj;
    lj["layer"] = ev.layer;
    lj["dim"] = ev.dim;
    lj["dims_correct"] = ev.dims_correct;
    lj["hausdorff"] = ev.hausdorff_error;
    lj["clustering"] = ev.clustering_err;
    lj["tangent"] = ev.tangent_err;
    lj["delta"] = ev.delta_used;
    lj["resolution"] = ev.resolution;
    layers.push_back(std::move(lj));
  }
  report["layers"] = std::move(layers);

  if (cfg.contains("tau")) {
    std::vector<double> thresholds;
    for (size_t k = 0; k < truth.specs.size(); ++k) {
      const int sd = std::min(truth.specs[k].dim, result.params_used.d_max);
      const DimParams& dp = result.params_used.at(sd);
      thresholds.push_back(resolve_scale(cfg.at("tau"), dp.h_par, dp.kappa, 10.0));
    }
    report["dimension_check_fraction"] = dimension_label_check(result, truth, thresholds);
  }
  report["eval_wall_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  if (!output.empty()) io::write_json_file(output, report);
  if (!csv_path.empty()) io::append_eval_csv(csv_path, records);
  std::cout << report.dump(1) << "\n";
  return 0;
}

int cmd_rates(const std::string& csv_path, const std::string& output) {
  const auto records = io::read_eval_csv(csv_path);
  const auto fits = fit_rate_slopes(records);
  std::printf("%-6s %-12s %-10s %-10s %s\n", "dim", "loss", "slope", "stderr", "points");
  for (const RateFit& f : fits)
    std::printf("%-6d %-12s %-10.4f %-10.4f %d\n", f.dim, f.loss.c_str(), f.slope, f.stderr_,
                f.n_points);
  if (!output.empty()) io::write_json_file(output, io::rate_fits_to_json(fits));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stratified manifold mixture learning via slab co-detection"};
  app.require_subcommand(1);

  std::string config, output, preset, cloud_path, schedule_path, result_path, csv_path;
  long n_flag = 1000;
  std::uint64_t seed_flag = 0;
  int threads = 0;
  long cap = -1;

  auto* generate = app.add_subcommand("generate", "Sample scene clouds to CSV + JSON sidecars");
  generate->add_option("--config", config, "experiment config JSON");
  generate->add_option("--output", output, "output directory");
  generate->add_option("--preset", preset, "scene preset name");
  generate->add_option("--n", n_flag, "cloud size for --preset mode");
  generate->add_option("--seed", seed_flag, "seed for --preset mode");

  auto* run_cmd = app.add_subcommand("run", "Run the stratification on a cloud");
  run_cmd->add_option("--cloud", cloud_path, "cloud CSV")->required();
  run_cmd->add_option("--schedule", schedule_path, "schedule JSON (default: practical)");
  run_cmd->add_option("--output", output, "result JSON path");
  run_cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
  run_cmd->add_option("--cap", cap, "max accepted tuples per anchor (-1 = unlimited)");

  auto* evaluate = app.add_subcommand("evaluate", "Score a result against ground truth");
  evaluate->add_option("--result", result_path, "result JSON")->required();
  evaluate->add_option("--cloud", cloud_path, "truth cloud CSV (sidecar JSON required)")
      ->required();
  evaluate->add_option("--config", config, "evaluation config JSON");
  evaluate->add_option("--output", output, "report JSON path");
  evaluate->add_option("--csv", csv_path, "evaluation CSV to append to");
  evaluate->add_option("--threads", threads, "worker threads (0 = hardware)");

  auto* rates = app.add_subcommand("rates", "Fit convergence slopes from an evaluation CSV");
  rates->add_option("--csv", csv_path, "evaluation CSV")->required();
  rates->add_option("--output", output, "rate table JSON path");

  try {
    app.parse(argc, argv);
    if (generate->parsed()) return cmd_generate(config, output, preset, n_flag, seed_flag);
    if (run_cmd->parsed()) return cmd_run(cloud_path, schedule_path, output, threads, cap);
    if (evaluate->parsed())
      return cmd_evaluate(result_path, cloud_path, config, output, csv_path, threads);
    if (rates->parsed()) return cmd_rates(csv_path, output);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  } catch (const io::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kExitData;
  } catch (const InsufficientData& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kExitData;
  } catch (const MissingLabels& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::logic_error& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternal;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
}
