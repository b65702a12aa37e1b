// Command-line front end: run-episode, run-suite, gen-scenarios, inspect-map.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <thread>

#include "CLI11.hpp"
#include "avs/bench.hpp"
#include "avs/error.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int cmd_run_episode(const fs::path& config, const fs::path& out) {
  const auto cfg = avs::episode_config_from_json(avs::read_json_file(config), config.parent_path());
  const auto inputs = avs::load_inputs(cfg);
  const auto res = avs::run_episode(cfg, inputs);
  const auto j = avs::episode_to_json(res);
  if (!out.empty()) {
    fs::create_directories(out);
    std::ofstream(out / "episode.json") << j.dump(2) << '\n';
    avs::save_score_map(res.final_lambda, out / "lambda_final.csv");
  }
  std::cout << "episode " << res.id << ": found " << res.targets_found << "/" << res.targets_total
            << " in " << res.trajectory.size() - 1 << " steps";
  if (res.steps_to_first) std::cout << ", first target at step " << *res.steps_to_first;
  std::cout << ", TTA events " << res.tta_event_steps.size() << '\n';
  for (const auto& [f, v] : res.rmse_at) {
    std::cout << "  rmse@" << f << " = " << std::fixed << std::setprecision(2) << 100.0 * v << '\n';
  }
  return kExitOk;
}

int cmd_run_suite(const fs::path& suite_path, const fs::path& out, int jobs) {
  const auto suite = avs::suite_config_from_json(avs::read_json_file(suite_path), suite_path.parent_path());
  const auto report = avs::run_suite(suite, jobs);
  avs::write_suite_outputs(report, out);
  std::cout << avs::report_to_text(report);
  return kExitOk;
}

int cmd_gen_scenarios(const fs::path& params_path, int count, const fs::path& out) {
  if (count < 1) throw avs::ConfigError("--count must be >= 1");
  const auto base = avs::params_from_json(avs::read_json_file(params_path));
  fs::create_directories(out);
  for (int i = 0; i < count; ++i) {
    auto params = base;
    params.seed = base.seed + static_cast<std::uint64_t>(i);
    const auto s = avs::synth_scenario(params);
    std::ostringstream name;
    name << "scenario_" << std::setw(4) << std::setfill('0') << i;
    const fs::path dir = out / name.str();
    fs::create_directories(dir);
    avs::save_score_map(s.world.gt_score_map, dir / "gt.csv");
    auto world_json = avs::world_to_json(s.world);
    world_json["gt_score_map"] = "gt.csv";
    std::ofstream(dir / "world.json") << world_json.dump(2) << '\n';
    avs::save_score_map(s.base, dir / "base.csv");
    avs::save_features(s.features, dir / "features.csv");
    std::ofstream(dir / "params.json") << avs::params_to_json(params).dump(2) << '\n';
    std::ofstream(dir / "regions.json") << avs::partition_to_json(avs::make_partition(s.region_labels)).dump() << '\n';
  }
  std::cout << "wrote " << count << " scenarios to " << out.string() << '\n';
  return kExitOk;
}

int cmd_inspect_map(const fs::path& map_path, const fs::path& world_path) {
  const auto map = avs::load_score_map(map_path);
  const auto world = avs::load_world(world_path);
  if (map.n != world.n) throw avs::ConfigError("map and world sizes differ");
  const auto [lo, hi] = std::minmax_element(map.values.begin(), map.values.end());
  const double mean = std::accumulate(map.values.begin(), map.values.end(), 0.0) / map.values.size();
  std::cout << std::setprecision(6);
  std::cout << "n            " << map.n << '\n'
            << "min          " << *lo << '\n'
            << "max          " << *hi << '\n'
            << "mean         " << mean << '\n'
            << "targets      " << world.total_targets() << " in " << world.targets.size() << " cells\n";
  if (world.total_targets() > 0) {
    std::cout << "quality      " << avs::map_quality(map, world) << '\n';
  } else {
    std::cout << "quality      undefined (no targets)\n";
  }
  std::cout << "rmse vs gt   " << 100.0 * avs::rmse(map, world.gt_score_map) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budgeted visual search with test-time adaptation of score maps"};
  app.require_subcommand(1);

  fs::path episode_config;
  fs::path episode_out;
  auto* run_episode = app.add_subcommand("run-episode", "Run a single search episode");
  run_episode->add_option("--config", episode_config, "Episode config JSON")->required();
  run_episode->add_option("--out", episode_out, "Output directory");

  fs::path suite_path;
  fs::path suite_out;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* run_suite = app.add_subcommand("run-suite", "Run a paired TTA / no-TTA suite");
  run_suite->add_option("--suite", suite_path, "Suite config JSON")->required();
  run_suite->add_option("--out", suite_out, "Output directory")->required();
  run_suite->add_option("--jobs", jobs, "Parallel episodes")->check(CLI::PositiveNumber);

  fs::path params_path;
  fs::path gen_out;
  int count = 1;
  auto* gen = app.add_subcommand("gen-scenarios", "Synthesize scenario files");
  gen->add_option("--params", params_path, "Scenario params JSON")->required();
  gen->add_option("--count", count, "Number of scenarios")->required();
  gen->add_option("--out", gen_out, "Output directory")->required();

  fs::path map_path;
  fs::path world_path;
  auto* inspect = app.add_subcommand("inspect-map", "Print summary statistics of a score map");
  inspect->add_option("--map", map_path, "Score map CSV")->required();
  inspect->add_option("--world", world_path, "World JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_episode) return cmd_run_episode(episode_config, episode_out);
    if (*run_suite) return cmd_run_suite(suite_path, suite_out, jobs);
    if (*gen) return cmd_gen_scenarios(params_path, count, gen_out);
    if (*inspect) return cmd_inspect_map(map_path, world_path);
  } catch (const avs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const avs::FormatError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
