#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "avs/adapt.hpp"
#include "avs/plan.hpp"
#include "avs/priors.hpp"
#include "avs/regions.hpp"
#include "avs/world.hpp"
#include "json.hpp"

namespace avs {

inline constexpr int kDefaultBudget = 256;
inline constexpr int kExtendedBudget = 384;

struct EpisodeConfig {
  std::string name = "episode";

  // Either a synthetic scenario or files on disk.
  std::optional<ScenarioParams> scenario;
  std::filesystem::path world_path;
  std::filesystem::path base_map_path;
  std::filesystem::path features_path;

  PlannerConfig planner;
  std::optional<TtaConfig> tta;
  int budget = kDefaultBudget;
  std::optional<Cell> start_cell;  // seeded-random when absent
  std::uint64_t seed = 0;          // start cell and clustering
  std::vector<double> checkpoints = {0.0, 0.5, 1.0};
  bool stop_when_all_found = true;
};

// Everything an episode reads, resolved from an EpisodeConfig.
struct EpisodeInputs {
  GridWorld world;
  ScoreMap base;
  std::optional<FeatureField> features;
};

EpisodeInputs load_inputs(const EpisodeConfig& cfg);

struct EpisodeResult {
  std::string id;
  std::string planner;
  bool tta = false;
  std::uint64_t seed = 0;
  int budget = 0;
  Cell start_cell = 0;
  bool start_overridden = false;  // lawnmower always starts top-left
  int targets_found = 0;
  int targets_total = 0;
  double found_fraction = 0.0;
  std::optional<int> steps_to_first;
  bool found_on_start = false;  // first target sat on the start cell
  double initial_quality = 0.0;
  std::vector<std::pair<double, double>> rmse_at;  // (fraction, rmse in [0,1])
  std::vector<Cell> trajectory;
  std::vector<int> tta_event_steps;
  int regions = 0;
  bool coverage_complete = false;
  std::string world_hash;
  std::string inputs_hash;
  ScoreMap final_lambda;

  std::optional<double> rmse_at_fraction(double f) const;
};

// Deterministic given the config. Inputs can be supplied to skip reloading.
EpisodeResult run_episode(const EpisodeConfig& cfg);
EpisodeResult run_episode(const EpisodeConfig& cfg, const EpisodeInputs& inputs);
// Runs with a caller-supplied planner instead of cfg.planner.
EpisodeResult run_episode(const EpisodeConfig& cfg, const EpisodeInputs& inputs,
                          const Planner& planner);

Cell resolve_start_cell(const EpisodeConfig& cfg, int n);

// Both maps min-max normalised (constant maps become zeros), then RMSE.
double rmse(const ScoreMap& pred, const ScoreMap& gt);

struct Bucket {
  double fraction = 1.0;
  std::size_t size = 0;
  double mean_found = 0.0;
};

struct BucketReport {
  double overall_mean_found = 0.0;
  std::size_t total = 0;
  std::vector<Bucket> buckets;
  std::vector<std::vector<std::size_t>> members;  // input indices per bucket
};

// Bottom ceil(f*N) episodes by quality for each fraction f.
BucketReport percentile_buckets(const std::vector<std::pair<double, EpisodeResult>>& results,
                                const std::vector<double>& fractions = {0.05, 0.02});

// One-sided exact sign test: P(X >= wins) for X ~ Binomial(wins + losses, 1/2).
double sign_test_p(int wins, int losses);

struct SuiteConfig {
  std::vector<EpisodeConfig> templates;
  std::vector<std::uint64_t> seeds;
  bool arm_tta = true;
  bool arm_no_tta = true;
  std::vector<double> bucket_fractions = {0.05, 0.02};
};

struct ArmSummary {
  std::string template_name;
  bool tta = false;
  std::size_t episodes = 0;
  double found_all = 0.0;
  std::vector<Bucket> found_buckets;
  std::vector<std::pair<double, double>> mean_rmse;  // (fraction, mean rmse in [0,1])
  std::optional<double> mean_steps_to_first;
  std::size_t episodes_with_find = 0;
};

struct PairedSummary {
  std::string template_name;
  int wins = 0;  // TTA found more
  int losses = 0;
  int ties = 0;
  double mean_found_diff = 0.0;
  double sign_test_p = 1.0;
};

struct SuiteReport {
  std::vector<EpisodeResult> episodes;  // sorted by episode id order of generation
  std::vector<ArmSummary> arms;
  std::vector<PairedSummary> paired;
};

SuiteReport run_suite(const SuiteConfig& suite, int jobs = 1);

nlohmann::json episode_to_json(const EpisodeResult& r);
nlohmann::json report_to_json(const SuiteReport& report);
std::string report_to_text(const SuiteReport& report);
std::string episodes_to_jsonl(const SuiteReport& report);

// Writes report.json, report.txt, episodes.jsonl and maps/<id>.csv.
void write_suite_outputs(const SuiteReport& report, const std::filesystem::path& out_dir);

EpisodeConfig episode_config_from_json(const nlohmann::json& j,
                                       const std::filesystem::path& base_dir = {});
nlohmann::json episode_config_to_json(const EpisodeConfig& cfg);
SuiteConfig suite_config_from_json(const nlohmann::json& j,
                                   const std::filesystem::path& base_dir = {});

nlohmann::json read_json_file(const std::filesystem::path& path);

// FNV-1a over the serialised inputs, rendered as 16 hex digits.
std::string hash_world(const GridWorld& world);
std::string hash_inputs(const GridWorld& world, const ScoreMap& base, Cell start);

// Filesystem-safe form of an episode id.
std::string file_stem_for(const std::string& id);

}  // namespace avs
