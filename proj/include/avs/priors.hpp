#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "avs/score_map.hpp"
#include "avs/world.hpp"
#include "json.hpp"

namespace avs {

// Per-cell feature vectors, row-major, stored as one contiguous block.
struct FeatureField {
  int n = 0;
  int dim = 0;
  std::vector<double> data;  // n*n rows of dim values

  FeatureField() = default;
  FeatureField(int side, int d, std::vector<double> values);

  int num_points() const { return n * n; }
  const double* row(int i) const { return data.data() + static_cast<std::size_t>(i) * dim; }
  double* row(int i) { return data.data() + static_cast<std::size_t>(i) * dim; }

  bool operator==(const FeatureField&) const = default;
};

void validate(const FeatureField& features);

enum class Corruption { None, ModeSwap, UniformBlur };

std::string to_string(Corruption c);
Corruption corruption_from_string(const std::string& s);

struct ScenarioParams {
  int n = 24;
  int num_regions = 2;
  int targets_total = 8;
  double target_region_bias = 0.9;
  Corruption corruption = Corruption::None;
  std::uint64_t seed = 0;
};

void validate(const ScenarioParams& params);

// Synthetic instance. Region 0 is the "true" region that attracts targets;
// region 1 is the decoy that receives the high scores under mode_swap.
struct Scenario {
  GridWorld world;
  ScoreMap base;
  FeatureField features;
  std::vector<int> region_labels;
  static constexpr int kTrueRegion = 0;
  static constexpr int kDecoyRegion = 1;
};

inline constexpr double kHighScore = 0.8;
inline constexpr double kLowScore = 0.1;
inline constexpr double kScoreNoise = 0.05;
inline constexpr double kFeatureNoise = 0.02;

Scenario synth_scenario(const ScenarioParams& params);

// Score-map CSV: "n=<int>" header, then n rows of n comma-separated values.
ScoreMap load_score_map(const std::filesystem::path& path);
ScoreMap parse_score_map(const std::string& text);
void save_score_map(const ScoreMap& map, const std::filesystem::path& path);
std::string format_score_map(const ScoreMap& map);

// Feature CSV: "n=<int>,dim=<int>" header, then n*n rows of dim values.
FeatureField load_features(const std::filesystem::path& path);
void save_features(const FeatureField& features, const std::filesystem::path& path);

// Count-weighted mean of pred at the target cells.
double map_quality(const ScoreMap& pred, const GridWorld& world);

nlohmann::json params_to_json(const ScenarioParams& params);
ScenarioParams params_from_json(const nlohmann::json& j);

}  // namespace avs
