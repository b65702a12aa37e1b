#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <vector>

#include "avs/score_map.hpp"
#include "json.hpp"

namespace avs {

enum class Connectivity { Four = 4, Eight = 8 };

// Ground truth of one search instance. Targets are a multiset stored as
// cell -> count; the ground-truth score map is only consulted by metrics.
struct GridWorld {
  int n = 0;
  std::map<Cell, int> targets;
  ScoreMap gt_score_map;
  std::uint64_t seed = 0;

  int num_cells() const { return n * n; }
  int target_count(Cell c) const;
  int total_targets() const;

  bool operator==(const GridWorld&) const = default;
};

// Throws ParameterError if any invariant of GridWorld is broken.
void validate(const GridWorld& world);

struct Measurement {
  Cell cell = 0;
  int positive_count = 0;  // 0 is a negative measurement
  int step = 0;

  bool positive() const { return positive_count > 0; }
  bool operator==(const Measurement&) const = default;
};

struct AgentState {
  int n = 0;
  Cell position = 0;
  std::vector<std::uint8_t> visited;
  int steps_used = 0;
  int budget = 0;
  std::vector<Cell> trajectory;

  bool operator==(const AgentState&) const = default;
};

AgentState start_state(int n, Cell start, int budget);

bool in_bounds(Cell c, int n);
bool adjacent(Cell a, Cell b, int n, Connectivity conn);

// In-bounds neighbours of c; 4-connected order is N, E, S, W.
std::vector<Cell> neighbors(Cell c, int n, Connectivity conn);

// Perfect single-cell sensor.
Measurement sense(const GridWorld& world, Cell cell, int step);

AgentState apply_action(const AgentState& state, Cell next_cell, Connectivity conn);

int remaining_budget(const AgentState& state);

// JSON: {n, targets: [[cell,count],...], gt_score_map: <csv path> | [..], seed}.
// Relative map paths resolve against base_dir.
GridWorld world_from_json(const nlohmann::json& j,
                          const std::filesystem::path& base_dir = {});
nlohmann::json world_to_json(const GridWorld& world);
GridWorld load_world(const std::filesystem::path& path);
void save_world(const GridWorld& world, const std::filesystem::path& path);

}  // namespace avs
