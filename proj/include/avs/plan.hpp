#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "avs/score_map.hpp"
#include "avs/world.hpp"
#include "json.hpp"

namespace avs {

// What a planner sees before choosing its next move. The belief is the raw
// intensity map; use normalized_belief() where a distribution is required.
struct Observation {
  int n = 0;
  Cell position = 0;
  std::vector<std::uint8_t> visited;
  ScoreMap belief;
  int remaining_budget = 0;

  bool is_visited(Cell c) const { return visited[static_cast<std::size_t>(c)] != 0; }
};

// Belief rescaled to sum to one; uniform when the belief is identically zero.
std::vector<double> normalized_belief(const Observation& obs);

// Box blur of side 2*radius+1 with zero padding outside the grid.
std::vector<double> box_blur(const ScoreMap& map, int radius);

// Information-surfing move over the four cardinal neighbours.
Cell is_step(const Observation& obs, int blur_radius = 1);

// Index of cell c along the boustrophedon track that starts at the top-left.
int lawnmower_index(Cell c, int n);
Cell lawnmower_cell(int index, int n);

// Next cell of the boustrophedon track, or nullopt at the end of the track.
std::optional<Cell> lawnmower_step(const Observation& obs);

struct DijkstraWeights {
  double w_dist = 1.0;
  double w_prob = 0.5;
  double w_visited = 0.5;
};

inline constexpr double kMinEdgeCost = 1e-6;

// Cost of entering cell c.
double dijkstra_cost(const Observation& obs, Cell c, const DijkstraWeights& w);

// Highest-belief unvisited cell (smallest index on ties), nullopt if all visited.
std::optional<Cell> query_cell(const Observation& obs);

// Min-cost 8-connected route to the query cell, excluding the current
// position. nullopt once every cell has been visited.
std::optional<std::vector<Cell>> dijkstra_query(const Observation& obs,
                                                const DijkstraWeights& w = {});

enum class PlannerKind { InformationSurfing, Lawnmower, DijkstraQuery };

std::string to_string(PlannerKind kind);

struct PlannerConfig {
  PlannerKind kind = PlannerKind::InformationSurfing;
  DijkstraWeights weights;
  int blur_radius = 1;
};

nlohmann::json planner_config_to_json(const PlannerConfig& cfg);
PlannerConfig planner_config_from_json(const nlohmann::json& j);

// Interface that external planners implement to plug into run_episode.
class Planner {
 public:
  virtual ~Planner() = default;
  virtual Connectivity connectivity() const = 0;
  // nullopt signals that the planner has covered everything it can.
  virtual std::optional<Cell> next(const Observation& obs) const = 0;
  virtual std::string name() const = 0;
};

std::unique_ptr<Planner> make_planner(const PlannerConfig& cfg);

}  // namespace avs
