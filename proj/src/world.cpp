#include "avs/world.hpp"

#include <cstdlib>
#include <fstream>
#include <string>

#include "avs/error.hpp"
#include "avs/priors.hpp"

namespace avs {

int GridWorld::target_count(Cell c) const {
  const auto it = targets.find(c);
  return it == targets.end() ? 0 : it->second;
}

int GridWorld::total_targets() const {
  int total = 0;
  for (const auto& [cell, count] : targets) total += count;
  return total;
}

void validate(const GridWorld& world) {
  if (world.n < 1) throw ParameterError("grid side must be >= 1");
  for (const auto& [cell, count] : world.targets) {
    if (!in_bounds(cell, world.n)) {
      throw ParameterError("target cell " + std::to_string(cell) + " out of bounds");
    }
    if (count < 1) {
      throw ParameterError("target count at cell " + std::to_string(cell) + " must be >= 1");
    }
  }
  if (world.gt_score_map.n != world.n) {
    throw ParameterError("ground-truth score map side does not match grid side");
  }
  validate(world.gt_score_map);
}

AgentState start_state(int n, Cell start, int budget) {
  if (!in_bounds(start, n)) throw BoundsError("start cell " + std::to_string(start) + " out of bounds");
  if (budget < 0) throw BudgetError("budget must be >= 0");
  AgentState s;
  s.n = n;
  s.position = start;
  s.visited.assign(static_cast<std::size_t>(n) * n, 0);
  s.visited[static_cast<std::size_t>(start)] = 1;
  s.budget = budget;
  s.trajectory = {start};
  return s;
}

bool in_bounds(Cell c, int n) { return c >= 0 && c < n * n; }

bool adjacent(Cell a, Cell b, int n, Connectivity conn) {
  if (!in_bounds(a, n) || !in_bounds(b, n) || a == b) return false;
  const int dr = std::abs(row_of(a, n) - row_of(b, n));
  const int dc = std::abs(col_of(a, n) - col_of(b, n));
  if (conn == Connectivity::Four) return dr + dc == 1;
  return dr <= 1 && dc <= 1;
}

std::vector<Cell> neighbors(Cell c, int n, Connectivity conn) {
  static constexpr int kFour[4][2] = {{-1, 0}, {0, 1}, {1, 0}, {0, -1}};
  static constexpr int kEight[8][2] = {{-1, 0}, {-1, 1}, {0, 1}, {1, 1},
                                       {1, 0},  {1, -1}, {0, -1}, {-1, -1}};
  std::vector<Cell> out;
  const int r = row_of(c, n);
  const int col = col_of(c, n);
  auto push = [&](int dr, int dc) {
    const int rr = r + dr;
    const int cc = col + dc;
    if (rr >= 0 && rr < n && cc >= 0 && cc < n) out.push_back(cell_at(rr, cc, n));
  };
  if (conn == Connectivity::Four) {
    for (const auto& d : kFour) push(d[0], d[1]);
  } else {
    for (const auto& d : kEight) push(d[0], d[1]);
  }
  return out;
}

Measurement sense(const GridWorld& world, Cell cell, int step) {
  if (!in_bounds(cell, world.n)) {
    throw BoundsError("sense: cell " + std::to_string(cell) + " out of bounds");
  }
  return Measurement{cell, world.target_count(cell), step};
}

AgentState apply_action(const AgentState& state, Cell next_cell, Connectivity conn) {
  if (state.steps_used >= state.budget) {
    throw BudgetError("budget of " + std::to_string(state.budget) + " steps exhausted");
  }
  if (!adjacent(state.position, next_cell, state.n, conn)) {
    throw AdjacencyError("cell " + std::to_string(next_cell) + " is not adjacent to " +
                         std::to_string(state.position));
  }
  AgentState next = state;
  next.position = next_cell;
  next.steps_used += 1;
  next.trajectory.push_back(next_cell);
  next.visited[static_cast<std::size_t>(next_cell)] = 1;
  return next;
}

int remaining_budget(const AgentState& state) {
  const int left = state.budget - state.steps_used;
  return left > 0 ? left : 0;
}

GridWorld world_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  try {
    GridWorld w;
    w.n = j.at("n").get<int>();
    for (const auto& t : j.at("targets")) {
      const Cell cell = t.at(0).get<Cell>();
      const int count = t.at(1).get<int>();
      w.targets[cell] += count;
    }
    const auto& gt = j.at("gt_score_map");
    if (gt.is_string()) {
      std::filesystem::path p = gt.get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      w.gt_score_map = load_score_map(p);
    } else {
      w.gt_score_map = ScoreMap(w.n, gt.get<std::vector<double>>());
    }
    w.seed = j.value("seed", std::uint64_t{0});
    validate(w);
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("world json: ") + e.what());
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("world json: ") + e.what());
  }
}

nlohmann::json world_to_json(const GridWorld& world) {
  nlohmann::json targets = nlohmann::json::array();
  for (const auto& [cell, count] : world.targets) targets.push_back({cell, count});
  return {{"n", world.n},
          {"targets", targets},
          {"gt_score_map", world.gt_score_map.values},
          {"seed", world.seed}};
}

GridWorld load_world(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open world file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("world file " + path.string() + ": " + e.what());
  }
  return world_from_json(j, path.parent_path());
}

void save_world(const GridWorld& world, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write world file " + path.string());
  out << world_to_json(world).dump(1) << '\n';
}

}  // namespace avs
