#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "avs/error.hpp"
#include "avs/plan.hpp"

namespace avs {
namespace {

Observation make_obs(int n, Cell position, double fill = 0.5) {
  Observation obs;
  obs.n = n;
  obs.position = position;
  obs.visited.assign(static_cast<std::size_t>(n * n), 0);
  obs.visited[position] = 1;
  obs.belief = ScoreMap::uniform(n, fill);
  obs.remaining_budget = n * n;
  return obs;
}

Observation random_obs(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Observation obs = make_obs(n, static_cast<Cell>(rng() % (n * n)));
  for (double& v : obs.belief.values) v = u(rng);
  for (auto& v : obs.visited) v = v || u(rng) < 0.3;
  return obs;
}

int chebyshev(Cell a, Cell b, int n) {
  return std::max(std::abs(row_of(a, n) - row_of(b, n)), std::abs(col_of(a, n) - col_of(b, n)));
}

double path_cost(const Observation& obs, const std::vector<Cell>& path, const DijkstraWeights& w) {
  double total = 0.0;
  for (Cell c : path) total += dijkstra_cost(obs, c, w);
  return total;
}

// Exhaustive search over simple 8-connected paths, pruned only by cost.
// Costs are positive, so the cheapest path is always simple.
std::pair<double, std::vector<Cell>> brute_min_path(const Observation& obs, Cell goal, const DijkstraWeights& w) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<Cell> best_path;
  std::vector<Cell> path;
  std::vector<std::uint8_t> on_path(static_cast<std::size_t>(obs.n * obs.n), 0);
  on_path[obs.position] = 1;
  std::function<void(Cell, double)> walk = [&](Cell u, double cost) {
    if (cost >= best + 1e-12) return;
    if (u == goal) {
      best = cost;
      best_path = path;
      return;
    }
    for (Cell v : neighbors(u, obs.n, Connectivity::Eight)) {
      if (on_path[v]) continue;
      on_path[v] = 1;
      path.push_back(v);
      walk(v, cost + dijkstra_cost(obs, v, w));
      path.pop_back();
      on_path[v] = 0;
    }
  };
  walk(obs.position, 0.0);
  return {best, best_path};
}

TEST(BoxBlur, ZeroPaddedMean) {
  ScoreMap m = ScoreMap::uniform(3, 0.0);
  m[4] = 9.0;
  const auto b = box_blur(m, 1);
  for (double v : b) EXPECT_DOUBLE_EQ(v, 1.0);
  const auto c = box_blur(ScoreMap::uniform(3, 1.0), 1);
  EXPECT_DOUBLE_EQ(c[0], 4.0 / 9.0);
  EXPECT_DOUBLE_EQ(c[1], 6.0 / 9.0);
  EXPECT_DOUBLE_EQ(c[4], 1.0);
}

TEST(InformationSurfing, FollowsEastwardGradient) {
  Observation obs = make_obs(7, cell_at(3, 3, 7));
  for (Cell c = 0; c < 49; ++c) obs.belief[c] = 0.1 * col_of(c, 7);
  EXPECT_EQ(is_step(obs), cell_at(3, 4, 7));
}

TEST(InformationSurfing, UniformBeliefGoesNorth) {
  const Observation obs = make_obs(7, cell_at(3, 3, 7));
  EXPECT_EQ(is_step(obs), cell_at(2, 3, 7));
}

TEST(InformationSurfing, ZeroPaddingPullsAwayFromEdges) {
  // On a uniform belief the blurred edge row is darker than the interior.
  const Observation obs = make_obs(7, cell_at(0, 3, 7));
  EXPECT_EQ(is_step(obs), cell_at(1, 3, 7));
}

TEST(InformationSurfing, EqualAscentsBreakNorthEastSouthWest) {
  const int n = 7;
  Observation obs = make_obs(n, cell_at(3, 3, n), 0.2);
  obs.belief[cell_at(2, 4, n)] = 0.8;  // diagonal: N and E blur up by the same amount
  obs.belief[cell_at(1, 3, n)] = 0.0;
  obs.belief[cell_at(3, 5, n)] = 0.0;
  EXPECT_EQ(is_step(obs), cell_at(2, 3, n));
}

TEST(InformationSurfing, VisitedPeakFallsBackToBestNeighbour) {
  const int n = 5;
  Observation obs = make_obs(n, cell_at(2, 2, n), 0.1);
  obs.belief[cell_at(2, 2, n)] = 0.9;
  obs.belief[cell_at(1, 2, n)] = 0.3;
  obs.belief[cell_at(2, 3, n)] = 0.4;
  obs.belief[cell_at(3, 2, n)] = 0.6;
  obs.belief[cell_at(2, 1, n)] = 0.2;
  for (Cell c : neighbors(obs.position, n, Connectivity::Four)) obs.visited[c] = 1;
  EXPECT_EQ(is_step(obs), cell_at(3, 2, n));
}

TEST(InformationSurfing, PrefersUnvisitedAscent) {
  const int n = 5;
  Observation obs = make_obs(n, cell_at(2, 2, n), 0.1);
  for (Cell c = 0; c < n * n; ++c) obs.belief[c] = 0.1 + 0.1 * col_of(c, n);
  obs.visited[cell_at(2, 3, n)] = 1;  // steepest ascent already seen
  const Cell next = is_step(obs);
  EXPECT_TRUE(adjacent(obs.position, next, n, Connectivity::Four));
  EXPECT_FALSE(obs.is_visited(next));
}

TEST(InformationSurfing, InvariantUnderBeliefScaling) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    Observation obs = random_obs(rng, 8);
    const Cell ref = is_step(obs);
    EXPECT_TRUE(adjacent(obs.position, ref, 8, Connectivity::Four));
    for (double s : {0.5, 3.7, 1000.0}) {
      Observation scaled = obs;
      for (double& v : scaled.belief.values) v *= s;
      EXPECT_EQ(is_step(scaled), ref) << "trial " << trial << " scale " << s;
    }
  }
}

TEST(Lawnmower, TrackIndexing) {
  EXPECT_EQ(lawnmower_index(2, 3), 2);
  EXPECT_EQ(lawnmower_index(5, 3), 3);
  EXPECT_EQ(lawnmower_index(3, 3), 5);
  for (int i = 0; i < 49; ++i) EXPECT_EQ(lawnmower_index(lawnmower_cell(i, 7), 7), i);
}

TEST(Lawnmower, StepsAlongBoustrophedon) {
  EXPECT_EQ(lawnmower_step(make_obs(3, 2)), std::optional<Cell>(5));
  EXPECT_EQ(lawnmower_step(make_obs(3, 5)), std::optional<Cell>(4));
  EXPECT_EQ(lawnmower_step(make_obs(3, 6)), std::optional<Cell>(7));
  EXPECT_EQ(lawnmower_step(make_obs(3, 8)), std::nullopt);
  EXPECT_EQ(lawnmower_step(make_obs(4, 12)), std::nullopt);  // track ends bottom-left for even n
}

TEST(Lawnmower, CoversEveryCellOnce) {
  for (int n : {2, 3, 24}) {
    Observation obs = make_obs(n, 0);
    std::set<Cell> seen = {0};
    int steps = 0;
    while (auto next = lawnmower_step(obs)) {
      EXPECT_TRUE(adjacent(obs.position, *next, n, Connectivity::Four));
      EXPECT_TRUE(seen.insert(*next).second);
      obs.position = *next;
      obs.visited[*next] = 1;
      ++steps;
    }
    EXPECT_EQ(steps, n * n - 1);
    EXPECT_EQ(static_cast<int>(seen.size()), n * n);
  }
}

TEST(Dijkstra, QueryIsUnvisitedArgmax) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const Observation obs = random_obs(rng, 6);
    const auto q = query_cell(obs);
    ASSERT_TRUE(q.has_value());
    EXPECT_FALSE(obs.is_visited(*q));
    for (Cell c = 0; c < 36; ++c) {
      if (!obs.is_visited(c)) EXPECT_GE(obs.belief[*q], obs.belief[c]);
    }
    const auto path = dijkstra_query(obs);
    ASSERT_TRUE(path.has_value());
    ASSERT_FALSE(path->empty());
    EXPECT_EQ(path->back(), *q);
  }
}

TEST(Dijkstra, PlainDistanceGivesChebyshevLength) {
  std::mt19937_64 rng(5);
  const DijkstraWeights w{1.0, 0.0, 0.0};
  for (int trial = 0; trial < 100; ++trial) {
    Observation obs = random_obs(rng, 9);
    const auto path = dijkstra_query(obs, w);
    ASSERT_TRUE(path.has_value());
    EXPECT_EQ(static_cast<int>(path->size()), chebyshev(obs.position, *query_cell(obs), 9));
  }
}

TEST(Dijkstra, RidgePathMatchesExhaustiveOracle) {
  const int n = 5;
  Observation obs = make_obs(n, cell_at(2, 0, n), 0.1);
  for (int c = 1; c <= 3; ++c) obs.belief[cell_at(1, c, n)] = 0.9;
  obs.belief[cell_at(2, 4, n)] = 1.0;
  const DijkstraWeights w;
  const auto path = dijkstra_query(obs, w);
  ASSERT_TRUE(path.has_value());
  const auto [best, best_path] = brute_min_path(obs, cell_at(2, 4, n), w);
  EXPECT_EQ(*path, best_path);
  EXPECT_NEAR(path_cost(obs, *path, w), best, 1e-12);
  const std::vector<Cell> ridge = {cell_at(1, 1, n), cell_at(1, 2, n), cell_at(1, 3, n), cell_at(2, 4, n)};
  EXPECT_EQ(*path, ridge);
}

TEST(Dijkstra, RandomFixturesMatchExhaustiveOracle) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const Observation obs = random_obs(rng, 5);
    const DijkstraWeights w{u(rng) + 0.1, u(rng), u(rng)};
    const auto path = dijkstra_query(obs, w);
    ASSERT_TRUE(path.has_value());
    const auto [best, best_path] = brute_min_path(obs, *query_cell(obs), w);
    EXPECT_NEAR(path_cost(obs, *path, w), best, 1e-9) << "trial " << trial;
  }
}

TEST(Dijkstra, CostFloor) {
  Observation obs = make_obs(3, 0, 1.0);
  EXPECT_EQ(dijkstra_cost(obs, 4, {0.5, 1.0, 0.0}), kMinEdgeCost);
  EXPECT_DOUBLE_EQ(dijkstra_cost(obs, 0, {1.0, 0.25, 0.5}), 1.25);
  EXPECT_THROW(dijkstra_query(obs, {1.0, -0.1, 0.0}), ParameterError);
}

TEST(Dijkstra, AllVisitedSignalsCoverage) {
  Observation obs = make_obs(4, 5);
  std::fill(obs.visited.begin(), obs.visited.end(), 1);
  EXPECT_EQ(query_cell(obs), std::nullopt);
  EXPECT_EQ(dijkstra_query(obs), std::nullopt);
}

TEST(Dijkstra, InvariantUnderJointScaling) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const Observation obs = random_obs(rng, 7);
    const DijkstraWeights w;
    const auto ref = dijkstra_query(obs, w);
    for (double s : {0.25, 2.0, 1024.0}) {
      const DijkstraWeights ws{w.w_dist * s, w.w_prob * s, w.w_visited * s};
      EXPECT_EQ(dijkstra_query(obs, ws), ref);
      // Scaling the belief with an inverse-scaled w_prob leaves every cost unchanged.
      Observation scaled = obs;
      for (double& v : scaled.belief.values) v *= s;
      const DijkstraWeights wb{w.w_dist, w.w_prob / s, w.w_visited};
      EXPECT_EQ(dijkstra_query(scaled, wb), ref);
    }
  }
}

TEST(Planner, EmittedCellsRespectConnectivity) {
  std::mt19937_64 rng(13);
  for (PlannerKind kind : {PlannerKind::InformationSurfing, PlannerKind::Lawnmower, PlannerKind::DijkstraQuery}) {
    PlannerConfig cfg;
    cfg.kind = kind;
    const auto planner = make_planner(cfg);
    EXPECT_EQ(planner->name(), to_string(kind));
    Observation obs = random_obs(rng, 10);
    for (int step = 0; step < 150; ++step) {
      const auto next = planner->next(obs);
      if (!next) break;
      ASSERT_TRUE(adjacent(obs.position, *next, 10, planner->connectivity())) << to_string(kind);
      obs.position = *next;
      obs.visited[*next] = 1;
    }
  }
}

TEST(NormalizedBelief, SumsToOne) {
  std::mt19937_64 rng(2);
  const Observation obs = random_obs(rng, 6);
  const auto p = normalized_belief(obs);
  double total = 0.0;
  for (double v : p) total += v;
  EXPECT_NEAR(total, 1.0, 1e-12);
  const auto z = normalized_belief(make_obs(3, 0, 0.0));
  for (double v : z) EXPECT_DOUBLE_EQ(v, 1.0 / 9);
}

TEST(PlannerConfigJson, RoundTripAndErrors) {
  PlannerConfig cfg;
  cfg.kind = PlannerKind::DijkstraQuery;
  cfg.weights = {2.0, 0.25, 0.0};
  const auto back = planner_config_from_json(planner_config_to_json(cfg));
  EXPECT_EQ(back.kind, cfg.kind);
  EXPECT_EQ(back.weights.w_dist, 2.0);
  EXPECT_EQ(back.weights.w_prob, 0.25);
  EXPECT_EQ(back.weights.w_visited, 0.0);
  EXPECT_EQ(planner_config_from_json({{"kind", "is"}}).kind, PlannerKind::InformationSurfing);
  EXPECT_THROW(planner_config_from_json({{"kind", "rl"}}), ConfigError);
  EXPECT_THROW(planner_config_from_json({{"kind", "dijkstra"}, {"weights", {1.0, -1.0, 0.0}}}), ConfigError);
  EXPECT_THROW(planner_config_from_json(nlohmann::json::object()), ConfigError);
}

}  // namespace
}  // namespace avs
