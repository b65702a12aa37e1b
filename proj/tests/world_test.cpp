#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "avs/error.hpp"
#include "avs/world.hpp"
#include "test_util.hpp"

namespace avs {
namespace {

using testing::make_world;

TEST(Sense, ReportsTargetCount) {
  const GridWorld w = make_world(24, {{7, 3}});
  EXPECT_EQ(sense(w, 7, 0).positive_count, 3);
  EXPECT_EQ(sense(w, 0, 0).positive_count, 0);
  EXPECT_FALSE(sense(w, 0, 0).positive());
}

TEST(Sense, MultisetFromJsonCollapses) {
  nlohmann::json j = {{"n", 4}, {"targets", {{5, 1}, {5, 1}}}, {"gt_score_map", std::vector<double>(16, 0.2)}};
  const GridWorld w = world_from_json(j);
  EXPECT_EQ(sense(w, 5, 2).positive_count, 2);
  EXPECT_EQ(sense(w, 5, 2).step, 2);
}

TEST(Sense, OutOfBounds) {
  const GridWorld w = make_world(3, {});
  EXPECT_THROW(sense(w, 9, 0), BoundsError);
  EXPECT_THROW(sense(w, -1, 0), BoundsError);
}

TEST(Sense, IsPure) {
  const GridWorld w = make_world(5, {{3, 2}, {11, 1}});
  const GridWorld copy = w;
  for (Cell c = 0; c < 25; ++c) EXPECT_EQ(sense(w, c, 1), sense(w, c, 1));
  EXPECT_EQ(w, copy);
}

TEST(ApplyAction, FourConnectedMove) {
  const AgentState s0 = start_state(24, 0, 256);
  const AgentState s1 = apply_action(s0, 1, Connectivity::Four);
  EXPECT_EQ(s1.steps_used, 1);
  EXPECT_EQ(s1.position, 1);
  EXPECT_EQ(s1.trajectory, (std::vector<Cell>{0, 1}));
  EXPECT_TRUE(s1.visited[1]);
  EXPECT_EQ(s0.steps_used, 0);  // input untouched
}

TEST(ApplyAction, DiagonalNeedsEightConnectivity) {
  const AgentState s0 = start_state(24, 0, 256);
  EXPECT_THROW(apply_action(s0, 25, Connectivity::Four), AdjacencyError);
  const AgentState s1 = apply_action(s0, 25, Connectivity::Eight);
  EXPECT_EQ(s1.steps_used, 1);
  EXPECT_EQ(s1.position, 25);
}

TEST(ApplyAction, RejectsWrapAroundAndJumps) {
  const AgentState s0 = start_state(24, 23, 10);  // right edge of row 0
  EXPECT_THROW(apply_action(s0, 24, Connectivity::Eight), AdjacencyError);
  EXPECT_THROW(apply_action(s0, 21, Connectivity::Four), AdjacencyError);
  EXPECT_THROW(apply_action(s0, 23, Connectivity::Four), AdjacencyError);
}

TEST(ApplyAction, BudgetExhausted) {
  AgentState s = start_state(4, 0, 1);
  s = apply_action(s, 1, Connectivity::Four);
  EXPECT_THROW(apply_action(s, 2, Connectivity::Four), BudgetError);
}

TEST(RemainingBudget, Arithmetic) {
  AgentState s = start_state(24, 0, 256);
  EXPECT_EQ(remaining_budget(s), 256);
  s.steps_used = 256;
  EXPECT_EQ(remaining_budget(s), 0);
  s.budget = 384;
  s.steps_used = 103;
  EXPECT_EQ(remaining_budget(s), 281);
}

TEST(Neighbors, OrderAndBounds) {
  EXPECT_EQ(neighbors(4, 3, Connectivity::Four), (std::vector<Cell>{1, 5, 7, 3}));
  EXPECT_EQ(neighbors(0, 3, Connectivity::Four), (std::vector<Cell>{1, 3}));
  EXPECT_EQ(neighbors(0, 3, Connectivity::Eight).size(), 3u);
  EXPECT_EQ(neighbors(4, 3, Connectivity::Eight).size(), 8u);
}

// Random walks respect the budget, keep the trajectory/visited invariants,
// and replay bit-exactly.
TEST(AgentStateProperty, RandomWalkInvariantsAndReplay) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 10);
    const int budget = static_cast<int>(rng() % 60);
    const Connectivity conn = rng() % 2 ? Connectivity::Four : Connectivity::Eight;
    const Cell start = static_cast<Cell>(rng() % (n * n));
    AgentState s = start_state(n, start, budget);
    while (remaining_budget(s) > 0) {
      const auto nb = neighbors(s.position, n, conn);
      s = apply_action(s, nb[rng() % nb.size()], conn);
    }
    ASSERT_EQ(s.steps_used, budget);
    ASSERT_EQ(s.trajectory.size(), static_cast<std::size_t>(budget) + 1);
    for (std::size_t i = 1; i < s.trajectory.size(); ++i) {
      ASSERT_TRUE(adjacent(s.trajectory[i - 1], s.trajectory[i], n, conn));
    }
    std::vector<std::uint8_t> expect(static_cast<std::size_t>(n * n), 0);
    for (Cell c : s.trajectory) expect[c] = 1;
    ASSERT_EQ(s.visited, expect);

    AgentState replay = start_state(n, start, budget);
    for (std::size_t i = 1; i < s.trajectory.size(); ++i) replay = apply_action(replay, s.trajectory[i], conn);
    ASSERT_EQ(replay, s);
  }
}

TEST(GridWorldJson, RoundTripAndValidation) {
  GridWorld w = make_world(3, {{0, 1}, {8, 2}}, 0.25);
  w.seed = 42;
  EXPECT_EQ(world_from_json(world_to_json(w)), w);

  nlohmann::json bad = world_to_json(w);
  bad["targets"] = {{9, 1}};
  EXPECT_THROW(world_from_json(bad), ConfigError);
  bad["targets"] = {{1, 0}};
  EXPECT_THROW(world_from_json(bad), ConfigError);
  bad = world_to_json(w);
  bad["gt_score_map"] = std::vector<double>(8, 0.1);
  EXPECT_THROW(world_from_json(bad), ConfigError);
}

TEST(GridWorldJson, LoadsMapByPath) {
  const auto dir = testing::scratch_dir("world_json");
  {
    std::ofstream f(dir / "gt.csv");
    f << "n=2\n0.1,0.2\n0.3,0.4\n";
  }
  nlohmann::json j = {{"n", 2}, {"targets", {{3, 1}}}, {"gt_score_map", "gt.csv"}, {"seed", 1}};
  std::ofstream(dir / "world.json") << j.dump();
  const GridWorld w = load_world(dir / "world.json");
  EXPECT_DOUBLE_EQ(w.gt_score_map[3], 0.4);
  EXPECT_EQ(w.target_count(3), 1);
}

}  // namespace
}  // namespace avs
