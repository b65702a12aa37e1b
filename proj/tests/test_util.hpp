#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "avs/world.hpp"

namespace avs::testing {

inline GridWorld make_world(int n, std::map<Cell, int> targets, double fill = 0.1) {
  GridWorld w;
  w.n = n;
  w.targets = std::move(targets);
  w.gt_score_map = ScoreMap::uniform(n, fill);
  return w;
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("avs_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace avs::testing
