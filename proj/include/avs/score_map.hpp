#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace avs {

using Cell = std::int32_t;

// Row-major n x n grid of probability-like scores in [0,1].
struct ScoreMap {
  int n = 0;
  std::vector<double> values;

  ScoreMap() = default;
  ScoreMap(int side, std::vector<double> vals);
  static ScoreMap uniform(int side, double value);

  std::size_t size() const { return values.size(); }
  double operator[](Cell c) const { return values[static_cast<std::size_t>(c)]; }
  double& operator[](Cell c) { return values[static_cast<std::size_t>(c)]; }

  bool operator==(const ScoreMap&) const = default;
};

// Throws ParameterError unless the map is n*n finite values in [0,1].
void validate(const ScoreMap& map);

inline int row_of(Cell c, int n) { return c / n; }
inline int col_of(Cell c, int n) { return c % n; }
inline Cell cell_at(int row, int col, int n) { return row * n + col; }

}  // namespace avs
