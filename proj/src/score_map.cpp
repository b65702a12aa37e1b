#include "avs/score_map.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "avs/error.hpp"

namespace avs {

ScoreMap::ScoreMap(int side, std::vector<double> vals) : n(side), values(std::move(vals)) {}

ScoreMap ScoreMap::uniform(int side, double value) {
  return ScoreMap(side, std::vector<double>(static_cast<std::size_t>(side) * side, value));
}

void validate(const ScoreMap& map) {
  if (map.n < 1) throw ParameterError("score map side must be >= 1");
  if (map.values.size() != static_cast<std::size_t>(map.n) * map.n) {
    throw ParameterError("score map has " + std::to_string(map.values.size()) +
                         " values, expected " + std::to_string(map.n * map.n));
  }
  for (std::size_t i = 0; i < map.values.size(); ++i) {
    const double v = map.values[i];
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw ParameterError("score map value at cell " + std::to_string(i) +
                           " is outside [0,1]");
    }
  }
}

}  // namespace avs
