#include "avs/plan.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>

#include "avs/error.hpp"

namespace avs {

std::vector<double> normalized_belief(const Observation& obs) {
  const double total = std::accumulate(obs.belief.values.begin(), obs.belief.values.end(), 0.0);
  std::vector<double> out(obs.belief.values.size());
  if (total <= 0.0) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(out.size()));
    return out;
  }
  std::transform(obs.belief.values.begin(), obs.belief.values.end(), out.begin(),
                 [total](double v) { return v / total; });
  return out;
}

std::vector<double> box_blur(const ScoreMap& map, int radius) {
  const int n = map.n;
  const double window = static_cast<double>((2 * radius + 1) * (2 * radius + 1));
  std::vector<double> out(map.size(), 0.0);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      double s = 0.0;
      for (int dr = -radius; dr <= radius; ++dr) {
        for (int dc = -radius; dc <= radius; ++dc) {
          const int rr = r + dr;
          const int cc = c + dc;
          if (rr >= 0 && rr < n && cc >= 0 && cc < n) s += map[cell_at(rr, cc, n)];
        }
      }
      out[static_cast<std::size_t>(cell_at(r, c, n))] = s / window;
    }
  }
  return out;
}

namespace {

// Highest raw belief, first in N, E, S, W order on ties.
Cell highest_belief(const Observation& obs, const std::vector<Cell>& cells) {
  Cell best = cells.front();
  for (Cell c : cells) {
    if (obs.belief[c] > obs.belief[best]) best = c;
  }
  return best;
}

}  // namespace

Cell is_step(const Observation& obs, int blur_radius) {
  const auto nbrs = neighbors(obs.position, obs.n, Connectivity::Four);
  if (nbrs.empty()) throw ParameterError("is_step: agent has no neighbours");
  const auto blurred = box_blur(obs.belief, blur_radius);
  const double here = blurred[static_cast<std::size_t>(obs.position)];

  double best_diff = 0.0;
  std::vector<Cell> best;
  std::vector<Cell> unvisited;
  for (Cell c : nbrs) {
    if (obs.is_visited(c)) continue;
    unvisited.push_back(c);
    const double diff = blurred[static_cast<std::size_t>(c)] - here;
    if (diff <= 0.0) continue;
    if (diff > best_diff) {
      best_diff = diff;
      best.assign(1, c);
    } else if (diff == best_diff) {
      best.push_back(c);
    }
  }
  if (best.size() == 1) return best.front();
  if (!best.empty()) return highest_belief(obs, best);
  // No ascent available: prefer fresh cells, otherwise re-enter greedily.
  return highest_belief(obs, unvisited.empty() ? nbrs : unvisited);
}

int lawnmower_index(Cell c, int n) {
  const int r = row_of(c, n);
  const int col = col_of(c, n);
  return r * n + (r % 2 == 0 ? col : n - 1 - col);
}

Cell lawnmower_cell(int index, int n) {
  const int r = index / n;
  const int offset = index % n;
  return cell_at(r, r % 2 == 0 ? offset : n - 1 - offset, n);
}

std::optional<Cell> lawnmower_step(const Observation& obs) {
  const int idx = lawnmower_index(obs.position, obs.n);
  if (idx + 1 >= obs.n * obs.n) return std::nullopt;
  return lawnmower_cell(idx + 1, obs.n);
}

double dijkstra_cost(const Observation& obs, Cell c, const DijkstraWeights& w) {
  const double cost = w.w_dist - w.w_prob * obs.belief[c] + (obs.is_visited(c) ? w.w_visited : 0.0);
  return std::max(cost, kMinEdgeCost);
}

std::optional<Cell> query_cell(const Observation& obs) {
  std::optional<Cell> best;
  for (Cell c = 0; c < obs.n * obs.n; ++c) {
    if (obs.is_visited(c)) continue;
    if (!best || obs.belief[c] > obs.belief[*best]) best = c;
  }
  return best;
}

std::optional<std::vector<Cell>> dijkstra_query(const Observation& obs, const DijkstraWeights& w) {
  if (w.w_dist < 0.0 || w.w_prob < 0.0 || w.w_visited < 0.0) {
    throw ParameterError("dijkstra_query: weights must be non-negative");
  }
  const auto goal = query_cell(obs);
  if (!goal) return std::nullopt;

  const int cells = obs.n * obs.n;
  std::vector<double> dist(static_cast<std::size_t>(cells), std::numeric_limits<double>::infinity());
  std::vector<Cell> pred(static_cast<std::size_t>(cells), -1);
  std::vector<std::uint8_t> done(static_cast<std::size_t>(cells), 0);
  using Item = std::pair<double, Cell>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  dist[obs.position] = 0.0;
  open.emplace(0.0, obs.position);
  while (!open.empty()) {
    const auto [d, u] = open.top();
    open.pop();
    if (done[u]) continue;
    done[u] = 1;
    if (u == *goal) break;
    for (Cell v : neighbors(u, obs.n, Connectivity::Eight)) {
      if (done[v]) continue;
      const double nd = d + dijkstra_cost(obs, v, w);
      if (nd < dist[v] || (nd == dist[v] && u < pred[v])) {
        dist[v] = nd;
        pred[v] = u;
        open.emplace(nd, v);
      }
    }
  }

  std::vector<Cell> path;
  for (Cell c = *goal; c != obs.position; c = pred[c]) path.push_back(c);
  std::reverse(path.begin(), path.end());
  return path;
}

std::string to_string(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::InformationSurfing: return "information_surfing";
    case PlannerKind::Lawnmower: return "lawnmower";
    case PlannerKind::DijkstraQuery: return "dijkstra_query";
  }
  return "information_surfing";
}

nlohmann::json planner_config_to_json(const PlannerConfig& cfg) {
  nlohmann::json j = {{"kind", to_string(cfg.kind)}};
  if (cfg.kind == PlannerKind::InformationSurfing) j["blur_radius"] = cfg.blur_radius;
  if (cfg.kind == PlannerKind::DijkstraQuery) {
    j["weights"] = {cfg.weights.w_dist, cfg.weights.w_prob, cfg.weights.w_visited};
  }
  return j;
}

PlannerConfig planner_config_from_json(const nlohmann::json& j) {
  try {
    PlannerConfig cfg;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "information_surfing" || kind == "is") {
      cfg.kind = PlannerKind::InformationSurfing;
    } else if (kind == "lawnmower") {
      cfg.kind = PlannerKind::Lawnmower;
    } else if (kind == "dijkstra_query" || kind == "dijkstra") {
      cfg.kind = PlannerKind::DijkstraQuery;
    } else {
      throw ConfigError("unknown planner kind '" + kind + "'");
    }
    cfg.blur_radius = j.value("blur_radius", cfg.blur_radius);
    if (cfg.blur_radius < 0) throw ConfigError("blur_radius must be >= 0");
    if (j.contains("weights")) {
      const auto& w = j.at("weights");
      if (w.is_array()) {
        const auto v = w.get<std::vector<double>>();
        if (v.size() != 3) throw ConfigError("weights must be [w_dist, w_prob, w_visited]");
        cfg.weights = {v[0], v[1], v[2]};
      } else {
        cfg.weights.w_dist = w.value("w_dist", cfg.weights.w_dist);
        cfg.weights.w_prob = w.value("w_prob", cfg.weights.w_prob);
        cfg.weights.w_visited = w.value("w_visited", cfg.weights.w_visited);
      }
      if (cfg.weights.w_dist < 0 || cfg.weights.w_prob < 0 || cfg.weights.w_visited < 0) {
        throw ConfigError("planner weights must be non-negative");
      }
    }
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("planner config: ") + e.what());
  }
}

namespace {

class InformationSurfingPlanner final : public Planner {
 public:
  explicit InformationSurfingPlanner(int radius) : radius_(radius) {}
  Connectivity connectivity() const override { return Connectivity::Four; }
  std::optional<Cell> next(const Observation& obs) const override { return is_step(obs, radius_); }
  std::string name() const override { return to_string(PlannerKind::InformationSurfing); }

 private:
  int radius_;
};

class LawnmowerPlanner final : public Planner {
 public:
  Connectivity connectivity() const override { return Connectivity::Four; }
  std::optional<Cell> next(const Observation& obs) const override { return lawnmower_step(obs); }
  std::string name() const override { return to_string(PlannerKind::Lawnmower); }
};

class DijkstraQueryPlanner final : public Planner {
 public:
  explicit DijkstraQueryPlanner(DijkstraWeights w) : weights_(w) {}
  Connectivity connectivity() const override { return Connectivity::Eight; }
  std::optional<Cell> next(const Observation& obs) const override {
    const auto path = dijkstra_query(obs, weights_);
    if (!path || path->empty()) return std::nullopt;
    return path->front();
  }
  std::string name() const override { return to_string(PlannerKind::DijkstraQuery); }

 private:
  DijkstraWeights weights_;
};

}  // namespace

std::unique_ptr<Planner> make_planner(const PlannerConfig& cfg) {
  switch (cfg.kind) {
    case PlannerKind::InformationSurfing:
      return std::make_unique<InformationSurfingPlanner>(cfg.blur_radius);
    case PlannerKind::Lawnmower:
      return std::make_unique<LawnmowerPlanner>();
    case PlannerKind::DijkstraQuery:
      return std::make_unique<DijkstraQueryPlanner>(cfg.weights);
  }
  throw ConfigError("unknown planner kind");
}

}  // namespace avs
