#include "avs/priors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string_view>

#include "avs/error.hpp"

namespace avs {

namespace {

constexpr double kLoadTolerance = 0.001;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_double(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size() && !tok.empty();
}

bool parse_int(std::string_view tok, int& out) {
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size() && !tok.empty();
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::vector<std::string> read_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "key=value" pairs from a header line.
int header_int(std::string_view field, std::string_view key, const char* what) {
  const auto eq = field.find('=');
  int v = 0;
  if (eq == std::string_view::npos || trim(field.substr(0, eq)) != key ||
      !parse_int(trim(field.substr(eq + 1)), v) || v < 1) {
    throw FormatError(std::string(what) + ": malformed header, expected '" + std::string(key) +
                      "=<positive int>'");
  }
  return v;
}

}  // namespace

FeatureField::FeatureField(int side, int d, std::vector<double> values)
    : n(side), dim(d), data(std::move(values)) {}

void validate(const FeatureField& f) {
  if (f.n < 1 || f.dim < 1) throw ParameterError("feature field needs n >= 1 and dim >= 1");
  if (f.data.size() != static_cast<std::size_t>(f.n) * f.n * f.dim) {
    throw ParameterError("feature field must have n*n rows of dim values");
  }
  for (double v : f.data) {
    if (!std::isfinite(v)) throw ParameterError("feature field contains a non-finite value");
  }
}

std::string to_string(Corruption c) {
  switch (c) {
    case Corruption::None: return "none";
    case Corruption::ModeSwap: return "mode_swap";
    case Corruption::UniformBlur: return "uniform_blur";
  }
  return "none";
}

Corruption corruption_from_string(const std::string& s) {
  if (s == "none") return Corruption::None;
  if (s == "mode_swap") return Corruption::ModeSwap;
  if (s == "uniform_blur") return Corruption::UniformBlur;
  throw ConfigError("unknown corruption '" + s + "'");
}

void validate(const ScenarioParams& p) {
  if (p.n < 2) throw ParameterError("scenario grid side must be >= 2");
  if (p.num_regions < 2 || p.num_regions > 4) throw ParameterError("num_regions must be in [2,4]");
  if (p.num_regions > p.n * p.n) throw ParameterError("more regions than cells");
  if (p.targets_total < 1) throw ParameterError("targets_total must be >= 1");
  if (!(p.target_region_bias >= 0.0 && p.target_region_bias <= 1.0)) {
    throw ParameterError("target_region_bias must be in [0,1]");
  }
}

Scenario synth_scenario(const ScenarioParams& p) {
  validate(p);
  const int n = p.n;
  const int cells = n * n;
  std::mt19937_64 rng(p.seed);

  // Voronoi centroids on distinct cells, spread out when possible.
  std::uniform_int_distribution<Cell> pick_cell(0, cells - 1);
  const double min_sep = n / (1.5 * std::sqrt(static_cast<double>(p.num_regions)));
  std::vector<Cell> centroids;
  for (int attempt = 0; static_cast<int>(centroids.size()) < p.num_regions; ++attempt) {
    const Cell c = pick_cell(rng);
    const bool relax = attempt > 1000;
    bool ok = true;
    for (Cell o : centroids) {
      const double dr = row_of(c, n) - row_of(o, n);
      const double dc = col_of(c, n) - col_of(o, n);
      const double d = std::hypot(dr, dc);
      if (d == 0.0 || (!relax && d < min_sep)) ok = false;
    }
    if (ok) centroids.push_back(c);
  }

  Scenario s;
  s.region_labels.resize(static_cast<std::size_t>(cells));
  for (Cell c = 0; c < cells; ++c) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int r = 0; r < p.num_regions; ++r) {
      const double dr = row_of(c, n) - row_of(centroids[r], n);
      const double dc = col_of(c, n) - col_of(centroids[r], n);
      const double d = dr * dr + dc * dc;
      if (d < best_d) {
        best_d = d;
        best = r;
      }
    }
    s.region_labels[static_cast<std::size_t>(c)] = best;
  }

  std::normal_distribution<double> score_noise(0.0, kScoreNoise);
  std::vector<double> gt(static_cast<std::size_t>(cells));
  for (Cell c = 0; c < cells; ++c) {
    const bool is_true = s.region_labels[c] == Scenario::kTrueRegion;
    gt[c] = std::clamp((is_true ? kHighScore : kLowScore) + score_noise(rng), 0.0, 1.0);
  }

  std::vector<Cell> true_pool;
  std::vector<Cell> other_pool;
  for (Cell c = 0; c < cells; ++c) {
    (s.region_labels[c] == Scenario::kTrueRegion ? true_pool : other_pool).push_back(c);
  }
  std::bernoulli_distribution in_true(p.target_region_bias);
  std::map<Cell, int> targets;
  for (int t = 0; t < p.targets_total; ++t) {
    auto& pool = in_true(rng) ? true_pool : other_pool;
    if (pool.empty()) {
      throw ParameterError("cannot place " + std::to_string(p.targets_total) +
                           " targets: region has too few cells");
    }
    std::uniform_int_distribution<std::size_t> idx(0, pool.size() - 1);
    const std::size_t k = idx(rng);
    targets[pool[k]] = 1;
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k));
  }

  const int dim = p.num_regions + 2;
  std::normal_distribution<double> feat_noise(0.0, kFeatureNoise);
  std::vector<double> feats(static_cast<std::size_t>(cells) * dim);
  const double denom = static_cast<double>(n - 1);
  for (Cell c = 0; c < cells; ++c) {
    double* row = feats.data() + static_cast<std::size_t>(c) * dim;
    for (int r = 0; r < p.num_regions; ++r) row[r] = r == s.region_labels[c] ? 1.0 : 0.0;
    row[p.num_regions] = row_of(c, n) / denom;
    row[p.num_regions + 1] = col_of(c, n) / denom;
    for (int d = 0; d < dim; ++d) row[d] += feat_noise(rng);
  }

  s.world.n = n;
  s.world.targets = std::move(targets);
  s.world.gt_score_map = ScoreMap(n, gt);
  s.world.seed = p.seed;
  s.features = FeatureField(n, dim, std::move(feats));

  switch (p.corruption) {
    case Corruption::None:
      s.base = s.world.gt_score_map;
      break;
    case Corruption::ModeSwap: {
      // Keep the per-cell noise, exchange the high and low levels.
      std::vector<double> base(gt);
      for (Cell c = 0; c < cells; ++c) {
        const int r = s.region_labels[c];
        if (r == Scenario::kTrueRegion) base[c] = std::clamp(gt[c] - kHighScore + kLowScore, 0.0, 1.0);
        if (r == Scenario::kDecoyRegion) base[c] = std::clamp(gt[c] - kLowScore + kHighScore, 0.0, 1.0);
      }
      s.base = ScoreMap(n, std::move(base));
      break;
    }
    case Corruption::UniformBlur:
      s.base = ScoreMap::uniform(n, 0.5);
      break;
  }
  return s;
}

ScoreMap parse_score_map(const std::string& text) {
  const auto lines = read_lines(text);
  if (lines.empty()) throw FormatError("score map: empty file");
  const int n = header_int(trim(lines[0]), "n", "score map");
  if (lines.size() - 1 != static_cast<std::size_t>(n)) {
    throw FormatError("score map: expected " + std::to_string(n) + " rows after header, found " +
                      std::to_string(lines.size() - 1));
  }
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r) {
    const auto fields = split(lines[r + 1], ',');
    if (fields.size() != static_cast<std::size_t>(n)) {
      throw FormatError("score map: row " + std::to_string(r) + " has " +
                        std::to_string(fields.size()) + " columns, expected " + std::to_string(n));
    }
    for (int c = 0; c < n; ++c) {
      double v = 0.0;
      if (!parse_double(fields[c], v) || !std::isfinite(v)) {
        throw FormatError("score map: non-numeric value at row " + std::to_string(r) +
                          ", column " + std::to_string(c));
      }
      if (v < -kLoadTolerance || v > 1.0 + kLoadTolerance) {
        throw FormatError("score map: value " + std::string(fields[c]) + " at row " +
                          std::to_string(r) + ", column " + std::to_string(c) +
                          " outside [0,1]");
      }
      values.push_back(std::clamp(v, 0.0, 1.0));
    }
  }
  return ScoreMap(n, std::move(values));
}

ScoreMap load_score_map(const std::filesystem::path& path) {
  try {
    return parse_score_map(slurp(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string format_score_map(const ScoreMap& map) {
  std::string out = "n=" + std::to_string(map.n) + "\n";
  for (int r = 0; r < map.n; ++r) {
    for (int c = 0; c < map.n; ++c) {
      if (c) out += ',';
      out += format_double(map[cell_at(r, c, map.n)]);
    }
    out += '\n';
  }
  return out;
}

void save_score_map(const ScoreMap& map, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write score map " + path.string());
  out << format_score_map(map);
  if (!out) throw Error("failed writing score map " + path.string());
}

FeatureField load_features(const std::filesystem::path& path) {
  const auto lines = read_lines(slurp(path));
  const std::string where = "features " + path.string();
  if (lines.empty()) throw FormatError(where + ": empty file");
  const auto head = split(lines[0], ',');
  if (head.size() != 2) throw FormatError(where + ": header must be 'n=<int>,dim=<int>'");
  const int n = header_int(head[0], "n", where.c_str());
  const int dim = header_int(head[1], "dim", where.c_str());
  const std::size_t rows = static_cast<std::size_t>(n) * n;
  if (lines.size() - 1 != rows) {
    throw FormatError(where + ": expected " + std::to_string(rows) + " rows, found " +
                      std::to_string(lines.size() - 1));
  }
  std::vector<double> data;
  data.reserve(rows * dim);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto fields = split(lines[r + 1], ',');
    if (fields.size() != static_cast<std::size_t>(dim)) {
      throw FormatError(where + ": row " + std::to_string(r) + " has wrong column count");
    }
    for (int c = 0; c < dim; ++c) {
      double v = 0.0;
      if (!parse_double(fields[c], v) || !std::isfinite(v)) {
        throw FormatError(where + ": non-numeric value at row " + std::to_string(r) +
                          ", column " + std::to_string(c));
      }
      data.push_back(v);
    }
  }
  return FeatureField(n, dim, std::move(data));
}

void save_features(const FeatureField& f, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write features " + path.string());
  out << "n=" << f.n << ",dim=" << f.dim << '\n';
  for (int i = 0; i < f.num_points(); ++i) {
    for (int d = 0; d < f.dim; ++d) {
      if (d) out << ',';
      out << format_double(f.row(i)[d]);
    }
    out << '\n';
  }
}

double map_quality(const ScoreMap& pred, const GridWorld& world) {
  if (pred.n != world.n) throw ParameterError("map_quality: map and world sizes differ");
  const int total = world.total_targets();
  if (total == 0) throw UndefinedQualityError("map_quality: world has no targets");
  double sum = 0.0;
  for (const auto& [cell, count] : world.targets) sum += count * pred[cell];
  return sum / total;
}

nlohmann::json params_to_json(const ScenarioParams& p) {
  return {{"n", p.n},
          {"num_regions", p.num_regions},
          {"targets_total", p.targets_total},
          {"target_region_bias", p.target_region_bias},
          {"corruption", to_string(p.corruption)},
          {"seed", p.seed}};
}

ScenarioParams params_from_json(const nlohmann::json& j) {
  try {
    ScenarioParams p;
    p.n = j.value("n", p.n);
    p.num_regions = j.value("num_regions", p.num_regions);
    p.targets_total = j.value("targets_total", p.targets_total);
    p.target_region_bias = j.value("target_region_bias", p.target_region_bias);
    p.corruption = corruption_from_string(j.value("corruption", std::string("none")));
    p.seed = j.value("seed", p.seed);
    validate(p);
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scenario params: ") + e.what());
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("scenario params: ") + e.what());
  }
}

}  // namespace avs
