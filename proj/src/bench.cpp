#include "avs/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "avs/error.hpp"

namespace avs {

namespace {

constexpr std::uint64_t kStartCellSalt = 0x5f3759df2c1b3c6dULL;

std::vector<double> min_max(const ScoreMap& m) {
  const auto [lo, hi] = std::minmax_element(m.values.begin(), m.values.end());
  std::vector<double> out(m.values.size(), 0.0);
  const double range = *hi - *lo;
  if (range <= 0.0) return out;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (m.values[i] - *lo) / range;
  return out;
}

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex16(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fraction_key(double f) {
  std::ostringstream ss;
  ss << f;
  return ss.str();
}

}  // namespace

std::optional<double> EpisodeResult::rmse_at_fraction(double f) const {
  for (const auto& [frac, value] : rmse_at) {
    if (frac == f) return value;
  }
  return std::nullopt;
}

std::string hash_world(const GridWorld& world) { return hex16(fnv1a(world_to_json(world).dump())); }

std::string hash_inputs(const GridWorld& world, const ScoreMap& base, Cell start) {
  std::uint64_t h = fnv1a(world_to_json(world).dump());
  h = fnv1a(format_score_map(base), h);
  h = fnv1a(std::to_string(start), h);
  return hex16(h);
}

std::string file_stem_for(const std::string& id) {
  std::string out = id;
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return out;
}

EpisodeInputs load_inputs(const EpisodeConfig& cfg) {
  EpisodeInputs in;
  if (cfg.scenario) {
    Scenario s = synth_scenario(*cfg.scenario);
    in.world = std::move(s.world);
    in.base = std::move(s.base);
    in.features = std::move(s.features);
    return in;
  }
  if (cfg.world_path.empty()) throw ConfigError("episode needs a scenario or a world file");
  in.world = load_world(cfg.world_path);
  in.base = cfg.base_map_path.empty() ? in.world.gt_score_map : load_score_map(cfg.base_map_path);
  if (in.base.n != in.world.n) throw ConfigError("base map size does not match world");
  if (!cfg.features_path.empty()) {
    in.features = load_features(cfg.features_path);
    if (in.features->n != in.world.n) throw ConfigError("feature field size does not match world");
  }
  return in;
}

Cell resolve_start_cell(const EpisodeConfig& cfg, int n) {
  if (cfg.start_cell) {
    if (!in_bounds(*cfg.start_cell, n)) throw ConfigError("start cell out of bounds");
    return *cfg.start_cell;
  }
  if (cfg.planner.kind == PlannerKind::Lawnmower) return 0;
  std::mt19937_64 rng(cfg.seed ^ kStartCellSalt);
  std::uniform_int_distribution<Cell> pick(0, n * n - 1);
  return pick(rng);
}

double rmse(const ScoreMap& pred, const ScoreMap& gt) {
  if (pred.n != gt.n || pred.size() != gt.size()) throw ParameterError("rmse: map sizes differ");
  if (pred.size() == 0) throw ParameterError("rmse: empty maps");
  const auto a = min_max(pred);
  const auto b = min_max(gt);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s / static_cast<double>(a.size()));
}

EpisodeResult run_episode(const EpisodeConfig& cfg) { return run_episode(cfg, load_inputs(cfg)); }

EpisodeResult run_episode(const EpisodeConfig& cfg, const EpisodeInputs& inputs) {
  const auto planner = make_planner(cfg.planner);
  return run_episode(cfg, inputs, *planner);
}

EpisodeResult run_episode(const EpisodeConfig& cfg, const EpisodeInputs& inputs,
                          const Planner& planner) {
  if (cfg.budget < 0) throw ConfigError("budget must be >= 0");
  const GridWorld& world = inputs.world;
  const int n = world.n;
  const int cells = n * n;

  EpisodeResult res;
  res.id = cfg.name;
  res.planner = planner.name();
  res.tta = cfg.tta.has_value();
  res.seed = cfg.seed;
  res.budget = cfg.budget;
  res.start_cell = resolve_start_cell(cfg, n);
  res.start_overridden = !cfg.start_cell && cfg.planner.kind == PlannerKind::Lawnmower;
  res.targets_total = world.total_targets();
  res.initial_quality = res.targets_total > 0 ? map_quality(inputs.base, world) : 0.0;
  res.world_hash = hash_world(world);
  res.inputs_hash = hash_inputs(world, inputs.base, res.start_cell);

  std::optional<IntensityModel> model;
  std::optional<MeasurementLog> log;
  if (cfg.tta) {
    validate(*cfg.tta);
    if (!inputs.features) throw ConfigError("TTA needs a feature field");
    auto part = std::make_shared<const RegionPartition>(partition(*inputs.features, cfg.seed));
    res.regions = part->k;
    model = make_intensity_model(inputs.base, part);
    log.emplace(part);
  }

  ScoreMap belief = inputs.base;
  AgentState state = start_state(n, res.start_cell, cfg.budget);
  std::vector<std::uint8_t> sensed(static_cast<std::size_t>(cells), 0);
  int last_event = 0;

  // Checkpoint steps; the step-0 checkpoint is taken before any TTA event.
  std::vector<std::pair<double, int>> checkpoints;
  for (double f : cfg.checkpoints) {
    if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("checkpoint fractions must lie in [0,1]");
    checkpoints.emplace_back(f, static_cast<int>(std::lround(f * cfg.budget)));
  }
  std::vector<std::optional<double>> rmse_values(checkpoints.size());
  auto record = [&](int step, bool before_tta) {
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
      if (rmse_values[i] || checkpoints[i].second != step) continue;
      const bool first = checkpoints[i].first == 0.0;
      if (before_tta != first) continue;
      rmse_values[i] = rmse(belief, world.gt_score_map);
    }
  };

  auto process = [&](Cell cell, int step) {
    const Measurement m = sense(world, cell, step);
    const bool fresh = !sensed[static_cast<std::size_t>(cell)];
    sensed[static_cast<std::size_t>(cell)] = 1;
    if (fresh && m.positive()) {
      res.targets_found += m.positive_count;
      if (!res.steps_to_first) {
        res.steps_to_first = step;
        res.found_on_start = step == 0;
      }
    }
    record(step, true);
    if (!model) return;
    log->add(m);
    const bool detection = fresh && m.positive();
    if (detection || step - last_event >= cfg.tta->cadence) {
      model = tta_update(*model, *log, *cfg.tta);
      belief = lambda_map(*model);
      res.tta_event_steps.push_back(step);
      last_event = step;
    }
  };

  process(res.start_cell, 0);
  record(0, false);
  while (state.steps_used < state.budget) {
    if (cfg.stop_when_all_found && res.targets_total > 0 && res.targets_found >= res.targets_total) break;
    Observation obs{n, state.position, state.visited, belief, remaining_budget(state)};
    const auto next = planner.next(obs);
    if (!next) {
      res.coverage_complete = true;
      break;
    }
    state = apply_action(state, *next, planner.connectivity());
    process(state.position, state.steps_used);
    record(state.steps_used, false);
  }
  // Checkpoints past an early termination see the final belief.
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (!rmse_values[i]) rmse_values[i] = rmse(belief, world.gt_score_map);
    res.rmse_at.emplace_back(checkpoints[i].first, *rmse_values[i]);
  }

  res.found_fraction =
      res.targets_total > 0 ? static_cast<double>(res.targets_found) / res.targets_total : 0.0;
  res.trajectory = std::move(state.trajectory);
  res.final_lambda = std::move(belief);
  return res;
}

BucketReport percentile_buckets(const std::vector<std::pair<double, EpisodeResult>>& results,
                                const std::vector<double>& fractions) {
  if (results.empty()) throw ParameterError("percentile_buckets: no episodes");
  BucketReport rep;
  rep.total = results.size();
  std::vector<std::size_t> order(results.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return results[a].first < results[b].first; });
  double total = 0.0;
  for (const auto& [q, r] : results) total += r.found_fraction;
  rep.overall_mean_found = total / static_cast<double>(results.size());
  for (double f : fractions) {
    if (!(f > 0.0 && f <= 1.0)) throw ParameterError("percentile_buckets: fraction must be in (0,1]");
    // Guard against f*N landing a hair above an integer.
    const auto size = static_cast<std::size_t>(
        std::ceil(f * static_cast<double>(results.size()) - 1e-9));
    Bucket b;
    b.fraction = f;
    b.size = std::max<std::size_t>(size, 1);
    std::vector<std::size_t> members(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(b.size));
    double s = 0.0;
    for (std::size_t idx : members) s += results[idx].second.found_fraction;
    b.mean_found = s / static_cast<double>(b.size);
    rep.buckets.push_back(b);
    rep.members.push_back(std::move(members));
  }
  return rep;
}

double sign_test_p(int wins, int losses) {
  const int trials = wins + losses;
  if (trials == 0) return 1.0;
  // Sum the binomial upper tail in log space.
  double p = 0.0;
  for (int x = wins; x <= trials; ++x) {
    const double log_term = std::lgamma(trials + 1.0) - std::lgamma(x + 1.0) -
                            std::lgamma(trials - x + 1.0) - trials * std::log(2.0);
    p += std::exp(log_term);
  }
  return std::min(p, 1.0);
}

namespace {

struct EpisodeJob {
  std::size_t template_index = 0;
  std::uint64_t seed = 0;
  bool tta = false;
  EpisodeConfig cfg;
};

std::vector<EpisodeJob> expand(const SuiteConfig& suite) {
  std::vector<EpisodeJob> jobs;
  for (std::size_t t = 0; t < suite.templates.size(); ++t) {
    for (std::uint64_t seed : suite.seeds) {
      for (int arm = 0; arm < 2; ++arm) {
        const bool tta = arm == 0;
        if ((tta && !suite.arm_tta) || (!tta && !suite.arm_no_tta)) continue;
        EpisodeJob job;
        job.template_index = t;
        job.seed = seed;
        job.tta = tta;
        job.cfg = suite.templates[t];
        job.cfg.seed = seed;
        if (job.cfg.scenario) job.cfg.scenario->seed = seed;
        if (tta && !job.cfg.tta) job.cfg.tta = TtaConfig{};
        if (!tta) job.cfg.tta.reset();
        job.cfg.name = suite.templates[t].name + "/seed-" + std::to_string(seed) + "/" +
                       (tta ? "tta" : "no_tta");
        jobs.push_back(std::move(job));
      }
    }
  }
  return jobs;
}

ArmSummary summarize_arm(const std::string& name, bool tta,
                         const std::vector<const EpisodeResult*>& eps,
                         const std::vector<double>& fractions) {
  ArmSummary s;
  s.template_name = name;
  s.tta = tta;
  s.episodes = eps.size();
  if (eps.empty()) return s;
  std::vector<std::pair<double, EpisodeResult>> with_quality;
  with_quality.reserve(eps.size());
  for (const auto* e : eps) with_quality.emplace_back(e->initial_quality, *e);
  const BucketReport br = percentile_buckets(with_quality, fractions);
  s.found_all = br.overall_mean_found;
  s.found_buckets = br.buckets;

  std::map<double, double> rmse_sum;
  double steps_sum = 0.0;
  for (const auto* e : eps) {
    for (const auto& [f, v] : e->rmse_at) rmse_sum[f] += v;
    if (e->steps_to_first) {
      steps_sum += *e->steps_to_first;
      ++s.episodes_with_find;
    }
  }
  for (const auto& [f, total] : rmse_sum) {
    s.mean_rmse.emplace_back(f, total / static_cast<double>(eps.size()));
  }
  if (s.episodes_with_find > 0) s.mean_steps_to_first = steps_sum / static_cast<double>(s.episodes_with_find);
  return s;
}

}  // namespace

SuiteReport run_suite(const SuiteConfig& suite, int jobs) {
  const std::vector<EpisodeJob> work = expand(suite);
  std::vector<std::optional<EpisodeResult>> results(work.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  std::string failed_id;
  std::atomic<bool> abort{false};

  auto worker = [&] {
    for (;;) {
      if (abort.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= work.size()) return;
      try {
        results[i] = run_episode(work[i].cfg);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) {
          first_error = std::current_exception();
          failed_id = work[i].cfg.name;
        }
        abort = true;
        return;
      }
    }
  };

  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(work.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) {
    try {
      std::rethrow_exception(first_error);
    } catch (const ConfigError& e) {
      throw ConfigError("episode " + failed_id + ": " + e.what());
    } catch (const std::exception& e) {
      throw Error("episode " + failed_id + ": " + e.what());
    }
  }

  SuiteReport rep;
  rep.episodes.reserve(work.size());
  for (auto& r : results) rep.episodes.push_back(std::move(*r));

  for (std::size_t t = 0; t < suite.templates.size(); ++t) {
    const std::string& name = suite.templates[t].name;
    std::map<std::uint64_t, const EpisodeResult*> on;
    std::map<std::uint64_t, const EpisodeResult*> off;
    std::vector<const EpisodeResult*> on_list;
    std::vector<const EpisodeResult*> off_list;
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (work[i].template_index != t) continue;
      if (work[i].tta) {
        on[work[i].seed] = &rep.episodes[i];
        on_list.push_back(&rep.episodes[i]);
      } else {
        off[work[i].seed] = &rep.episodes[i];
        off_list.push_back(&rep.episodes[i]);
      }
    }
    if (suite.arm_tta) rep.arms.push_back(summarize_arm(name, true, on_list, suite.bucket_fractions));
    if (suite.arm_no_tta) rep.arms.push_back(summarize_arm(name, false, off_list, suite.bucket_fractions));
    if (suite.arm_tta && suite.arm_no_tta) {
      PairedSummary p;
      p.template_name = name;
      double diff = 0.0;
      for (const auto& [seed, a] : on) {
        const EpisodeResult* b = off.at(seed);
        const double d = a->found_fraction - b->found_fraction;
        diff += d;
        if (d > 0) {
          ++p.wins;
        } else if (d < 0) {
          ++p.losses;
        } else {
          ++p.ties;
        }
      }
      p.mean_found_diff = on.empty() ? 0.0 : diff / static_cast<double>(on.size());
      p.sign_test_p = sign_test_p(p.wins, p.losses);
      rep.paired.push_back(p);
    }
  }
  return rep;
}

nlohmann::json episode_to_json(const EpisodeResult& r) {
  nlohmann::json rmse_obj = nlohmann::json::object();
  for (const auto& [f, v] : r.rmse_at) rmse_obj[fraction_key(f)] = v;
  return {{"id", r.id},
          {"planner", r.planner},
          {"tta", r.tta},
          {"seed", r.seed},
          {"budget", r.budget},
          {"start_cell", r.start_cell},
          {"start_overridden", r.start_overridden},
          {"targets_found", r.targets_found},
          {"targets_total", r.targets_total},
          {"found_fraction", r.found_fraction},
          {"steps_to_first", r.steps_to_first ? nlohmann::json(*r.steps_to_first) : nlohmann::json()},
          {"found_on_start", r.found_on_start},
          {"initial_quality", r.initial_quality},
          {"rmse_at", rmse_obj},
          {"regions", r.regions},
          {"coverage_complete", r.coverage_complete},
          {"tta_event_steps", r.tta_event_steps},
          {"trajectory", r.trajectory},
          {"world_hash", r.world_hash},
          {"inputs_hash", r.inputs_hash}};
}

namespace {

nlohmann::json arm_to_json(const ArmSummary& a) {
  nlohmann::json buckets = nlohmann::json::array();
  for (const auto& b : a.found_buckets) {
    buckets.push_back({{"fraction", b.fraction}, {"size", b.size}, {"mean_found_pct", 100.0 * b.mean_found}});
  }
  nlohmann::json rmse_obj = nlohmann::json::object();
  for (const auto& [f, v] : a.mean_rmse) rmse_obj[fraction_key(f)] = 100.0 * v;
  return {{"template", a.template_name},
          {"tta", a.tta},
          {"episodes", a.episodes},
          {"found_pct_all", 100.0 * a.found_all},
          {"found_pct_buckets", buckets},
          {"rmse_pct", rmse_obj},
          {"mean_steps_to_first",
           a.mean_steps_to_first ? nlohmann::json(*a.mean_steps_to_first) : nlohmann::json()},
          {"episodes_with_find", a.episodes_with_find}};
}

std::string fixed(double v, int prec = 1) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(prec) << v;
  return ss.str();
}

}  // namespace

nlohmann::json report_to_json(const SuiteReport& rep) {
  nlohmann::json arms = nlohmann::json::array();
  for (const auto& a : rep.arms) arms.push_back(arm_to_json(a));
  nlohmann::json paired = nlohmann::json::array();
  for (const auto& p : rep.paired) {
    paired.push_back({{"template", p.template_name},
                      {"wins", p.wins},
                      {"losses", p.losses},
                      {"ties", p.ties},
                      {"mean_found_diff_pct", 100.0 * p.mean_found_diff},
                      {"sign_test_p", p.sign_test_p}});
  }
  return {{"episodes", rep.episodes.size()}, {"arms", arms}, {"paired", paired}};
}

std::string report_to_text(const SuiteReport& rep) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header = {"template", "arm", "N", "found% all"};
  const std::vector<Bucket> probe = rep.arms.empty() ? std::vector<Bucket>{} : rep.arms.front().found_buckets;
  for (const auto& b : probe) header.push_back("found% bot-" + fixed(100.0 * b.fraction, 0) + "%");
  header.insert(header.end(), {"RMSE first", "RMSE mid", "RMSE last", "steps-to-first"});
  rows.push_back(header);
  for (const auto& a : rep.arms) {
    std::vector<std::string> row = {a.template_name, a.tta ? "TTA" : "no TTA",
                                    std::to_string(a.episodes), fixed(100.0 * a.found_all)};
    for (const auto& b : a.found_buckets) row.push_back(fixed(100.0 * b.mean_found));
    auto rmse_for = [&](double f) {
      for (const auto& [ff, v] : a.mean_rmse) {
        if (ff == f) return fixed(100.0 * v);
      }
      return std::string("-");
    };
    row.push_back(rmse_for(0.0));
    row.push_back(rmse_for(0.5));
    row.push_back(rmse_for(1.0));
    row.push_back(a.mean_steps_to_first ? fixed(*a.mean_steps_to_first) : "-");
    rows.push_back(std::move(row));
  }
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  std::ostringstream out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << "  ";
      out << (c < 3 ? std::left : std::right) << std::setw(static_cast<int>(widths[c])) << row[c];
    }
    out << '\n';
  }
  for (const auto& p : rep.paired) {
    out << p.template_name << ": TTA vs no TTA wins=" << p.wins << " losses=" << p.losses
        << " ties=" << p.ties << " mean diff=" << fixed(100.0 * p.mean_found_diff, 2)
        << " pts, sign test p=" << std::setprecision(4) << p.sign_test_p << '\n';
  }
  return out.str();
}

std::string episodes_to_jsonl(const SuiteReport& rep) {
  std::string out;
  for (const auto& e : rep.episodes) {
    out += episode_to_json(e).dump();
    out += '\n';
  }
  return out;
}

void write_suite_outputs(const SuiteReport& rep, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir / "maps");
  {
    std::ofstream f(out_dir / "episodes.jsonl", std::ios::binary | std::ios::trunc);
    f << episodes_to_jsonl(rep);
  }
  {
    std::ofstream f(out_dir / "report.json", std::ios::binary | std::ios::trunc);
    f << report_to_json(rep).dump(2) << '\n';
  }
  {
    std::ofstream f(out_dir / "report.txt", std::ios::binary | std::ios::trunc);
    f << report_to_text(rep);
  }
  for (const auto& e : rep.episodes) {
    save_score_map(e.final_lambda, out_dir / "maps" / (file_stem_for(e.id) + ".csv"));
  }
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    nlohmann::json j;
    in >> j;
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

EpisodeConfig episode_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path = p;
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    return path;
  };
  try {
    EpisodeConfig cfg;
    cfg.name = j.value("name", cfg.name);
    if (j.contains("scenario")) {
      cfg.scenario = params_from_json(j.at("scenario"));
    } else if (j.contains("world")) {
      cfg.world_path = resolve(j.at("world").get<std::string>());
      if (j.contains("base_map")) cfg.base_map_path = resolve(j.at("base_map").get<std::string>());
      if (j.contains("features")) cfg.features_path = resolve(j.at("features").get<std::string>());
    } else {
      throw ConfigError("episode config needs 'scenario' or 'world'");
    }
    if (j.contains("planner")) cfg.planner = planner_config_from_json(j.at("planner"));
    if (j.contains("tta")) {
      const auto& t = j.at("tta");
      if (t.is_object()) {
        cfg.tta = tta_config_from_json(t);
      } else if (t.is_boolean() && t.get<bool>()) {
        cfg.tta = TtaConfig{};
      } else if (!t.is_null() && !t.is_boolean()) {
        throw ConfigError("'tta' must be an object, a boolean or null");
      }
    }
    cfg.budget = j.value("budget", cfg.budget);
    if (cfg.budget < 0) throw ConfigError("budget must be >= 0");
    if (j.contains("start_cell") && !j.at("start_cell").is_null()) {
      cfg.start_cell = j.at("start_cell").get<Cell>();
    }
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("checkpoints")) cfg.checkpoints = j.at("checkpoints").get<std::vector<double>>();
    for (double f : cfg.checkpoints) {
      if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("checkpoint fractions must lie in [0,1]");
    }
    cfg.stop_when_all_found = j.value("stop_when_all_found", cfg.stop_when_all_found);
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("episode config: ") + e.what());
  }
}

nlohmann::json episode_config_to_json(const EpisodeConfig& cfg) {
  nlohmann::json j = {{"name", cfg.name},
                      {"planner", planner_config_to_json(cfg.planner)},
                      {"budget", cfg.budget},
                      {"seed", cfg.seed},
                      {"checkpoints", cfg.checkpoints},
                      {"stop_when_all_found", cfg.stop_when_all_found}};
  if (cfg.scenario) {
    j["scenario"] = params_to_json(*cfg.scenario);
  } else {
    j["world"] = cfg.world_path.string();
    if (!cfg.base_map_path.empty()) j["base_map"] = cfg.base_map_path.string();
    if (!cfg.features_path.empty()) j["features"] = cfg.features_path.string();
  }
  j["tta"] = cfg.tta ? tta_config_to_json(*cfg.tta) : nlohmann::json();
  j["start_cell"] = cfg.start_cell ? nlohmann::json(*cfg.start_cell) : nlohmann::json();
  return j;
}

SuiteConfig suite_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  try {
    SuiteConfig s;
    for (const auto& t : j.at("templates")) s.templates.push_back(episode_config_from_json(t, base_dir));
    if (s.templates.empty()) throw ConfigError("suite needs at least one template");
    const auto& seeds = j.at("seeds");
    if (seeds.is_array()) {
      s.seeds = seeds.get<std::vector<std::uint64_t>>();
    } else {
      const auto start = seeds.value("start", std::uint64_t{0});
      const auto count = seeds.at("count").get<std::uint64_t>();
      for (std::uint64_t i = 0; i < count; ++i) s.seeds.push_back(start + i);
    }
    if (s.seeds.empty()) throw ConfigError("suite needs at least one seed");
    if (j.contains("arms")) {
      const auto arms = j.at("arms").get<std::vector<std::string>>();
      s.arm_tta = std::find(arms.begin(), arms.end(), "tta") != arms.end();
      s.arm_no_tta = std::find(arms.begin(), arms.end(), "no_tta") != arms.end();
      if (!s.arm_tta && !s.arm_no_tta) throw ConfigError("arms must include 'tta' and/or 'no_tta'");
    }
    if (j.contains("bucket_fractions")) s.bucket_fractions = j.at("bucket_fractions").get<std::vector<double>>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("suite config: ") + e.what());
  }
}

}  // namespace avs
