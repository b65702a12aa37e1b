#include "avs/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "avs/error.hpp"

namespace avs {

void validate(const TtaConfig& c) {
  if (!(c.alpha_pos > 0.0)) throw ParameterError("tta: alpha_pos must be > 0");
  if (!(c.beta > 0.0)) throw ParameterError("tta: beta must be > 0");
  if (!(c.gamma_exp >= 0.0)) throw ParameterError("tta: gamma_exp must be >= 0");
  if (!(c.lr_min <= c.lr_max)) throw ParameterError("tta: lr_min must be <= lr_max");
  if (c.cadence < 1) throw ParameterError("tta: cadence must be >= 1");
  if (c.steps_per_event < 1) throw ParameterError("tta: steps_per_event must be >= 1");
}

nlohmann::json tta_config_to_json(const TtaConfig& c) {
  return {{"alpha_pos", c.alpha_pos},
          {"beta", c.beta},
          {"gamma_exp", c.gamma_exp},
          {"lr_min", c.lr_min},
          {"lr_max", c.lr_max},
          {"optimizer", c.optimizer == Optimizer::Adam ? "adam" : "gradient_ascent"},
          {"adam", {{"beta1", c.adam.beta1}, {"beta2", c.adam.beta2}, {"epsilon", c.adam.epsilon}}},
          {"steps_per_event", c.steps_per_event},
          {"cadence", c.cadence},
          {"reset_to_base", c.reset_to_base}};
}

TtaConfig tta_config_from_json(const nlohmann::json& j) {
  try {
    TtaConfig c;
    c.alpha_pos = j.value("alpha_pos", c.alpha_pos);
    c.beta = j.value("beta", c.beta);
    c.gamma_exp = j.value("gamma_exp", c.gamma_exp);
    c.lr_min = j.value("lr_min", c.lr_min);
    c.lr_max = j.value("lr_max", c.lr_max);
    const std::string opt = j.value("optimizer", std::string("gradient_ascent"));
    if (opt == "adam") {
      c.optimizer = Optimizer::Adam;
    } else if (opt == "gradient_ascent") {
      c.optimizer = Optimizer::GradientAscent;
    } else {
      throw ConfigError("tta: unknown optimizer '" + opt + "'");
    }
    if (j.contains("adam")) {
      const auto& a = j.at("adam");
      c.adam.beta1 = a.value("beta1", c.adam.beta1);
      c.adam.beta2 = a.value("beta2", c.adam.beta2);
      c.adam.epsilon = a.value("epsilon", c.adam.epsilon);
    }
    c.steps_per_event = j.value("steps_per_event", c.steps_per_event);
    c.cadence = j.value("cadence", c.cadence);
    c.reset_to_base = j.value("reset_to_base", c.reset_to_base);
    validate(c);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("tta config: ") + e.what());
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("tta config: ") + e.what());
  }
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double logit(double p) { return std::log(p) - std::log1p(-p); }

IntensityModel make_intensity_model(const ScoreMap& base,
                                    std::shared_ptr<const RegionPartition> partition) {
  validate(base);
  if (!partition || partition->labels.size() != base.size()) {
    throw ParameterError("intensity model: partition does not cover the score map");
  }
  IntensityModel m;
  m.n = base.n;
  m.base_logits.reserve(base.size());
  for (double v : base.values) {
    m.base_logits.push_back(logit(std::clamp(v, kEpsilonClamp, 1.0 - kEpsilonClamp)));
  }
  m.offsets.assign(static_cast<std::size_t>(partition->k), 0.0);
  m.adam_m.assign(m.offsets.size(), 0.0);
  m.adam_v.assign(m.offsets.size(), 0.0);
  m.partition = std::move(partition);
  return m;
}

double lambda_at(const IntensityModel& m, Cell c) {
  return sigmoid(m.base_logits[static_cast<std::size_t>(c)] + m.offsets[m.partition->region_of(c)]);
}

ScoreMap lambda_map(const IntensityModel& m) {
  std::vector<double> vals(m.base_logits.size());
  for (std::size_t c = 0; c < vals.size(); ++c) vals[c] = lambda_at(m, static_cast<Cell>(c));
  return ScoreMap(m.n, std::move(vals));
}

MeasurementLog::MeasurementLog(std::shared_ptr<const RegionPartition> partition)
    : partition_(std::move(partition)) {
  if (!partition_) throw ParameterError("measurement log needs a partition");
  index_of_cell_.assign(partition_->labels.size(), -1);
  observed_.assign(static_cast<std::size_t>(partition_->k), 0);
}

bool MeasurementLog::add(const Measurement& m) {
  if (m.cell < 0 || static_cast<std::size_t>(m.cell) >= index_of_cell_.size()) {
    throw BoundsError("measurement cell " + std::to_string(m.cell) + " out of bounds");
  }
  int& idx = index_of_cell_[static_cast<std::size_t>(m.cell)];
  if (idx >= 0) {
    Measurement& prev = entries_[static_cast<std::size_t>(idx)];
    if (!prev.positive() && m.positive()) {
      --negatives_;
      ++positives_;
      prev = m;
    }
    return false;
  }
  idx = static_cast<int>(entries_.size());
  entries_.push_back(m);
  ++observed_[partition_->region_of(m.cell)];
  (m.positive() ? positives_ : negatives_) += 1;
  return true;
}

double alpha_neg(int observed, int region_size, double beta, double gamma_exp) {
  if (region_size <= 0) throw EmptyRegionError("alpha_neg: region has no cells");
  if (observed < 0 || observed > region_size) {
    throw ParameterError("alpha_neg: observed count must lie in [0, region size]");
  }
  const double ratio = static_cast<double>(observed) / region_size;
  return std::min(beta * std::pow(ratio, gamma_exp), 1.0);
}

namespace {

void check_compatible(const IntensityModel& m, const MeasurementLog& log) {
  if (m.partition->labels.size() != log.partition().labels.size() ||
      m.partition->k != log.partition().k) {
    throw ParameterError("model and log use different partitions");
  }
}

double negative_weight(const MeasurementLog& log, int region, const TtaConfig& cfg) {
  return alpha_neg(log.observed()[region], log.partition().region_sizes[region], cfg.beta,
                   cfg.gamma_exp);
}

}  // namespace

double sppp_loss(const IntensityModel& m, const MeasurementLog& log, const TtaConfig& cfg) {
  check_compatible(m, log);
  double loss = 0.0;
  for (const Measurement& e : log.entries()) {
    const double lam = lambda_at(m, e.cell);
    if (e.positive()) {
      loss += cfg.alpha_pos * std::log(lam);
    } else {
      loss -= negative_weight(log, m.partition->region_of(e.cell), cfg) * lam;
    }
  }
  return loss;
}

std::vector<double> sppp_grad(const IntensityModel& m, const MeasurementLog& log,
                              const TtaConfig& cfg) {
  check_compatible(m, log);
  std::vector<double> grad(m.offsets.size(), 0.0);
  for (const Measurement& e : log.entries()) {
    const int r = m.partition->region_of(e.cell);
    const double lam = lambda_at(m, e.cell);
    if (e.positive()) {
      grad[r] += cfg.alpha_pos * (1.0 - lam);
    } else {
      grad[r] -= negative_weight(log, r, cfg) * lam * (1.0 - lam);
    }
  }
  return grad;
}

double lr_schedule(int distinct_sensed, int n_cells, const TtaConfig& cfg) {
  if (n_cells <= 0) throw ParameterError("lr_schedule: n_cells must be positive");
  const int sensed = std::clamp(distinct_sensed, 0, n_cells);
  return cfg.lr_min + (static_cast<double>(sensed) / n_cells) * (cfg.lr_max - cfg.lr_min);
}

IntensityModel tta_update(const IntensityModel& model, const MeasurementLog& log,
                          const TtaConfig& cfg) {
  IntensityModel next = model;
  if (cfg.reset_to_base) {
    std::fill(next.offsets.begin(), next.offsets.end(), 0.0);
    std::fill(next.adam_m.begin(), next.adam_m.end(), 0.0);
    std::fill(next.adam_v.begin(), next.adam_v.end(), 0.0);
    next.adam_t = 0;
  }
  const double lr = lr_schedule(log.distinct_sensed(), static_cast<int>(model.base_logits.size()), cfg);
  for (int step = 0; step < cfg.steps_per_event; ++step) {
    const std::vector<double> g = sppp_grad(next, log, cfg);
    for (double v : g) {
      if (!std::isfinite(v)) throw NumericalError("tta_update: non-finite gradient");
    }
    if (cfg.optimizer == Optimizer::GradientAscent) {
      for (std::size_t r = 0; r < g.size(); ++r) next.offsets[r] += lr * g[r];
      continue;
    }
    const auto& a = cfg.adam;
    next.adam_t += 1;
    const double c1 = 1.0 - std::pow(a.beta1, next.adam_t);
    const double c2 = 1.0 - std::pow(a.beta2, next.adam_t);
    for (std::size_t r = 0; r < g.size(); ++r) {
      next.adam_m[r] = a.beta1 * next.adam_m[r] + (1.0 - a.beta1) * g[r];
      next.adam_v[r] = a.beta2 * next.adam_v[r] + (1.0 - a.beta2) * g[r] * g[r];
      const double m_hat = next.adam_m[r] / c1;
      const double v_hat = next.adam_v[r] / c2;
      next.offsets[r] += lr * m_hat / (std::sqrt(v_hat) + a.epsilon);
    }
  }
  for (double o : next.offsets) {
    if (!std::isfinite(o)) throw NumericalError("tta_update: non-finite offset");
  }
  return next;
}

nlohmann::json model_to_json(const IntensityModel& m) {
  return {{"n", m.n},
          {"base_logits", m.base_logits},
          {"offsets", m.offsets},
          {"partition", partition_to_json(*m.partition)}};
}

}  // namespace avs
