#pragma once

#include <memory>
#include <vector>

#include "avs/regions.hpp"
#include "avs/score_map.hpp"
#include "avs/world.hpp"
#include "json.hpp"

namespace avs {

// Ascent rule applied at each TTA event.
enum class Optimizer { GradientAscent, Adam };

struct AdamParams {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct TtaConfig {
  double alpha_pos = 4.0;
  double beta = 1.0 / 9.0;
  double gamma_exp = 2.0;  // focal exponent on region coverage
  double lr_min = 1.0;
  double lr_max = 10.0;
  Optimizer optimizer = Optimizer::GradientAscent;
  AdamParams adam;
  int steps_per_event = 1;
  int cadence = 20;
  bool reset_to_base = true;
};

void validate(const TtaConfig& cfg);
nlohmann::json tta_config_to_json(const TtaConfig& cfg);
TtaConfig tta_config_from_json(const nlohmann::json& j);

inline constexpr double kEpsilonClamp = 1e-4;

// lambda(x) = sigmoid(base_logit[x] + offset[region(x)]).
struct IntensityModel {
  int n = 0;
  std::vector<double> base_logits;
  std::vector<double> offsets;
  std::shared_ptr<const RegionPartition> partition;

  // Adam moments; only meaningful when reset_to_base is false.
  std::vector<double> adam_m;
  std::vector<double> adam_v;
  int adam_t = 0;

  int k() const { return static_cast<int>(offsets.size()); }
};

IntensityModel make_intensity_model(const ScoreMap& base,
                                    std::shared_ptr<const RegionPartition> partition);

double sigmoid(double x);
double logit(double p);

double lambda_at(const IntensityModel& model, Cell c);
ScoreMap lambda_map(const IntensityModel& model);

// Sensed cells deduplicated by cell, with per-region coverage O_r.
class MeasurementLog {
 public:
  explicit MeasurementLog(std::shared_ptr<const RegionPartition> partition);

  // Returns true when the cell had not been sensed before. A repeat sensing
  // of a cell only upgrades it to positive.
  bool add(const Measurement& m);

  const std::vector<Measurement>& entries() const { return entries_; }
  const std::vector<int>& observed() const { return observed_; }  // O_r
  int positives() const { return positives_; }
  int negatives() const { return negatives_; }
  int distinct_sensed() const { return static_cast<int>(entries_.size()); }
  const RegionPartition& partition() const { return *partition_; }

 private:
  std::shared_ptr<const RegionPartition> partition_;
  std::vector<Measurement> entries_;
  std::vector<int> index_of_cell_;
  std::vector<int> observed_;
  int positives_ = 0;
  int negatives_ = 0;
};

// min(beta * (O_r / L_r)^gamma, 1), with 0^0 = 1.
double alpha_neg(int observed, int region_size, double beta, double gamma_exp);

double sppp_loss(const IntensityModel& model, const MeasurementLog& log, const TtaConfig& cfg);

// Analytic gradient of sppp_loss with respect to the per-region offsets.
std::vector<double> sppp_grad(const IntensityModel& model, const MeasurementLog& log,
                              const TtaConfig& cfg);

// Linear in coverage from lr_min (nothing sensed) to lr_max (every cell).
double lr_schedule(int distinct_sensed, int n_cells, const TtaConfig& cfg);

// One TTA event over the full log. Returns a new model; the input is untouched.
IntensityModel tta_update(const IntensityModel& model, const MeasurementLog& log,
                          const TtaConfig& cfg);

nlohmann::json model_to_json(const IntensityModel& model);

}  // namespace avs
