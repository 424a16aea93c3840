#pragma once

#include <memory>
#include <vector>

#include "core/datasets.hpp"
#include "core/mlp.hpp"
#include "core/scores.hpp"

namespace difflab {

// training weights as functions of the conditional std varpi_t
enum class WeightScheme { Default, NoiseDriven, DataDriven };
double weight_value(WeightScheme w, double varpi_t);
WeightScheme weight_scheme_from_name(const std::string& name);

// conditional (transition-kernel) score: -(x_t - mu_t x0) / varpi_t^2
Eigen::VectorXd dsm_target(const ScheduleParams& params, const Eigen::VectorXd& x0,
                           const Eigen::VectorXd& x_t, double t);

// trained score field; time enters as an extra input feature t/T
class MLPScore final : public ScoreModel {
 public:
  MLPScore(MLP net, ScheduleParams params, int data_dim);
  int dim() const override { return data_dim_; }
  const MLP& net() const { return net_; }
  const ScheduleParams& params() const { return params_; }

  Eigen::VectorXd score(double t_fwd, const Eigen::VectorXd& x) const override;
  void score_batch(double t_fwd, const Batch& x, Batch& out) const override;

  void save(const std::string& path) const { net_.save(path); }
  static MLPScore load(const std::string& path, ScheduleParams params);

 private:
  MLP net_;
  ScheduleParams params_;
  int data_dim_;
};

struct TrainConfig {
  int64_t steps = 20000;
  int64_t batch = 400;
  double lr = 0.01;
  int64_t lr_halve_every = 8000;
  double t_min_frac = 0.01;  // t sampled uniformly on [t_min_frac * T, T]
  uint64_t seed = 0;
  bool plain_sgd = false;
  int64_t loss_window = 100;  // loss trace is averaged per window

  void validate() const;
};

struct TrainResult {
  MLPScore model;
  double initial_loss = 0.0;       // weighted DSM loss of the untouched init
  std::vector<double> loss_trace;  // windowed mean of the weighted DSM loss
};

struct TrainingDivergedError : std::runtime_error {
  int64_t step;
  explicit TrainingDivergedError(int64_t step_)
      : std::runtime_error("training diverged (NaN loss) at step " + std::to_string(step_)),
        step(step_) {}
};

TrainResult train_dsm(const P0Sampler& p0, const ScheduleParams& params, WeightScheme weight,
                      const TrainConfig& cfg);

// untrained baseline with the same architecture/initialization
MLPScore untrained_score(const ScheduleParams& params, int data_dim, uint64_t seed);

// Per-t ratio of unweighted DSM objectives of model_a over model_b, Monte
// Carlo over a held-out x0 set with common random numbers across models.
// Non-finite marker where the denominator vanishes.
std::vector<double> relative_sml(const ScoreModel& model_a, const ScoreModel& model_b,
                                 const ScheduleParams& params,
                                 const std::vector<double>& t_grid, const Batch& eval_x0,
                                 uint64_t seed);

// unweighted DSM objective of one model at one t (used by the ratio above)
double dsm_objective(const ScoreModel& model, const ScheduleParams& params, double t,
                     const Batch& eval_x0, uint64_t seed);

}  // namespace difflab
