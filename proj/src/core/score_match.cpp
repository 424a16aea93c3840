#include "core/score_match.hpp"

#include <cmath>
#include <stdexcept>

namespace difflab {

double weight_value(WeightScheme w, double varpi_t) {
  switch (w) {
    case WeightScheme::Default: return varpi_t * varpi_t;
    case WeightScheme::NoiseDriven: return varpi_t * varpi_t * varpi_t;
    case WeightScheme::DataDriven: return varpi_t * varpi_t / (0.25 + varpi_t);
  }
  return 0.0;
}

WeightScheme weight_scheme_from_name(const std::string& name) {
  if (name == "default") return WeightScheme::Default;
  if (name == "noise") return WeightScheme::NoiseDriven;
  if (name == "data") return WeightScheme::DataDriven;
  throw std::invalid_argument("unknown weight scheme: " + name);
}

Eigen::VectorXd dsm_target(const ScheduleParams& params, const Eigen::VectorXd& x0,
                           const Eigen::VectorXd& x_t, double t) {
  if (!(t > 0.0) || t > params.T)
    throw std::domain_error("dsm_target: t must be in (0, T], kernel is singular at 0");
  const double mu = mean_scale(params, t);
  const double w = varpi(params, t);
  return -(x_t - mu * x0) / (w * w);
}

MLPScore::MLPScore(MLP net, ScheduleParams params, int data_dim)
    : net_(std::move(net)), params_(params), data_dim_(data_dim) {
  if (net_.in_dim() != data_dim + 1 || net_.out_dim() != data_dim)
    throw std::invalid_argument("mlp score: net dims do not match data dim");
}

Eigen::VectorXd MLPScore::score(double t_fwd, const Eigen::VectorXd& x) const {
  Eigen::VectorXd in(data_dim_ + 1);
  in.head(data_dim_) = x;
  in[data_dim_] = t_fwd / params_.T;
  return net_.forward(in);
}

void MLPScore::score_batch(double t_fwd, const Batch& x, Batch& out) const {
  Eigen::MatrixXd in(data_dim_ + 1, x.cols());
  in.topRows(data_dim_) = x;
  in.row(data_dim_).setConstant(t_fwd / params_.T);
  out = net_.forward(in);
}

MLPScore MLPScore::load(const std::string& path, ScheduleParams params) {
  MLP net = MLP::load(path);
  return MLPScore(std::move(net), params, net.out_dim());
}

void TrainConfig::validate() const {
  if (steps < 1 || batch < 1) throw std::invalid_argument("train: steps/batch must be >= 1");
  if (!(t_min_frac > 0.0)) throw std::invalid_argument("train: t_min must be > 0");
}

TrainResult train_dsm(const P0Sampler& p0, const ScheduleParams& params, WeightScheme weight,
                      const TrainConfig& cfg) {
  params.validate();
  cfg.validate();
  const int d = p0.dim();
  MLP net = MLP::init(d + 1, 50, 50, d, cfg.seed);
  AdamState opt;
  opt.init(net);
  opt.plain_sgd = cfg.plain_sgd;

  const rng::Key tkey{cfg.seed, rng::kStreamTrain};
  const rng::Key dkey{cfg.seed, rng::kStreamTrain + 1};
  const rng::Key zkey{cfg.seed, rng::kStreamTrain + 2};
  const double t_min = cfg.t_min_frac * params.T;

  Eigen::MatrixXd in(d + 1, cfg.batch), target(d, cfg.batch);
  Eigen::VectorXd wvec(cfg.batch), x0(d);
  MLP::Cache cache;
  MLP::Grads grads;
  std::vector<double> trace;
  double win_acc = 0.0, initial_loss = 0.0;

  for (int64_t step = 0; step < cfg.steps; ++step) {
    for (int64_t j = 0; j < cfg.batch; ++j) {
      const uint64_t idx = static_cast<uint64_t>(step) * cfg.batch + j;
      const double t = t_min + (params.T - t_min) * rng::uniform(tkey, idx, 0, 0);
      const double mu = mean_scale(params, t);
      const double w = varpi(params, t);
      p0.draw(dkey, idx, x0.data());
      for (int i = 0; i < d; ++i) {
        const double z = rng::normal(zkey, idx, 0, i);
        in(i, j) = mu * x0[i] + w * z;
        target(i, j) = -z / w;  // -(x_t - mu x0)/w^2 with x_t - mu x0 = w z
      }
      in(d, j) = t / params.T;
      wvec[j] = weight_value(weight, w);
    }
    net.forward_cached(in, cache);
    Eigen::MatrixXd diff = cache.y - target;
    const double loss =
        (diff.array().square().colwise().sum().transpose() * wvec.array()).mean();
    if (!std::isfinite(loss)) throw TrainingDivergedError(step);
    if (step == 0) initial_loss = loss;
    win_acc += loss;
    if ((step + 1) % cfg.loss_window == 0) {
      trace.push_back(win_acc / cfg.loss_window);
      win_acc = 0.0;
    }
    Eigen::MatrixXd dy =
        (2.0 / static_cast<double>(cfg.batch)) * (diff.array().rowwise() * wvec.transpose().array());
    net.backward(cache, dy, grads);
    const double lr = cfg.lr * std::pow(0.5, static_cast<double>(step / cfg.lr_halve_every));
    opt.update(net, grads, lr);
  }
  return TrainResult{MLPScore(std::move(net), params, d), initial_loss, std::move(trace)};
}

MLPScore untrained_score(const ScheduleParams& params, int data_dim, uint64_t seed) {
  return MLPScore(MLP::init(data_dim + 1, 50, 50, data_dim, seed), params, data_dim);
}

double dsm_objective(const ScoreModel& model, const ScheduleParams& params, double t,
                     const Batch& eval_x0, uint64_t seed) {
  const int d = model.dim();
  const int64_t n = eval_x0.cols();
  const double mu = mean_scale(params, t);
  const double w = varpi(params, t);
  const rng::Key zkey{seed, rng::kStreamEval};
  Batch xt(d, n), target(d, n);
  for (int64_t j = 0; j < n; ++j)
    for (int i = 0; i < d; ++i) {
      const double z = rng::normal(zkey, j, 0, i);
      xt(i, j) = mu * eval_x0(i, j) + w * z;
      target(i, j) = -z / w;
    }
  Batch s;
  model.score_batch(t, xt, s);
  return (s - target).squaredNorm() / static_cast<double>(n);
}

std::vector<double> relative_sml(const ScoreModel& model_a, const ScoreModel& model_b,
                                 const ScheduleParams& params,
                                 const std::vector<double>& t_grid, const Batch& eval_x0,
                                 uint64_t seed) {
  if (model_a.dim() != model_b.dim())
    throw std::invalid_argument("relative_sml: model dims differ");
  std::vector<double> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    const double a = dsm_objective(model_a, params, t, eval_x0, seed);
    const double b = dsm_objective(model_b, params, t, eval_x0, seed);
    out.push_back(b < 1e-12 ? std::numeric_limits<double>::quiet_NaN() : a / b);
  }
  return out;
}

}  // namespace difflab
