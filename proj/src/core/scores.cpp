#include "core/scores.hpp"

#include <cmath>
#include <stdexcept>

namespace difflab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925287;
}

double ScoreModel::log_density(double, const Eigen::VectorXd&) const {
  throw std::logic_error("score model has no log_density");
}

void ScoreModel::score_batch(double t_fwd, const Batch& x, Batch& out) const {
  out.resize(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) out.col(j) = score(t_fwd, x.col(j));
}

void ScoreModel::log_density_batch(double t_fwd, const Batch& x, Eigen::VectorXd& out) const {
  out.resize(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) out[j] = log_density(t_fwd, x.col(j));
}

Gaussian1D::Gaussian1D(double sigma0, ScheduleParams params)
    : sigma0_(sigma0), params_(params) {
  if (!(sigma0 > 0.0)) throw std::invalid_argument("gauss1d: sigma0 must be > 0");
  params_.validate();
}

double Gaussian1D::sigma2(double t_fwd) const {
  const double mu = mean_scale(params_, t_fwd);
  return 1.0 + (sigma0_ * sigma0_ - 1.0) * mu * mu;  // mu^2 s0^2 + (1 - mu^2)
}

Eigen::VectorXd Gaussian1D::score(double t_fwd, const Eigen::VectorXd& x) const {
  return -x / sigma2(t_fwd);
}

double Gaussian1D::log_density(double t_fwd, const Eigen::VectorXd& x) const {
  const double s2 = sigma2(t_fwd);
  return -0.5 * x[0] * x[0] / s2 - 0.5 * std::log(kTwoPi * s2);
}

void Gaussian1D::score_batch(double t_fwd, const Batch& x, Batch& out) const {
  out = -x / sigma2(t_fwd);
}

void Gaussian1D::log_density_batch(double t_fwd, const Batch& x, Eigen::VectorXd& out) const {
  const double s2 = sigma2(t_fwd);
  out = (-0.5 / s2) * x.row(0).transpose().array().square() -
        0.5 * std::log(kTwoPi * s2);
}

GaussianMixture::GaussianMixture(std::vector<double> weights,
                                 std::vector<Eigen::VectorXd> means,
                                 std::vector<Eigen::VectorXd> variances,
                                 ScheduleParams params)
    : weights_(std::move(weights)),
      means_(std::move(means)),
      variances_(std::move(variances)),
      params_(params) {
  params_.validate();
  if (weights_.empty() || weights_.size() != means_.size() ||
      weights_.size() != variances_.size())
    throw std::invalid_argument("gmm: weights/means/vars size mismatch");
  dim_ = static_cast<int>(means_[0].size());
  double wsum = 0.0;
  for (size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0.0)) throw std::invalid_argument("gmm: weights must be > 0");
    wsum += weights_[i];
    if (means_[i].size() != dim_ || variances_[i].size() != dim_)
      throw std::invalid_argument("gmm: component dim mismatch");
    if ((variances_[i].array() <= 0.0).any())
      throw std::invalid_argument("gmm: variances must be > 0");
  }
  if (std::abs(wsum - 1.0) > 1e-9) throw std::invalid_argument("gmm: weights must sum to 1");
}

void GaussianMixture::moments(double t_fwd, int k, Eigen::VectorXd& mean,
                              Eigen::VectorXd& var) const {
  const double mu = mean_scale(params_, t_fwd);
  const double w = varpi(params_, t_fwd);
  mean = mu * means_[k];
  var = (mu * mu) * variances_[k].array() + w * w;
}

Eigen::VectorXd GaussianMixture::score(double t_fwd, const Eigen::VectorXd& x) const {
  const int K = components();
  Eigen::VectorXd logw(K);
  std::vector<Eigen::VectorXd> grads(K);
  Eigen::VectorXd mean, var;
  for (int k = 0; k < K; ++k) {
    moments(t_fwd, k, mean, var);
    const Eigen::ArrayXd d = x.array() - mean.array();
    logw[k] = std::log(weights_[k]) - 0.5 * (d * d / var.array()).sum() -
              0.5 * var.array().log().sum();
    grads[k] = (-d / var.array()).matrix();
  }
  const double m = logw.maxCoeff();
  const Eigen::ArrayXd r = (logw.array() - m).exp();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim_);
  for (int k = 0; k < K; ++k) out += r[k] * grads[k];
  return out / r.sum();
}

double GaussianMixture::log_density(double t_fwd, const Eigen::VectorXd& x) const {
  const int K = components();
  Eigen::VectorXd logw(K);
  Eigen::VectorXd mean, var;
  for (int k = 0; k < K; ++k) {
    moments(t_fwd, k, mean, var);
    const Eigen::ArrayXd d = x.array() - mean.array();
    logw[k] = std::log(weights_[k]) - 0.5 * (d * d / var.array()).sum() -
              0.5 * (kTwoPi * var.array()).log().sum();
  }
  const double m = logw.maxCoeff();
  return m + std::log((logw.array() - m).exp().sum());
}

void GaussianMixture::score_batch(double t_fwd, const Batch& x, Batch& out) const {
  const int K = components();
  const Eigen::Index n = x.cols();
  out.setZero(dim_, n);
  Eigen::MatrixXd logw(K, n);
  std::vector<Eigen::VectorXd> means(K), vars(K);
  for (int k = 0; k < K; ++k) {
    moments(t_fwd, k, means[k], vars[k]);
    const double c = std::log(weights_[k]) - 0.5 * vars[k].array().log().sum();
    logw.row(k).setConstant(c);
    for (int d = 0; d < dim_; ++d)
      logw.row(k).array() -=
          0.5 / vars[k][d] * (x.row(d).array() - means[k][d]).square();
  }
  const Eigen::RowVectorXd m = logw.colwise().maxCoeff();
  Eigen::MatrixXd r = (logw.rowwise() - m).array().exp();
  const Eigen::RowVectorXd rs = r.colwise().sum();
  for (int k = 0; k < K; ++k) {
    const Eigen::ArrayXd resp = r.row(k).array() / rs.array();
    for (int d = 0; d < dim_; ++d)
      out.row(d).array() -=
          resp.transpose() * (x.row(d).array() - means[k][d]) / vars[k][d];
  }
}

double GaussianMixture::marginal_cdf(double t_fwd, int axis, double x) const {
  double acc = 0.0;
  Eigen::VectorXd mean, var;
  for (int k = 0; k < components(); ++k) {
    moments(t_fwd, k, mean, var);
    acc += weights_[k] * 0.5 * std::erfc(-(x - mean[axis]) / std::sqrt(2.0 * var[axis]));
  }
  return acc;
}

double Perturbation::mask_value(double t_gen, double T) const {
  switch (mask) {
    case TimeMask::One: return 1.0;
    case TimeMask::MinusOne: return -1.0;
    case TimeMask::Sinusoid: return 0.5 * (1.0 + std::sin(kTwoPi * t_gen / T));
    case TimeMask::Before: return t_gen < mask_c * T ? 1.0 : 0.0;
    case TimeMask::After: return t_gen > mask_c * T ? 1.0 : 0.0;
    case TimeMask::Pulse:
      return (t_gen >= pulse_start && t_gen <= pulse_start + pulse_width)
                 ? 1.0 / pulse_width
                 : 0.0;
  }
  return 0.0;
}

std::vector<double> Perturbation::mask_breakpoints(double T) const {
  switch (mask) {
    case TimeMask::Before: return {mask_c * T};
    case TimeMask::After: return {mask_c * T};
    case TimeMask::Pulse: return {pulse_start, pulse_start + pulse_width};
    default: return {};
  }
}

double Perturbation::first_active(double T) const {
  if (mask == TimeMask::After) return mask_c * T;
  if (mask == TimeMask::Pulse) return pulse_start;
  return 0.0;
}

Perturbation Perturbation::error_case(int c, double epsilon, double mask_c) {
  Perturbation p;
  p.epsilon = epsilon;
  p.mode = PertMode::ScoreProportional;
  switch (c) {
    case 1: p.mask = TimeMask::One; break;
    case 2: p.mask = TimeMask::MinusOne; break;
    case 3: p.mask = TimeMask::Sinusoid; break;
    case 4:
      p.mask = TimeMask::Before;
      p.mask_c = mask_c > 0 ? mask_c : 0.95;
      break;
    case 5:
      p.mask = TimeMask::After;
      p.mask_c = mask_c > 0 ? mask_c : 0.99;
      break;
    default: throw std::invalid_argument("error case must be 1..5");
  }
  return p;
}

Eigen::VectorXd PerturbedScore::operator()(double t_gen, double T,
                                           const Eigen::VectorXd& x) const {
  Eigen::VectorXd s = base_.score(T - t_gen, x);
  if (pert_.epsilon == 0.0) return s;
  const double m = pert_.mask_value(t_gen, T);
  if (m == 0.0) return s;
  if (pert_.mode == PertMode::ScoreProportional) return (1.0 + pert_.epsilon * m) * s;
  return s + (pert_.epsilon * m * pert_.linear_coeff) * x;
}

void PerturbedScore::eval_batch(double t_gen, double T, const Batch& x, Batch& out) const {
  base_.score_batch(T - t_gen, x, out);
  if (pert_.epsilon == 0.0) return;
  const double m = pert_.mask_value(t_gen, T);
  if (m == 0.0) return;
  if (pert_.mode == PertMode::ScoreProportional)
    out *= (1.0 + pert_.epsilon * m);
  else
    out += (pert_.epsilon * m * pert_.linear_coeff) * x;
}

}  // namespace difflab
