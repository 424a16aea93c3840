#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "core/schedule.hpp"

namespace difflab {

// Samples are columns: a batch is a (dim x n) matrix.
using Batch = Eigen::MatrixXd;

// Analytic score field with closed-form forward marginals. Immutable after
// construction; evaluation is pure and thread-safe.
class ScoreModel {
 public:
  virtual ~ScoreModel() = default;
  virtual int dim() const = 0;

  // score(t_fwd, x) = grad_x log p_{t_fwd}(x)
  virtual Eigen::VectorXd score(double t_fwd, const Eigen::VectorXd& x) const = 0;
  virtual bool has_log_density() const { return false; }
  virtual double log_density(double t_fwd, const Eigen::VectorXd& x) const;

  // column-wise score; default loops, families override with vectorized forms
  virtual void score_batch(double t_fwd, const Batch& x, Batch& out) const;
  virtual void log_density_batch(double t_fwd, const Batch& x, Eigen::VectorXd& out) const;
};

// p0 = N(0, sigma0^2) under a VP schedule; sigma_t^2 = mu_t^2 sigma0^2 + varpi_t^2.
class Gaussian1D final : public ScoreModel {
 public:
  Gaussian1D(double sigma0, ScheduleParams params);
  int dim() const override { return 1; }
  double sigma0() const { return sigma0_; }
  const ScheduleParams& params() const { return params_; }
  double sigma2(double t_fwd) const;

  Eigen::VectorXd score(double t_fwd, const Eigen::VectorXd& x) const override;
  bool has_log_density() const override { return true; }
  double log_density(double t_fwd, const Eigen::VectorXd& x) const override;
  void score_batch(double t_fwd, const Batch& x, Batch& out) const override;
  void log_density_batch(double t_fwd, const Batch& x, Eigen::VectorXd& out) const override;

 private:
  double sigma0_;
  ScheduleParams params_;
};

// Axis-aligned Gaussian mixture. Forward marginal at t is the mixture with
// means mu_t * m_i and per-axis variances mu_t^2 s_i^2 + varpi_t^2.
class GaussianMixture final : public ScoreModel {
 public:
  GaussianMixture(std::vector<double> weights, std::vector<Eigen::VectorXd> means,
                  std::vector<Eigen::VectorXd> variances, ScheduleParams params);
  int dim() const override { return dim_; }
  int components() const { return static_cast<int>(weights_.size()); }
  const ScheduleParams& params() const { return params_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<Eigen::VectorXd>& means() const { return means_; }
  const std::vector<Eigen::VectorXd>& variances() const { return variances_; }

  Eigen::VectorXd score(double t_fwd, const Eigen::VectorXd& x) const override;
  bool has_log_density() const override { return true; }
  double log_density(double t_fwd, const Eigen::VectorXd& x) const override;
  void score_batch(double t_fwd, const Batch& x, Batch& out) const override;

  // exact 1D marginal CDF along one axis at forward time t (for binned references)
  double marginal_cdf(double t_fwd, int axis, double x) const;

 private:
  void moments(double t_fwd, int k, Eigen::VectorXd& mean, Eigen::VectorXd& var) const;
  int dim_;
  std::vector<double> weights_;
  std::vector<Eigen::VectorXd> means_;
  std::vector<Eigen::VectorXd> variances_;
  ScheduleParams params_;
};

// Injected score error eps * E_t: a time mask times a spatial mode. Masks are
// indexed on the generative clock.
enum class TimeMask { One, MinusOne, Sinusoid, Before, After, Pulse };
enum class PertMode { ScoreProportional, LinearField };

struct Perturbation {
  double epsilon = 0.0;
  TimeMask mask = TimeMask::One;
  double mask_c = 0.95;        // threshold fraction for Before (t < c T) / After (t > c T)
  double pulse_start = 0.0;    // generative-clock start of the box pulse
  double pulse_width = 0.0;    // box width a; mask value is 1/a on [s, s+a]
  PertMode mode = PertMode::ScoreProportional;
  double linear_coeff = 1.0;   // LinearField: E_t(x) = mask(t) * linear_coeff * x

  double mask_value(double t_gen, double T) const;
  // generative times where the mask switches (quadrature/PDE breakpoints)
  std::vector<double> mask_breakpoints(double T) const;
  // earliest generative time with nonzero mask (0 unless Pulse/After)
  double first_active(double T) const;

  static Perturbation error_case(int c, double epsilon, double mask_c = -1.0);
};

// Perturbed generative-clock score: S(t_gen, x) = score(T - t_gen, x) + eps E(t_gen, x).
class PerturbedScore {
 public:
  PerturbedScore(const ScoreModel& base, Perturbation pert)
      : base_(base), pert_(pert) {}

  const ScoreModel& base() const { return base_; }
  const Perturbation& pert() const { return pert_; }

  Eigen::VectorXd operator()(double t_gen, double T, const Eigen::VectorXd& x) const;
  void eval_batch(double t_gen, double T, const Batch& x, Batch& out) const;

 private:
  const ScoreModel& base_;
  Perturbation pert_;
};

}  // namespace difflab
