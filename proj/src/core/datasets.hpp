#pragma once

#include <memory>

#include "core/rng.hpp"
#include "core/scores.hpp"

namespace difflab {

// Deterministic data-distribution sampler: draw i of a keyed stream is a pure
// function of (key, i), so batches can be assembled in any order or partition.
class P0Sampler {
 public:
  virtual ~P0Sampler() = default;
  virtual int dim() const = 0;
  virtual void draw(const rng::Key& key, uint64_t idx, double* out) const = 0;
  Batch draw_batch(const rng::Key& key, uint64_t first_idx, int64_t n) const;
};

class GaussianP0 final : public P0Sampler {
 public:
  explicit GaussianP0(double sigma0, int dim = 1) : sigma0_(sigma0), dim_(dim) {}
  int dim() const override { return dim_; }
  void draw(const rng::Key& key, uint64_t idx, double* out) const override;

 private:
  double sigma0_;
  int dim_;
};

class PointMassP0 final : public P0Sampler {
 public:
  explicit PointMassP0(Eigen::VectorXd at) : at_(std::move(at)) {}
  int dim() const override { return static_cast<int>(at_.size()); }
  void draw(const rng::Key&, uint64_t, double* out) const override {
    for (int i = 0; i < at_.size(); ++i) out[i] = at_[i];
  }

 private:
  Eigen::VectorXd at_;
};

class GmmP0 final : public P0Sampler {
 public:
  explicit GmmP0(const GaussianMixture& model) : model_(model) {}
  int dim() const override { return model_.dim(); }
  void draw(const rng::Key& key, uint64_t idx, double* out) const override;

 private:
  const GaussianMixture& model_;
};

// (t sin t, t cos t), t ~ U(3 pi/2, 9 pi/2), standardized to zero mean and
// unit per-axis variance. Moments are fixed analytic constants.
class SwissRollP0 final : public P0Sampler {
 public:
  SwissRollP0();
  int dim() const override { return 2; }
  void draw(const rng::Key& key, uint64_t idx, double* out) const override;

  const Eigen::Vector2d& mean() const { return mean_; }
  const Eigen::Vector2d& std() const { return std_; }

 private:
  Eigen::Vector2d mean_, std_;
};

// canonical mixtures from the experiment suite
GaussianMixture make_gmm1d_2mode(const ScheduleParams& params);
GaussianMixture make_gmm2d_4mode(const ScheduleParams& params);

}  // namespace difflab
