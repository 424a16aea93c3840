#include "core/datasets.hpp"

#include <cmath>

#include "core/quadrature.hpp"

namespace difflab {

Batch P0Sampler::draw_batch(const rng::Key& key, uint64_t first_idx, int64_t n) const {
  Batch out(dim(), n);
  for (int64_t j = 0; j < n; ++j) draw(key, first_idx + j, out.col(j).data());
  return out;
}

void GaussianP0::draw(const rng::Key& key, uint64_t idx, double* out) const {
  for (int i = 0; i < dim_; ++i) out[i] = sigma0_ * rng::normal(key, idx, 0, i);
}

void GmmP0::draw(const rng::Key& key, uint64_t idx, double* out) const {
  const double u = rng::uniform(key, idx, 0, 1000);
  double acc = 0.0;
  int k = 0;
  for (; k < model_.components() - 1; ++k) {
    acc += model_.weights()[k];
    if (u < acc) break;
  }
  const auto& mean = model_.means()[k];
  const auto& var = model_.variances()[k];
  for (int i = 0; i < model_.dim(); ++i)
    out[i] = mean[i] + std::sqrt(var[i]) * rng::normal(key, idx, 0, i);
}

SwissRollP0::SwissRollP0() {
  const double a = 1.5 * M_PI, b = 4.5 * M_PI;
  auto mom = [&](const std::function<double(double)>& f) {
    return quad::integrate(f, a, b, {}, 1e-12).value / (b - a);
  };
  mean_[0] = mom([](double t) { return t * std::sin(t); });
  mean_[1] = mom([](double t) { return t * std::cos(t); });
  const double ex2 = mom([](double t) { return t * t * std::sin(t) * std::sin(t); });
  const double ey2 = mom([](double t) { return t * t * std::cos(t) * std::cos(t); });
  std_[0] = std::sqrt(ex2 - mean_[0] * mean_[0]);
  std_[1] = std::sqrt(ey2 - mean_[1] * mean_[1]);
}

void SwissRollP0::draw(const rng::Key& key, uint64_t idx, double* out) const {
  const double a = 1.5 * M_PI, b = 4.5 * M_PI;
  const double t = a + (b - a) * rng::uniform(key, idx, 0, 2000);
  out[0] = (t * std::sin(t) - mean_[0]) / std_[0];
  out[1] = (t * std::cos(t) - mean_[1]) / std_[1];
}

GaussianMixture make_gmm1d_2mode(const ScheduleParams& params) {
  Eigen::VectorXd m1(1), m2(1), v(1);
  m1 << -1.0;
  m2 << 1.0;
  v << 0.01;
  return GaussianMixture({0.5, 0.5}, {m1, m2}, {v, v}, params);
}

GaussianMixture make_gmm2d_4mode(const ScheduleParams& params) {
  std::vector<Eigen::VectorXd> means;
  for (double sx : {-1.0, 1.0})
    for (double sy : {-1.0, 1.0}) {
      Eigen::VectorXd m(2);
      m << sx, sy;
      means.push_back(m);
    }
  Eigen::VectorXd v(2);
  v << 0.0025, 0.0025;  // 0.05^2 isotropic
  return GaussianMixture({0.25, 0.25, 0.25, 0.25}, means, {v, v, v, v}, params);
}

}  // namespace difflab
