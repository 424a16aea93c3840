#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace difflab {

// Shared 1D binning. The range comes from the reference side and is reused
// across a sweep so all compared runs land on identical bins.
struct BinGrid {
  double lo = 0.0, hi = 1.0;
  int bins = 100;

  static BinGrid from_reference(const Eigen::VectorXd& ref, int bins, double pad = 0.05);
  double width() const { return (hi - lo) / bins; }
  int index(double x) const;  // clamped to [0, bins-1]
  double edge(int i) const { return lo + i * width(); }
};

// normalized histogram; out-of-range samples clamp into the edge bins
Eigen::VectorXd hist_pmf(const Eigen::VectorXd& samples, const BinGrid& grid);
// pmf with additive smoothing of half a count per bin (generated-sample side)
Eigen::VectorXd hist_pmf_smoothed(const Eigen::VectorXd& samples, const BinGrid& grid);
// reference pmf from an exact CDF, integrated per bin
Eigen::VectorXd density_pmf(const std::function<double(double)>& cdf, const BinGrid& grid);

// sum over p>0 bins of p log(p/q); q must be strictly positive there
double kl_pmf(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

// KL between a reference sample (unsmoothed) and a generated sample (smoothed)
double hist_kl(const Eigen::VectorXd& ref, const Eigen::VectorXd& gen, const BinGrid& grid);
// KL with an exact reference density
double hist_kl_exact_ref(const std::function<double(double)>& ref_cdf,
                         const Eigen::VectorXd& gen, const BinGrid& grid);

// Jensen-Shannon on shared bins; symmetric, bounded by ln 2
double hist_js(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const BinGrid& grid);

// exact empirical 1-Wasserstein (integral of |F_a - F_b|; equals the matched
// order-statistics mean for equal sizes)
double w1_1d(Eigen::VectorXd a, Eigen::VectorXd b);

// average of w1_1d over n_proj fixed unit directions (deterministic in seed)
double w1_sliced_2d(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int n_proj,
                    uint64_t seed);

double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace difflab
