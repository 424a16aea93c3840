#include "core/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "core/rng.hpp"

namespace difflab {

BinGrid BinGrid::from_reference(const Eigen::VectorXd& ref, int bins, double pad) {
  if (ref.size() == 0) throw std::invalid_argument("bin grid: empty reference");
  BinGrid g;
  g.bins = bins;
  const double lo = ref.minCoeff(), hi = ref.maxCoeff();
  const double span = std::max(hi - lo, 1e-12);
  g.lo = lo - pad * span;
  g.hi = hi + pad * span;
  return g;
}

int BinGrid::index(double x) const {
  const int i = static_cast<int>(std::floor((x - lo) / width()));
  return std::clamp(i, 0, bins - 1);
}

Eigen::VectorXd hist_pmf(const Eigen::VectorXd& samples, const BinGrid& grid) {
  if (samples.size() == 0) throw std::invalid_argument("histogram: empty sample set");
  Eigen::VectorXd pmf = Eigen::VectorXd::Zero(grid.bins);
  for (Eigen::Index i = 0; i < samples.size(); ++i) pmf[grid.index(samples[i])] += 1.0;
  return pmf / static_cast<double>(samples.size());
}

Eigen::VectorXd hist_pmf_smoothed(const Eigen::VectorXd& samples, const BinGrid& grid) {
  if (samples.size() == 0) throw std::invalid_argument("histogram: empty sample set");
  Eigen::VectorXd counts = Eigen::VectorXd::Constant(grid.bins, 0.5);
  for (Eigen::Index i = 0; i < samples.size(); ++i) counts[grid.index(samples[i])] += 1.0;
  return counts / (static_cast<double>(samples.size()) + 0.5 * grid.bins);
}

Eigen::VectorXd density_pmf(const std::function<double(double)>& cdf, const BinGrid& grid) {
  Eigen::VectorXd pmf(grid.bins);
  double prev = cdf(grid.edge(0));
  for (int i = 0; i < grid.bins; ++i) {
    const double next = cdf(grid.edge(i + 1));
    pmf[i] = std::max(next - prev, 0.0);
    prev = next;
  }
  const double total = pmf.sum();
  if (!(total > 0.0)) throw std::runtime_error("density_pmf: zero mass on grid");
  return pmf / total;
}

double kl_pmf(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size()) throw std::invalid_argument("kl: pmf size mismatch");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) {
      if (!(q[i] > 0.0)) throw std::runtime_error("kl: q = 0 on a p > 0 bin");
      acc += p[i] * std::log(p[i] / q[i]);
    }
  }
  return acc;
}

double hist_kl(const Eigen::VectorXd& ref, const Eigen::VectorXd& gen, const BinGrid& grid) {
  return kl_pmf(hist_pmf(ref, grid), hist_pmf_smoothed(gen, grid));
}

double hist_kl_exact_ref(const std::function<double(double)>& ref_cdf,
                         const Eigen::VectorXd& gen, const BinGrid& grid) {
  return kl_pmf(density_pmf(ref_cdf, grid), hist_pmf_smoothed(gen, grid));
}

double hist_js(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const BinGrid& grid) {
  const Eigen::VectorXd pa = hist_pmf(a, grid);
  const Eigen::VectorXd pb = hist_pmf(b, grid);
  const Eigen::VectorXd m = 0.5 * (pa + pb);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < pa.size(); ++i) {
    if (pa[i] > 0.0) acc += 0.5 * pa[i] * std::log(pa[i] / m[i]);
    if (pb[i] > 0.0) acc += 0.5 * pb[i] * std::log(pb[i] / m[i]);
  }
  return acc;
}

double w1_1d(Eigen::VectorXd a, Eigen::VectorXd b) {
  if (a.size() == 0 || b.size() == 0) throw std::invalid_argument("w1: empty sample set");
  std::sort(a.data(), a.data() + a.size());
  std::sort(b.data(), b.data() + b.size());
  // integral of |F_a - F_b| over the merged support
  const double wa = 1.0 / static_cast<double>(a.size());
  const double wb = 1.0 / static_cast<double>(b.size());
  Eigen::Index i = 0, j = 0;
  double fa = 0.0, fb = 0.0, acc = 0.0;
  double x = std::min(a[0], b[0]);
  while (i < a.size() || j < b.size()) {
    double nx;
    if (j >= b.size() || (i < a.size() && a[i] <= b[j]))
      nx = a[i];
    else
      nx = b[j];
    acc += std::abs(fa - fb) * (nx - x);
    x = nx;
    while (i < a.size() && a[i] == x) {
      fa += wa;
      ++i;
    }
    while (j < b.size() && b[j] == x) {
      fb += wb;
      ++j;
    }
  }
  return acc;
}

double w1_sliced_2d(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int n_proj,
                    uint64_t seed) {
  if (a.rows() != 2 || b.rows() != 2) throw std::invalid_argument("sliced w1: need 2D samples");
  if (n_proj < 32) throw std::invalid_argument("sliced w1: n_proj must be >= 32");
  const rng::Key key{seed, rng::kStreamProj};
  double acc = 0.0;
  for (int p = 0; p < n_proj; ++p) {
    const double ang = M_PI * rng::uniform(key, p, 0, 0);
    Eigen::Vector2d u(std::cos(ang), std::sin(ang));
    acc += w1_1d(a.transpose() * u, b.transpose() * u);
  }
  return acc / n_proj;
}

namespace {
std::vector<double> ranks(const std::vector<double>& v) {
  const size_t n = v.size();
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> r(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * (i + j) + 1.0;
    for (size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}
}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("spearman: need two equal-length series");
  const auto rx = ranks(x), ry = ranks(y);
  double mx = 0, my = 0;
  for (size_t i = 0; i < rx.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= rx.size();
  my /= ry.size();
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace difflab
