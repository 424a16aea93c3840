#include <doctest.h>

#include <cmath>

#include "core/metrics.hpp"
#include "core/rng.hpp"

using namespace difflab;

namespace {
Eigen::VectorXd normals(int64_t n, uint64_t seed, double mean = 0.0, double std = 1.0) {
  Eigen::VectorXd v(n);
  const rng::Key key{seed, 1};
  for (int64_t i = 0; i < n; ++i) v[i] = mean + std * rng::normal(key, i, 0, 0);
  return v;
}
}  // namespace

TEST_CASE("histogram pmf basics") {
  Eigen::VectorXd s = normals(5000, 1);
  BinGrid grid = BinGrid::from_reference(s, 100);
  const Eigen::VectorXd pmf = hist_pmf(s, grid);
  CHECK(pmf.sum() == doctest::Approx(1.0).epsilon(1e-12));
  const Eigen::VectorXd sm = hist_pmf_smoothed(s, grid);
  CHECK(sm.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sm.minCoeff() > 0.0);
}

TEST_CASE("kl: identical and near-identical sets") {
  Eigen::VectorXd s = normals(100000, 2);
  BinGrid grid = BinGrid::from_reference(s, 100);
  // smoothing on the generated side keeps this positive but tiny
  const double self_kl = hist_kl(s, s, grid);
  CHECK(self_kl >= 0.0);
  CHECK(self_kl < 100.0 / s.size());
  // independent equal-law draws: the Monte Carlo floor (pinned in acceptance)
  const double floor = hist_kl(s, normals(100000, 3), grid);
  CHECK(floor > 0.0);
  CHECK(floor < 2e-3);
  // js of identical sets is exactly zero
  CHECK(hist_js(s, s, grid) == 0.0);
}

TEST_CASE("js: bounded by ln 2, disjoint supports saturate") {
  Eigen::VectorXd a = Eigen::VectorXd::LinSpaced(512, 0.0, 1.0);
  Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(512, 10.0, 11.0);
  BinGrid grid{-1.0, 12.0, 130};
  const double js = hist_js(a, b, grid);
  CHECK(js == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(hist_js(a, a, grid) == 0.0);
}

TEST_CASE("w1: translations and exact empirical values") {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(8);
  Eigen::VectorXd b = Eigen::VectorXd::Constant(8, -1.7);
  CHECK(w1_1d(a, a) == 0.0);
  CHECK(w1_1d(a, b) == doctest::Approx(1.7).epsilon(1e-14));
  // unequal sizes: point masses still integrate |F_a - F_b|
  Eigen::VectorXd c = Eigen::VectorXd::Constant(3, -1.7);
  CHECK(w1_1d(a, c) == doctest::Approx(1.7).epsilon(1e-14));

  // N(0,1) vs N(m,1): W1 -> |m|
  const int64_t n = 100000;
  const double w = w1_1d(normals(n, 4), normals(n, 5, 0.5));
  CHECK(std::abs(w - 0.5) < 0.02);
}

TEST_CASE("w1 equals mean absolute difference of matched order statistics") {
  Eigen::VectorXd a = normals(1000, 6), b = normals(1000, 7);
  Eigen::VectorXd sa = a, sb = b;
  std::sort(sa.data(), sa.data() + sa.size());
  std::sort(sb.data(), sb.data() + sb.size());
  CHECK(w1_1d(a, b) == doctest::Approx((sa - sb).cwiseAbs().mean()).epsilon(1e-12));
}

TEST_CASE("w1 triangle inequality on random triples") {
  for (uint64_t s = 0; s < 5; ++s) {
    Eigen::VectorXd a = normals(400, 10 + s, 0.0, 1.0);
    Eigen::VectorXd b = normals(400, 20 + s, 0.5, 1.3);
    Eigen::VectorXd c = normals(400, 30 + s, -0.7, 0.6);
    CHECK(w1_1d(a, c) <= w1_1d(a, b) + w1_1d(b, c) + 1e-12);
  }
}

TEST_CASE("sliced w1: zero, determinism, translation fixture") {
  const rng::Key key{8, 2};
  Eigen::MatrixXd a(2, 4000);
  for (int j = 0; j < 4000; ++j)
    for (int i = 0; i < 2; ++i) a(i, j) = rng::normal(key, j, 0, i);
  CHECK(w1_sliced_2d(a, a, 64, 7) == 0.0);
  CHECK(w1_sliced_2d(a, a, 32, 7) == 0.0);

  Eigen::MatrixXd b = a;
  b.row(0).array() += 2.0;
  const double got = w1_sliced_2d(a, b, 64, 7);
  // per fixed direction u the distance is exactly 2 |cos(angle)|
  const rng::Key pkey{7, rng::kStreamProj};
  double expect = 0.0;
  for (int p = 0; p < 64; ++p)
    expect += 2.0 * std::abs(std::cos(M_PI * rng::uniform(pkey, p, 0, 0)));
  expect /= 64.0;
  CHECK(got == doctest::Approx(expect).epsilon(1e-12));
  CHECK(w1_sliced_2d(a, b, 64, 7) == got);  // deterministic in seed
  CHECK_THROWS_AS(w1_sliced_2d(a, b, 8, 7), std::invalid_argument);
}

TEST_CASE("binning stability: ranking robust to doubling bins") {
  // five sample sets at increasing corruption level; the KL ranking against
  // the reference moves by at most one adjacent pair when bins double
  Eigen::VectorXd ref = normals(40000, 40);
  std::vector<Eigen::VectorXd> gens;
  for (int k = 0; k < 5; ++k)
    gens.push_back(normals(20000, 50 + k, 0.03 * k, 1.0 + 0.05 * k));
  auto ranking = [&](int bins) {
    BinGrid grid = BinGrid::from_reference(ref, bins);
    std::vector<std::pair<double, int>> kl;
    for (int k = 0; k < 5; ++k) kl.push_back({hist_kl(ref, gens[k], grid), k});
    std::sort(kl.begin(), kl.end());
    std::vector<int> order;
    for (auto& p : kl) order.push_back(p.second);
    return order;
  };
  const auto r100 = ranking(100), r200 = ranking(200);
  int moved = 0;
  for (int k = 0; k < 5; ++k)
    if (r100[k] != r200[k]) ++moved;
  CHECK(moved <= 2);  // one adjacent swap displaces two entries
}

TEST_CASE("spearman") {
  CHECK(spearman({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
  CHECK(spearman({1, 2, 3, 4}, {9, 7, 4, 2}) == doctest::Approx(-1.0));
  CHECK(std::abs(spearman({1, 2, 3, 4, 5}, {3, 1, 4, 1, 5})) < 0.9);
}
