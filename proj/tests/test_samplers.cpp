#include <doctest.h>

#include <cmath>

#include "core/datasets.hpp"
#include "core/samplers.hpp"

using namespace difflab;

namespace {

double sample_var(const Batch& b) {
  const double m = b.row(0).mean();
  return (b.row(0).array() - m).square().sum() / (b.cols() - 1);
}

// Exact law of the discrete chains for the 1D Gaussian score: both schemes
// are linear maps, so the terminal variance follows a scalar recursion.
double chain_var(const ScheduleParams& p, double sigma0, double alpha, int64_t steps,
                 bool euler, double eps_case1 = 0.0) {
  auto sig2 = [&](double u) {
    const double mu = mean_scale(p, u);
    return 1.0 + (sigma0 * sigma0 - 1.0) * mu * mu;
  };
  double v = sig2(p.T);
  const double dt = p.T / static_cast<double>(steps);
  for (int64_t k = 0; k < steps; ++k) {
    const double t = k * dt;
    const double s2 = sig2(p.T - t);
    const double gb2 = p.beta0 + (p.beta1 - p.beta0) * (p.T - t);
    if (euler) {
      const double c = 1.0 + dt * (0.5 * gb2 - 0.5 * (1.0 + alpha * alpha) * gb2 *
                                                   (1.0 + eps_case1) / s2);
      v = c * c * v + dt * alpha * alpha * gb2;
    } else {
      const double gam =
          std::exp(dt * (2.0 * p.beta0 + (2.0 * t - 2.0 * p.T + dt) * (p.beta0 - p.beta1)) / 4.0);
      const double c = gam - (1.0 + alpha * alpha) * (gam - 1.0) * (1.0 + eps_case1) / s2;
      v = c * c * v + alpha * alpha * (gam * gam - 1.0);
    }
  }
  return v;
}

}  // namespace

TEST_CASE("simulate_forward_exact") {
  ScheduleParams unit = ScheduleParams::unit(2.0);
  // t = 0 returns X0 exactly
  GaussianP0 p0(0.7);
  Batch x0 = simulate_forward_exact(p0, unit, 0.0, 64, 5);
  Batch x0b = p0.draw_batch({5, rng::kStreamData}, 0, 64);
  CHECK((x0 - x0b).cwiseAbs().maxCoeff() == 0.0);

  // point mass: X_t ~ N(0, varpi^2)
  Eigen::VectorXd at(1);
  at << 0.0;
  PointMassP0 delta(at);
  const int64_t n = 100000;
  Batch xt = simulate_forward_exact(delta, unit, 0.8, n, 6);
  const double w2 = varpi(unit, 0.8) * varpi(unit, 0.8);
  CHECK(std::abs(sample_var(xt) - w2) < 3.0 * w2 * std::sqrt(2.0 / n));

  // Gaussian p0: var matches sigma_t^2
  Batch g = simulate_forward_exact(p0, unit, 1.1, n, 7);
  const double mu = mean_scale(unit, 1.1), w = varpi(unit, 1.1);
  const double expected = mu * mu * 0.49 + w * w;
  CHECK(std::abs(sample_var(g) - expected) < 3.0 * expected * std::sqrt(2.0 / n));
}

TEST_CASE("EM: stationary and contracted targets" * doctest::timeout(300)) {
  ScheduleParams unit = ScheduleParams::unit(2.0);
  const int64_t n = 20000, steps = 10000;
  for (double sigma0 : {1.0, 0.5}) {
    Gaussian1D model(sigma0, unit);
    GaussianP0 p0(sigma0);
    PerturbedScore exact(model, Perturbation{});
    for (double alpha : {0.0, 1.0, 2.0}) {
      SamplerConfig cfg;
      cfg.steps = steps;
      cfg.batch = n;
      cfg.seed = 11;
      cfg.alpha = alpha;
      cfg.init = InitDist::ExactPT;
      auto run = simulate_reverse_em(exact, unit, cfg, &p0);
      const double target = sigma0 * sigma0;
      const double tol = 3.0 * target * std::sqrt(2.0 / n) + 5.0 * target / steps;
      CHECK(std::abs(sample_var(run.terminal) - target) < tol);
    }
  }
}

TEST_CASE("EM matches the exact chain law; bias shrinks with steps" * doctest::timeout(300)) {
  ScheduleParams unit = ScheduleParams::unit(2.0);
  const double sigma0 = 0.5;
  Gaussian1D model(sigma0, unit);
  GaussianP0 p0(sigma0);
  PerturbedScore exact(model, Perturbation{});

  // deterministic part of the invariant: the exact chain bias decreases
  double prev = 1e300;
  for (int64_t steps : {500, 2000, 8000, 32000}) {
    const double bias = std::abs(chain_var(unit, sigma0, 1.0, steps, true) - 0.25);
    CHECK(bias < prev);
    prev = bias;
  }
  // Monte Carlo matches the chain law at two resolutions
  for (int64_t steps : {500, 8000}) {
    SamplerConfig cfg;
    cfg.steps = steps;
    cfg.batch = 20000;
    cfg.seed = 3;
    cfg.alpha = 1.0;
    cfg.init = InitDist::ExactPT;
    auto run = simulate_reverse_em(exact, unit, cfg, &p0);
    const double expect = chain_var(unit, sigma0, 1.0, steps, true);
    CHECK(std::abs(sample_var(run.terminal) - expect) <
          3.0 * expect * std::sqrt(2.0 / cfg.batch));
  }
}

TEST_CASE("determinism: partitioning and repeated runs") {
  ScheduleParams unit = ScheduleParams::unit(2.0);
  Gaussian1D model(0.5, unit);
  GaussianP0 p0(0.5);
  PerturbedScore exact(model, Perturbation{});
  SamplerConfig cfg;
  cfg.steps = 50;
  cfg.batch = 256;
  cfg.seed = 42;
  cfg.alpha = 1.0;
  cfg.init = InitDist::ExactPT;
  auto full = simulate_reverse_em(exact, unit, cfg, &p0);
  auto again = simulate_reverse_em(exact, unit, cfg, &p0);
  CHECK((full.terminal - again.terminal).cwiseAbs().maxCoeff() == 0.0);

  // split 256 = 100 + 156 via traj_offset: identical trajectories
  SamplerConfig a = cfg, b = cfg;
  a.batch = 100;
  b.batch = 156;
  b.traj_offset = 100;
  auto ra = simulate_reverse_em(exact, unit, a, &p0);
  auto rb = simulate_reverse_em(exact, unit, b, &p0);
  CHECK((full.terminal.leftCols(100) - ra.terminal).cwiseAbs().maxCoeff() == 0.0);
  CHECK((full.terminal.rightCols(156) - rb.terminal).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("EI: deterministic at alpha = 0 and single-step size") {
  ScheduleParams paper{0.1, 20.0, 1.0};
  Gaussian1D model(0.5, paper);
  GaussianP0 p0(0.5);
  PerturbedScore exact(model, Perturbation{});
  SamplerConfig cfg;
  cfg.scheme = Scheme::ExponentialIntegrator;
  cfg.steps = 64;
  cfg.batch = 32;
  cfg.seed = 9;
  cfg.alpha = 0.0;
  cfg.init = InitDist::ExactPT;
  cfg.keep_paths = true;
  auto run = simulate_reverse_ei(exact, paper, cfg, &p0);

  // reconstruct every step: no randomness enters at alpha = 0
  const double dt = paper.T / cfg.steps;
  for (int64_t k = 0; k < cfg.steps; ++k) {
    const double t = k * dt;
    const double gam =
        std::exp(dt * (2.0 * paper.beta0 + (2.0 * t - 2.0 * paper.T + dt) *
                                               (paper.beta0 - paper.beta1)) / 4.0);
    for (int j = 0; j < cfg.batch; ++j) {
      const double x = run.paths[k](0, j);
      const double s = model.score(paper.T - t, run.paths[k].col(j))[0];
      const double expect = gam * x + (gam - 1.0) * s;
      CHECK(run.paths[k + 1](0, j) == doctest::Approx(expect).epsilon(1e-15));
    }
  }
  // one-step update is identity + O(dt)
  SamplerConfig one = cfg;
  one.steps = 4096;
  one.keep_paths = true;
  auto tiny = simulate_reverse_ei(exact, paper, one, &p0);
  const double step_change = (tiny.paths[1] - tiny.paths[0]).cwiseAbs().maxCoeff();
  CHECK(step_change < 50.0 * (paper.T / one.steps));
}

TEST_CASE("EM and EI terminal laws agree at fine steps" * doctest::timeout(300)) {
  ScheduleParams unit = ScheduleParams::unit(2.0);
  Gaussian1D model(0.5, unit);
  GaussianP0 p0(0.5);
  PerturbedScore exact(model, Perturbation{});
  SamplerConfig cfg;
  cfg.steps = 20000;
  cfg.batch = 10000;
  cfg.seed = 17;
  cfg.alpha = 1.0;
  cfg.init = InitDist::ExactPT;
  auto em = simulate_reverse_em(exact, unit, cfg, &p0);
  cfg.scheme = Scheme::ExponentialIntegrator;
  auto ei = simulate_reverse_ei(exact, unit, cfg, &p0);

  // two-sample W1 between schemes vs the pure-Monte-Carlo W1 of equal-law draws
  auto w1 = [](Eigen::VectorXd a, Eigen::VectorXd b) {
    std::sort(a.data(), a.data() + a.size());
    std::sort(b.data(), b.data() + b.size());
    return (a - b).cwiseAbs().mean();
  };
  SamplerConfig cfg2 = cfg;
  cfg2.scheme = Scheme::EulerMaruyama;
  cfg2.seed = 18;
  auto em2 = simulate_reverse_em(exact, unit, cfg2, &p0);
  const double cross = w1(em.terminal.row(0), ei.terminal.row(0));
  const double mc_floor = w1(em.terminal.row(0), em2.terminal.row(0));
  CHECK(cross < 3.0 * mc_floor);
}

TEST_CASE("divergence reporting names the step") {
  ScheduleParams unit = ScheduleParams::unit(2.0);
  Gaussian1D model(0.5, unit);
  GaussianP0 p0(0.5);
  Perturbation blow;
  blow.epsilon = 1.0;
  blow.mode = PertMode::LinearField;
  blow.linear_coeff = 1e308;
  PerturbedScore bad(model, blow);
  SamplerConfig cfg;
  cfg.steps = 16;
  cfg.batch = 8;
  cfg.seed = 1;
  cfg.alpha = 1.0;
  cfg.init = InitDist::ExactPT;
  CHECK_THROWS_AS(simulate_reverse_em(bad, unit, cfg, &p0), DivergedError);
}
