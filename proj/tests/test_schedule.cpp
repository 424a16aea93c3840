#include <doctest.h>

#include <cmath>

#include "core/samplers.hpp"
#include "core/schedule.hpp"

using namespace difflab;

TEST_CASE("g: affine-beta closed form") {
  CHECK(g(ScheduleParams{1, 1, 2}, 0.7) == doctest::Approx(1.0).epsilon(1e-14));
  ScheduleParams paper{0.1, 20.0, 1.0};
  CHECK(g(paper, 0.0) == doctest::Approx(std::sqrt(0.1)).epsilon(1e-14));
  CHECK(g(paper, 1.0) == doctest::Approx(std::sqrt(20.0)).epsilon(1e-14));
  CHECK_THROWS_AS(g(paper, -0.1), std::domain_error);
  CHECK_THROWS_AS(g(paper, 1.1), std::domain_error);
}

TEST_CASE("varpi: conditional std") {
  ScheduleParams unit = ScheduleParams::unit(2.0);
  CHECK(varpi(unit, 0.0) == 0.0);
  // unit schedule, t = ln 4: 1 - exp(-t) = 3/4
  ScheduleParams unit4 = ScheduleParams::unit(4.0);
  CHECK(varpi(unit4, std::log(4.0)) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-14));
  ScheduleParams paper{0.1, 20.0, 10.0};
  CHECK(std::abs(varpi(paper, 10.0) - 1.0) < 1e-12);
}

TEST_CASE("mean_scale: closed form and variance preservation") {
  ScheduleParams unit = ScheduleParams::unit(2.0);
  CHECK(mean_scale(unit, 0.0) == 1.0);
  CHECK(mean_scale(unit, 2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  for (double t : {0.1, 0.5, 1.0}) {
    const double mu = mean_scale(unit, t), w = varpi(unit, t);
    CHECK(std::abs(mu * mu + w * w - 1.0) < 1e-12);
  }
}

TEST_CASE("variance preservation and monotonicity on a grid") {
  for (ScheduleParams p : {ScheduleParams{1, 1, 2}, ScheduleParams{0.1, 20, 1},
                           ScheduleParams{0.5, 3.5, 4}}) {
    double prev_w = -1.0, prev_mu = 2.0;
    for (int i = 0; i <= 100; ++i) {
      const double t = p.T * i / 100.0;
      const double mu = mean_scale(p, t), w = varpi(p, t);
      CHECK(std::abs(mu * mu + w * w - 1.0) < 1e-12);
      if (i > 0) {
        CHECK(w > prev_w);
        CHECK(mu < prev_mu);
      }
      prev_w = w;
      prev_mu = mu;
    }
  }
}

TEST_CASE("reverse_drift: closed-form checks") {
  ScheduleParams unit = ScheduleParams::unit(2.0);
  // sigma0 = 1 stationary score s = -x, h = 1: drift = x/2 + (1+1)/2 (-x) = -x/2
  double x = 0.8, s = -x, out = 0;
  reverse_drift(unit, &s, &x, 1, 0.7, 1.0, &out);
  CHECK(out == doctest::Approx(-0.5 * x).epsilon(1e-14));
  // h = 0 probability-flow specialization: g^2/2 x + g^2/2 s
  ScheduleParams paper{0.1, 20.0, 1.0};
  const double t_gen = 0.3;
  const double gb2 = 0.1 + 19.9 * (paper.T - t_gen);
  double s2 = 1.7;
  reverse_drift(paper, &s2, &x, 1, t_gen, 0.0, &out);
  CHECK(out == doctest::Approx(0.5 * gb2 * x + 0.5 * gb2 * s2).epsilon(1e-13));
}

TEST_CASE("rescale_to_unit_g") {
  auto id = rescale_to_unit_g(ScheduleParams::unit(2.0), [](double) { return 1.5; });
  CHECK(id.theta == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(id.h_of_tgen(0.3) == doctest::Approx(1.5).epsilon(1e-12));

  ScheduleParams paper{0.1, 20.0, 1.0};
  auto r = rescale_to_unit_g(paper, [](double) { return 2.0; });
  CHECK(r.theta == doctest::Approx(10.05).epsilon(1e-10));
  // constant hhat = 2 maps to 2 * g_rev
  for (double t : {0.0, 0.25, 0.9}) {
    CHECK(r.h_of_tgen(t) == doctest::Approx(2.0 * g_rev(paper, t)).epsilon(1e-12));
  }
}

TEST_CASE("time-rescaling consistency of the reverse SDE" * doctest::timeout(300)) {
  // unit-g process with constant hhat on [0, theta] vs the beta schedule with
  // h = hhat * g on [0, T]; terminal mean/variance agree within Monte Carlo
  // error for the 1D Gaussian score.
  const double sigma0 = 0.6, hhat = 1.0;
  ScheduleParams paper{0.1, 20.0, 1.0};
  const double theta = rescale_to_unit_g(paper, [&](double) { return hhat; }).theta;

  const int64_t n = 100000;
  SamplerConfig cfg;
  cfg.steps = 4000;
  cfg.batch = n;
  cfg.seed = 21;
  cfg.alpha = hhat;
  cfg.init = InitDist::ExactPT;

  Gaussian1D unit_model(sigma0, ScheduleParams::unit(theta));
  GaussianP0 p0(sigma0);
  PerturbedScore exact_unit(unit_model, Perturbation{});
  auto unit_run = simulate_reverse_em(exact_unit, unit_model.params(), cfg, &p0);

  Gaussian1D gen_model(sigma0, paper);
  PerturbedScore exact_gen(gen_model, Perturbation{});
  auto gen_run = simulate_reverse_em(exact_gen, paper, cfg, &p0);

  auto mean_var = [](const Batch& b) {
    const double m = b.row(0).mean();
    const double v = (b.row(0).array() - m).square().sum() / (b.cols() - 1);
    return std::pair<double, double>(m, v);
  };
  auto [m1, v1] = mean_var(unit_run.terminal);
  auto [m2, v2] = mean_var(gen_run.terminal);
  const double se_mean = sigma0 / std::sqrt(double(n));
  const double se_var = sigma0 * sigma0 * std::sqrt(2.0 / double(n));
  CHECK(std::abs(m1 - m2) < 3.0 * se_mean * std::sqrt(2.0));
  CHECK(std::abs(v1 - v2) < 3.0 * se_var * std::sqrt(2.0));
  // both match the data law
  CHECK(std::abs(v1 - sigma0 * sigma0) < 3.0 * se_var + 2e-3);
  CHECK(std::abs(v2 - sigma0 * sigma0) < 3.0 * se_var + 2e-3);
}
