#include "core/samplers.hpp"

#include <cmath>

#include "core/parallel.hpp"

namespace difflab {

void SamplerConfig::validate() const {
  if (steps < 1) throw std::invalid_argument("sampler: steps must be >= 1");
  if (batch < 1) throw std::invalid_argument("sampler: batch must be >= 1");
  if (!(alpha >= 0.0)) throw std::invalid_argument("sampler: alpha must be >= 0");
}

Batch simulate_forward_exact(const P0Sampler& p0, const ScheduleParams& params, double t,
                             int64_t n, uint64_t seed, uint64_t first_idx) {
  check_time(params, t);
  const double mu = mean_scale(params, t);
  const double w = varpi(params, t);
  const rng::Key data_key{seed, rng::kStreamData};
  const rng::Key noise_key{seed, rng::kStreamInit};
  Batch x(p0.dim(), n);
  parallel_for(n, [&](int64_t b, int64_t e) {
    for (int64_t j = b; j < e; ++j) {
      const uint64_t idx = first_idx + static_cast<uint64_t>(j);
      p0.draw(data_key, idx, x.col(j).data());
      for (int i = 0; i < p0.dim(); ++i)
        x(i, j) = mu * x(i, j) + w * rng::normal(noise_key, idx, 0, i);
    }
  });
  return x;
}

namespace {

struct StepCoeffs {
  double t;        // step start time on the generative clock
  double em_x;     // 1 + dt * gbar^2/2
  double em_s;     // dt * (gbar^2 + h^2)/2
  double em_z;     // h sqrt(dt)
  double ei_x;     // gamma
  double ei_s;     // (1 + alpha^2)(gamma - 1)
  double ei_z;     // sqrt(alpha^2 (gamma^2 - 1))
};

std::vector<StepCoeffs> build_steps(const ScheduleParams& p, const SamplerConfig& cfg) {
  const double dt = p.T / static_cast<double>(cfg.steps);
  std::vector<StepCoeffs> out(cfg.steps);
  for (int64_t k = 0; k < cfg.steps; ++k) {
    StepCoeffs c;
    c.t = static_cast<double>(k) * dt;
    const double gb2 = p.beta0 + (p.beta1 - p.beta0) * (p.T - c.t);
    const double h = cfg.alpha * std::sqrt(gb2);
    c.em_x = 1.0 + dt * 0.5 * gb2;
    c.em_s = dt * 0.5 * (gb2 + h * h);
    c.em_z = h * std::sqrt(dt);
    const double gamma =
        std::exp(dt * (2.0 * p.beta0 + (2.0 * c.t - 2.0 * p.T + dt) * (p.beta0 - p.beta1)) / 4.0);
    c.ei_x = gamma;
    c.ei_s = (1.0 + cfg.alpha * cfg.alpha) * (gamma - 1.0);
    c.ei_z = std::sqrt(cfg.alpha * cfg.alpha * (gamma * gamma - 1.0));
    out[k] = c;
  }
  return out;
}

Batch initial_state(const PerturbedScore& score, const ScheduleParams& params,
                    const SamplerConfig& cfg, const P0Sampler* p0, int64_t b, int64_t e) {
  const int dim = score.base().dim();
  const int64_t n = e - b;
  if (cfg.init == InitDist::ExactPT) {
    if (!p0) throw std::invalid_argument("sampler: exact_pT init needs a p0 sampler");
    return simulate_forward_exact(*p0, params, params.T, n, cfg.seed,
                                  cfg.traj_offset + static_cast<uint64_t>(b));
  }
  const rng::Key key{cfg.seed, rng::kStreamInit};
  Batch x(dim, n);
  for (int64_t j = 0; j < n; ++j)
    for (int i = 0; i < dim; ++i)
      x(i, j) = rng::normal(key, cfg.traj_offset + static_cast<uint64_t>(b + j), 0, i);
  return x;
}

TrajectoryBatch run_scheme(const PerturbedScore& score, const ScheduleParams& params,
                           const SamplerConfig& cfg, const P0Sampler* p0, bool euler) {
  params.validate();
  cfg.validate();
  const int dim = score.base().dim();
  const auto steps = build_steps(params, cfg);
  const rng::Key path_key{cfg.seed, rng::kStreamPath};

  TrajectoryBatch result;
  result.terminal.resize(dim, cfg.batch);
  if (cfg.keep_paths)
    result.paths.assign(cfg.steps + 1, Batch::Zero(dim, cfg.batch));

  parallel_for(cfg.batch, [&](int64_t b, int64_t e) {
    Batch x = initial_state(score, params, cfg, p0, b, e);
    Batch s(dim, e - b);
    if (cfg.keep_paths) result.paths[0].middleCols(b, e - b) = x;
    for (int64_t k = 0; k < cfg.steps; ++k) {
      const StepCoeffs& c = steps[k];
      score.eval_batch(c.t, params.T, x, s);
      const double cx = euler ? c.em_x : c.ei_x;
      const double cs = euler ? c.em_s : c.ei_s;
      const double cz = euler ? c.em_z : c.ei_z;
      x = cx * x + cs * s;
      if (cz != 0.0) {
        for (int64_t j = 0; j < e - b; ++j) {
          const uint64_t traj = cfg.traj_offset + static_cast<uint64_t>(b + j);
          for (int i = 0; i < dim; ++i)
            x(i, j) += cz * rng::normal(path_key, traj, static_cast<uint64_t>(k), i);
        }
      }
      if (!std::isfinite(x.sum())) throw DivergedError(k);
      if (cfg.keep_paths) result.paths[k + 1].middleCols(b, e - b) = x;
    }
    result.terminal.middleCols(b, e - b) = x;
  });
  return result;
}

}  // namespace

TrajectoryBatch simulate_reverse_em(const PerturbedScore& score, const ScheduleParams& params,
                                    const SamplerConfig& cfg, const P0Sampler* p0) {
  return run_scheme(score, params, cfg, p0, true);
}

TrajectoryBatch simulate_reverse_ei(const PerturbedScore& score, const ScheduleParams& params,
                                    const SamplerConfig& cfg, const P0Sampler* p0) {
  return run_scheme(score, params, cfg, p0, false);
}

TrajectoryBatch simulate_reverse(const PerturbedScore& score, const ScheduleParams& params,
                                 const SamplerConfig& cfg, const P0Sampler* p0) {
  return cfg.scheme == Scheme::EulerMaruyama ? simulate_reverse_em(score, params, cfg, p0)
                                             : simulate_reverse_ei(score, params, cfg, p0);
}

}  // namespace difflab
