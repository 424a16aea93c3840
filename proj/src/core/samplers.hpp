#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/datasets.hpp"
#include "core/scores.hpp"

namespace difflab {

enum class Scheme { EulerMaruyama, ExponentialIntegrator };
enum class InitDist { StandardNormal, ExactPT };

struct SamplerConfig {
  Scheme scheme = Scheme::EulerMaruyama;
  int64_t steps = 1000;
  int64_t batch = 1000;
  uint64_t seed = 0;
  double alpha = 1.0;  // h_t = alpha * g_t on the generative clock
  InitDist init = InitDist::StandardNormal;
  bool keep_paths = false;
  uint64_t traj_offset = 0;  // base trajectory index; noise is keyed globally

  void validate() const;
};

struct TrajectoryBatch {
  Batch terminal;            // dim x batch
  std::vector<Batch> paths;  // steps+1 snapshots when keep_paths
};

struct DivergedError : std::runtime_error {
  int64_t step;
  explicit DivergedError(int64_t step_)
      : std::runtime_error("sampler diverged (non-finite state) at step " +
                           std::to_string(step_)),
        step(step_) {}
};

// Closed-form forward draw: mu_t X0 + varpi_t Z, no time stepping.
Batch simulate_forward_exact(const P0Sampler& p0, const ScheduleParams& params, double t,
                             int64_t n, uint64_t seed, uint64_t first_idx = 0);

// Explicit Euler-Maruyama on a uniform generative-clock grid.
TrajectoryBatch simulate_reverse_em(const PerturbedScore& score, const ScheduleParams& params,
                                    const SamplerConfig& cfg,
                                    const P0Sampler* p0_for_init = nullptr);

// Exponential integrator (affine-beta schedules, h = alpha g).
TrajectoryBatch simulate_reverse_ei(const PerturbedScore& score, const ScheduleParams& params,
                                    const SamplerConfig& cfg,
                                    const P0Sampler* p0_for_init = nullptr);

TrajectoryBatch simulate_reverse(const PerturbedScore& score, const ScheduleParams& params,
                                 const SamplerConfig& cfg,
                                 const P0Sampler* p0_for_init = nullptr);

}  // namespace difflab
