#pragma once

#include <cmath>
#include <cstdint>

namespace difflab {

// Counter-based random numbers: every draw is a pure function of
// (seed, stream, trajectory, step, component). Nothing is stateful, so a
// batch can be partitioned across workers in any way without changing the
// numbers a given trajectory sees.
namespace rng {

inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

struct Key {
  uint64_t seed = 0;
  uint64_t stream = 0;

  uint64_t word(uint64_t traj, uint64_t step, uint64_t comp, uint64_t lane) const {
    uint64_t h = mix64(seed ^ 0x8f1bbcdc9b5ad34bull);
    h = mix64(h ^ stream);
    h = mix64(h ^ traj);
    h = mix64(h ^ step);
    return mix64(h ^ (comp << 32) ^ lane);
  }
};

// uniform in (0, 1): top 53 bits, offset so 0 is excluded
inline double to_unit(uint64_t w) {
  return (static_cast<double>(w >> 11) + 0.5) * 0x1.0p-53;
}

inline double uniform(const Key& k, uint64_t traj, uint64_t step, uint64_t comp) {
  return to_unit(k.word(traj, step, comp, 0));
}

// one standard normal per (traj, step, comp), Box-Muller cosine branch
inline double normal(const Key& k, uint64_t traj, uint64_t step, uint64_t comp) {
  const double u1 = to_unit(k.word(traj, step, comp, 0));
  const double u2 = to_unit(k.word(traj, step, comp, 1));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

// reserved stream ids
constexpr uint64_t kStreamInit = 0x11;       // sampler initial condition
constexpr uint64_t kStreamPath = 0x22;       // per-step sampler noise
constexpr uint64_t kStreamData = 0x33;       // p0 data draws
constexpr uint64_t kStreamTrain = 0x44;      // training batch assembly
constexpr uint64_t kStreamEval = 0x55;       // held-out evaluation draws
constexpr uint64_t kStreamProj = 0x66;       // sliced-W1 directions

}  // namespace rng
}  // namespace difflab
